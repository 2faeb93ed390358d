#include "toral/observable.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "toral/error.hpp"

namespace toral {

namespace {

std::string describe(const Frequency& k) {
  std::string s = "(";
  for (std::size_t i = 0; i < k.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(k[i]);
  }
  return s + ")";
}

Frequency negate(const Frequency& k) {
  Frequency out(k.size());
  for (std::size_t i = 0; i < k.size(); ++i) out[i] = -k[i];
  return out;
}

/// Per-axis factor of a closed-form coefficient modulus.
double axis_factor(ObservableKind kind, double exponent, std::int64_t j) {
  const double a = static_cast<double>(j < 0 ? -j : j);
  switch (kind) {
    case ObservableKind::ProductDecay: return std::pow(1.0 + a, -exponent);
    case ObservableKind::Leonov: return std::pow(1.0 + a, -0.75) * std::pow(std::log(2.0 + a), -exponent);
    case ObservableKind::Explicit: break;
  }
  return 0.0;
}

/// exp(2 pi i r / q) for an exact residue r.
std::complex<double> unit_phase(std::uint64_t r, std::uint64_t q) {
  double t = static_cast<double>(static_cast<long double>(r) * (1.0L / static_cast<long double>(q)));
  if (t > 0.5) t -= 1.0;
  const double angle = 2.0 * std::numbers::pi * t;
  return {std::cos(angle), std::sin(angle)};
}

std::uint64_t phase_residue(const Frequency& k, const ModularState& x) {
  const Modulus mod(x.q);
  std::uint64_t acc = 0;
  for (std::size_t i = 0; i < k.size(); ++i) {
    acc += mod.mul(mod.from_signed(k[i]), x.residues[i] % x.q);
    if (acc >= x.q) acc -= x.q;
  }
  return acc;
}

}  // namespace

std::int64_t sup_norm(const Frequency& k) {
  std::int64_t m = 0;
  for (auto v : k) m = std::max(m, v < 0 ? -v : v);
  return m;
}

bool is_canonical(const Frequency& k) {
  for (auto v : k)
    if (v != 0) return v > 0;
  return false;
}

std::string_view to_string(ObservableKind kind) {
  switch (kind) {
    case ObservableKind::Explicit: return "explicit";
    case ObservableKind::ProductDecay: return "product_decay";
    case ObservableKind::Leonov: return "leonov";
  }
  return "explicit";
}

ObservableKind observable_kind_from_string(std::string_view name) {
  if (name == "explicit") return ObservableKind::Explicit;
  if (name == "product_decay") return ObservableKind::ProductDecay;
  if (name == "leonov") return ObservableKind::Leonov;
  throw Error(ErrorCode::Parse, "unknown observable kind '" + std::string(name) + "'");
}

FourierObservable FourierObservable::build(const ObservableSpec& spec) {
  if (spec.dim == 0) throw Error(ErrorCode::DimensionMismatch, "observable dimension must be >= 1");
  FourierObservable f;
  f.dim_ = spec.dim;
  f.kind_ = spec.kind;

  if (spec.kind == ObservableKind::Explicit) {
    for (const auto& [k, c] : spec.coefficients) {
      if (k.size() != spec.dim)
        throw Error(ErrorCode::DimensionMismatch, "frequency " + describe(k) + " has wrong dimension");
      if (sup_norm(k) == 0) {
        if (c != std::complex<double>(0)) throw Error(ErrorCode::NonSymmetricExplicitInput, "c_0 must vanish (centred f)");
        continue;
      }
      auto partner = spec.coefficients.find(negate(k));
      const std::complex<double> expected = std::conj(c);
      if (partner == spec.coefficients.end() ||
          std::abs(partner->second - expected) > 1e-12 * std::max(1.0, std::abs(c))) {
        throw Error(ErrorCode::NonSymmetricExplicitInput,
                    "c at " + describe(negate(k)) + " must be the conjugate of c at " + describe(k));
      }
      if (c == std::complex<double>(0)) continue;
      f.terms_.push_back({k, is_canonical(k) ? c : std::conj(partner->second)});
    }
    // Canonical values win so that c_{-k} = conj(c_k) holds bit-exactly.
    for (auto& t : f.terms_)
      if (!is_canonical(t.k)) t.c = std::conj(spec.coefficients.at(negate(t.k)));
    for (const auto& t : f.terms_) f.radius_ = std::max(f.radius_, sup_norm(t.k));
  } else {
    if (spec.truncation_radius < 1) throw Error(ErrorCode::ZeroRadius, "truncation radius must be >= 1");
    if (!(spec.amplitude > 0) || !(spec.exponent > 0))
      throw Error(ErrorCode::Parse, "closed-form observables need positive A and exponent");
    f.amplitude_ = spec.amplitude;
    f.exponent_ = spec.exponent;
    f.radius_ = spec.truncation_radius;
    const std::int64_t r = spec.truncation_radius;
    // Per-axis factors are shared by every frequency.
    std::vector<double> factor(static_cast<std::size_t>(r) + 1);
    for (std::int64_t j = 0; j <= r; ++j) factor[j] = axis_factor(spec.kind, spec.exponent, j);
    Frequency k(spec.dim, -r);
    while (true) {
      if (sup_norm(k) != 0) {
        double mag = spec.amplitude;
        for (auto v : k) mag *= factor[v < 0 ? -v : v];
        std::complex<double> c = mag;
        if (spec.phase) {
          const double phi = is_canonical(k) ? spec.phase(k) : -spec.phase(negate(k));
          c = std::polar(mag, phi);
        }
        f.terms_.push_back({k, c});
      }
      std::size_t axis = spec.dim;
      while (axis > 0) {
        --axis;
        if (k[axis] < r) {
          ++k[axis];
          break;
        }
        k[axis] = -r;
        if (axis == 0) {
          axis = spec.dim + 1;
          break;
        }
      }
      if (axis == spec.dim + 1) break;
    }
  }

  std::sort(f.terms_.begin(), f.terms_.end(), [](const FourierTerm& a, const FourierTerm& b) { return a.k < b.k; });
  for (const auto& t : f.terms_) {
    f.lookup_.emplace(t.k, t.c);
    if (is_canonical(t.k)) f.reps_.push_back(t);
    f.support_radius_ = std::max(f.support_radius_, sup_norm(t.k));
  }
  return f;
}

FourierObservable FourierObservable::from_representatives(std::size_t dim, const std::vector<FourierTerm>& reps) {
  ObservableSpec spec;
  spec.kind = ObservableKind::Explicit;
  spec.dim = dim;
  for (const auto& t : reps) {
    if (t.k.size() != dim) throw Error(ErrorCode::DimensionMismatch, "frequency " + describe(t.k) + " has wrong dimension");
    if (sup_norm(t.k) == 0) throw Error(ErrorCode::NonSymmetricExplicitInput, "k = 0 is not allowed (centred f)");
    auto [it, inserted] = spec.coefficients.emplace(t.k, t.c);
    if (!inserted && std::abs(it->second - t.c) > 1e-12 * std::max(1.0, std::abs(t.c)))
      throw Error(ErrorCode::NonSymmetricExplicitInput, "conflicting coefficients for " + describe(t.k));
    auto [jt, ins2] = spec.coefficients.emplace(negate(t.k), std::conj(t.c));
    if (!ins2 && std::abs(jt->second - std::conj(t.c)) > 1e-12 * std::max(1.0, std::abs(t.c)))
      throw Error(ErrorCode::NonSymmetricExplicitInput, "conflicting coefficients for " + describe(negate(t.k)));
  }
  return build(spec);
}

std::complex<double> FourierObservable::coefficient(const Frequency& k) const {
  auto it = lookup_.find(k);
  return it == lookup_.end() ? std::complex<double>(0) : it->second;
}

double FourierObservable::l1_norm() const {
  double s = 0;
  for (const auto& t : terms_) s += std::abs(t.c);
  return s;
}

double FourierObservable::l2_norm_squared() const {
  double s = 0;
  for (const auto& t : terms_) s += std::norm(t.c);
  return s;
}

double evaluate(const FourierObservable& f, const ModularState& x) {
  if (x.dim() != f.dim()) throw Error(ErrorCode::DimensionMismatch, "point and observable dimensions differ");
  std::vector<std::uint64_t> reduced(x.residues);
  for (auto& r : reduced) r %= x.q;
  return ObservableEvaluator(f, x.q)(reduced.data());
}

std::complex<double> evaluate_complex(const FourierObservable& f, const ModularState& x) {
  if (x.dim() != f.dim()) throw Error(ErrorCode::DimensionMismatch, "point and observable dimensions differ");
  std::complex<double> sum = 0;
  for (const auto& t : f.terms()) sum += t.c * unit_phase(phase_residue(t.k, x), x.q);
  return sum;
}

ObservableEvaluator::ObservableEvaluator(const FourierObservable& f, std::uint64_t q)
    : modulus_(q), dim_(f.dim()) {
  for (const auto& t : f.representatives()) {
    for (auto v : t.k) freq_mod_q_.push_back(modulus_.from_signed(v));
    re_.push_back(2.0 * t.c.real());
    im_.push_back(2.0 * t.c.imag());
  }
}

double ObservableEvaluator::operator()(const std::uint64_t* residues) const {
  const std::uint64_t q = modulus_.value();
  const long double inv_q = 1.0L / static_cast<long double>(q);
  double sum = 0;
  for (std::size_t t = 0; t < re_.size(); ++t) {
    const std::uint64_t r = modulus_.dot(freq_mod_q_.data() + t * dim_, residues, dim_);
    double frac = static_cast<double>(static_cast<long double>(r) * inv_q);
    if (frac > 0.5) frac -= 1.0;
    const double angle = 2.0 * std::numbers::pi * frac;
    sum += re_[t] * std::cos(angle);
    if (im_[t] != 0.0) sum -= im_[t] * std::sin(angle);
  }
  return sum;
}

}  // namespace toral
