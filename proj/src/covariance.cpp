#include "toral/covariance.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <limits>
#include <string>

#include "toral/error.hpp"
#include "toral/summation.hpp"

namespace toral {

namespace {

using LongMatrix = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
using ComplexLong = std::complex<long double>;

/// Relative slack covering the floating error of a computed eigenvector.
constexpr long double kEigenSlack = 1e-9L;
constexpr long double kResidualLimit = 1e-12L;

std::string describe(const Frequency& k) {
  std::string s = "(";
  for (std::size_t i = 0; i < k.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(k[i]);
  }
  return s + ")";
}

IntVector to_int_vector(const Frequency& k) {
  IntVector v;
  v.reserve(k.size());
  for (auto x : k) v.emplace_back(static_cast<long>(x));
  return v;
}

/// The support frequency equal to v, if any.
std::optional<Frequency> in_support(const FourierObservable& f, const IntVector& v) {
  Frequency k(v.size());
  const BigInt bound = static_cast<long>(f.support_radius());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (abs(v[i]) > bound) return std::nullopt;
    k[i] = v[i].get_si();
  }
  if (f.coefficient(k) == std::complex<double>(0)) return std::nullopt;
  return k;
}

double real_product(std::complex<double> a, std::complex<double> m) {
  // Re(a conj(m))
  return a.real() * m.real() + a.imag() * m.imag();
}

/// Linear functional v -> w^T v with w a right eigenvector of S; it scales by
/// lambda under tS.
struct ExpandingCoordinate {
  std::vector<ComplexLong> w;  // ||w||_1 = 1
  long double modulus_lo = 0;  // certified lower bound on |lambda|
  long double modulus_hi = 0;
};

long double modulus_lower(const CertifiedRoot& r) {
  const mpq_class sq = r.center_re * r.center_re + r.center_im * r.center_im;
  const long double centre = std::sqrt(static_cast<long double>(sq.get_d())) * (1 - 1e-15L);
  return centre - static_cast<long double>(r.radius.get_d()) * (1 + 1e-15L);
}

long double modulus_upper(const CertifiedRoot& r) {
  const mpq_class sq = r.center_re * r.center_re + r.center_im * r.center_im;
  const long double centre = std::sqrt(static_cast<long double>(sq.get_d())) * (1 + 1e-15L);
  return centre + static_cast<long double>(r.radius.get_d()) * (1 + 1e-15L);
}

std::vector<ExpandingCoordinate> expanding_coordinates(const ToralAutomorphism& t) {
  const std::size_t d = t.dim();
  LongMatrix s(d, d);
  long double norm = 0;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      s(i, j) = static_cast<long double>(t.matrix()(i, j).get_d());
      norm = std::max(norm, std::fabs(s(i, j)));
    }
  Eigen::EigenSolver<LongMatrix> solver(s, true);
  if (solver.info() != Eigen::Success) return {};
  const auto values = solver.eigenvalues();
  const auto vectors = solver.eigenvectors();

  std::vector<ExpandingCoordinate> out;
  for (const auto& root : t.classification().roots) {
    if (root.region != ModulusRegion::Expanding) continue;
    const ComplexLong centre(root.center.real(), root.center.imag());
    long best = -1;
    long double best_dist = std::numeric_limits<long double>::infinity();
    for (long j = 0; j < values.size(); ++j) {
      const long double dist = std::abs(values(j) - centre);
      if (dist < best_dist) {
        best_dist = dist;
        best = j;
      }
    }
    if (best < 0) continue;
    ExpandingCoordinate c;
    long double l1 = 0;
    for (std::size_t i = 0; i < d; ++i) l1 += std::abs(vectors(i, best));
    if (!(l1 > 0)) continue;
    for (std::size_t i = 0; i < d; ++i) c.w.push_back(vectors(i, best) / l1);
    // Residual of S w = lambda w relative to ||S|| ||w||.
    long double residual = 0;
    for (std::size_t i = 0; i < d; ++i) {
      ComplexLong acc = 0;
      for (std::size_t j = 0; j < d; ++j) acc += s(i, j) * c.w[j];
      residual = std::max(residual, std::abs(acc - values(best) * c.w[i]));
    }
    if (residual > kResidualLimit * std::max(norm, 1.0L)) continue;
    c.modulus_lo = modulus_lower(root);
    c.modulus_hi = modulus_upper(root);
    if (c.modulus_lo <= 1) continue;
    out.push_back(std::move(c));
  }
  return out;
}

/// Least n after which |w^T tS^n m| provably exceeds every |w^T k| with k in
/// the support; nullopt if this coordinate cannot certify m.
std::optional<long> certified_exit(const ExpandingCoordinate& c, const Frequency& m, std::int64_t radius) {
  ComplexLong proj = 0;
  long double m_inf = 0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    proj += c.w[i] * static_cast<long double>(m[i]);
    m_inf = std::max(m_inf, std::fabs(static_cast<long double>(m[i])));
  }
  // ||w_true - w||_1 <= slack, so |w_true^T m| >= |w^T m| - slack |m|_inf.
  const long double start = std::abs(proj) - kEigenSlack * m_inf;
  if (!(start > 0)) return std::nullopt;
  const long double margin = (c.modulus_hi - c.modulus_lo) / c.modulus_lo;
  const long double target = (1 + kEigenSlack) * static_cast<long double>(radius) * (1 + margin);
  if (start > target) return 0L;
  const long double steps = std::log(target / start) / std::log(c.modulus_lo);
  if (!(steps < 1e15L)) return std::nullopt;
  long n = static_cast<long>(std::floor(steps)) + 1;
  while (std::pow(c.modulus_lo, static_cast<long double>(n)) * start <= target) ++n;
  return n;
}

}  // namespace

double covariance_at(const FourierObservable& f, const ToralAutomorphism& t, long n) {
  if (f.dim() != t.dim()) throw Error(ErrorCode::DimensionMismatch, "observable and automorphism dimensions differ");
  ExtendedSum sum;
  for (const auto& term : f.terms()) {
    const auto image = in_support(f, t.pushforward(n, to_int_vector(term.k)));
    if (image) sum.add(real_product(f.coefficient(*image), term.c));
  }
  return static_cast<double>(sum.value());
}

long default_escape_cap(const FourierObservable& f, const ToralAutomorphism& t) {
  const double r_lo = t.classification().spectral_radius.lower();
  if (!(r_lo > 1)) return 1;
  const auto radius = static_cast<std::uint64_t>(std::max<std::int64_t>(f.support_radius(), 1));
  const double bits = static_cast<double>(std::bit_width(radius));
  return static_cast<long>(std::ceil(10.0 * static_cast<double>(t.dim()) * bits / std::log2(r_lo)));
}

VarianceReport sigma2(const FourierObservable& f, const ToralAutomorphism& t, long cap,
                      const std::vector<long>& partial_sum_n) {
  if (f.dim() != t.dim()) throw Error(ErrorCode::DimensionMismatch, "observable and automorphism dimensions differ");
  VarianceReport r;
  r.cap = cap > 0 ? cap : default_escape_cap(f, t);
  r.truncation_radius = f.truncation_radius();

  if (f.empty()) {
    r.covariances = {0.0};
    r.degenerate = true;
    for (long n : partial_sum_n) r.partial_sums.emplace_back(n, 0.0);
    return r;
  }

  const auto coords = expanding_coordinates(t);
  // Returns of each m to the support: lag -> sum of Re(c_image conj(c_m)).
  std::vector<ExtendedSum> lag_sums(1);
  for (const auto& term : f.terms()) lag_sums[0].add(std::norm(term.c));

  long last = 0;
  for (const auto& term : f.terms()) {
    std::optional<long> exit;
    for (const auto& c : coords) {
      const auto n = certified_exit(c, term.k, f.support_radius());
      if (n && (!exit || *n < *exit)) exit = n;
    }
    if (!exit)
      throw Error(ErrorCode::EscapeCapExceeded,
                  "no expanding coordinate certifies that m = " + describe(term.k) + " leaves the support");
    if (*exit > r.cap)
      throw Error(ErrorCode::EscapeCapExceeded, "m = " + describe(term.k) + " needs " + std::to_string(*exit) +
                                                    " steps to leave the support, cap is " + std::to_string(r.cap));
    EscapeRecord rec{term.k, 0, *exit};
    IntVector v = to_int_vector(term.k);
    for (long n = 1; n < *exit; ++n) {
      v = t.transposed() * v;
      const auto image = in_support(f, v);
      if (!image) continue;
      rec.last_return = n;
      if (lag_sums.size() <= static_cast<std::size_t>(n)) lag_sums.resize(n + 1);
      lag_sums[n].add(real_product(f.coefficient(*image), term.c));
    }
    last = std::max(last, rec.last_return);
    r.escapes.push_back(std::move(rec));
  }

  r.N0 = last + 1;
  lag_sums.resize(r.N0 + 1);
  ExtendedSum total;
  long double scale = 0;
  for (long n = 0; n <= r.N0; ++n) {
    const long double cov = lag_sums[n].value();
    r.covariances.push_back(static_cast<double>(cov));
    total.add(n == 0 ? cov : 2 * cov);
    scale += (n == 0 ? 1 : 2) * std::fabs(cov);
  }
  r.sigma2 = static_cast<double>(total.value());
  r.degenerate = std::fabs(r.sigma2) <= 1e-12 * static_cast<double>(scale);
  for (long n : partial_sum_n) r.partial_sums.emplace_back(n, exact_second_moment(r, n));
  return r;
}

double exact_second_moment(const VarianceReport& r, long n) {
  if (n <= 0 || r.covariances.empty()) return 0.0;
  ExtendedSum sum;
  sum.add(static_cast<long double>(n) * r.covariances[0]);
  const long top = std::min<long>(n - 1, static_cast<long>(r.covariances.size()) - 1);
  for (long i = 1; i <= top; ++i) sum.add(2.0L * static_cast<long double>(n - i) * r.covariances[i]);
  return static_cast<double>(sum.value());
}

double exact_second_moment(const FourierObservable& f, const ToralAutomorphism& t, long n) {
  return exact_second_moment(sigma2(f, t), n);
}

}  // namespace toral
