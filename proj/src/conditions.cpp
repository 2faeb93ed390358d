#include "toral/conditions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "toral/error.hpp"
#include "toral/summation.hpp"

namespace toral {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Residuals beyond these mark a tail that does not follow R log^-theta(b).
constexpr double kPoorFitResidual = 0.05;
constexpr double kPoorFitR2 = 0.995;

/// Per-axis weight g(j) with |c_k|^s = A^s prod_i g(k_i).
double axis_weight(const FourierObservable& f, double s, double j) {
  switch (f.kind()) {
    case ObservableKind::ProductDecay: return std::pow(1.0 + j, -f.exponent() * s);
    case ObservableKind::Leonov:
      return std::pow(1.0 + j, -0.75 * s) * std::pow(std::log(2.0 + j), -f.exponent() * s);
    case ObservableKind::Explicit: break;
  }
  return 0.0;
}

/// Upper bound on sum_{j > n} g(j) (one side) by comparison with the integral
/// of the decreasing majorant over [n, inf).
double one_sided_tail(const FourierObservable& f, double s, std::int64_t n) {
  const double N = static_cast<double>(n);
  if (f.kind() == ObservableKind::ProductDecay) {
    const double power = f.exponent() * s;
    if (power <= 1.0) return kInf;
    return std::pow(1.0 + N, 1.0 - power) / (power - 1.0);
  }
  // Leonov: (1+t)^-a log^-g(2+t), a = 3s/4, g = alpha s.
  const double a = 0.75 * s;
  const double g = f.exponent() * s;
  double best = kInf;
  if (a > 1.0) best = std::pow(std::log(2.0 + N), -g) * std::pow(1.0 + N, 1.0 - a) / (a - 1.0);
  // log(2+t) >= log(1+t) and (1+t)^-a <= (1+t)^-1 give
  // int_n^inf (1+t)^-1 log^-g(1+t) dt = log^{1-g}(1+n) / (g-1).
  if (a >= 1.0 - 1e-12 && g > 1.0 && n >= 1) best = std::min(best, std::pow(std::log(1.0 + N), 1.0 - g) / (g - 1.0));
  return best;
}

/// Upper bound on sum_{j in Z} g(j): exact up to `radius`, integral bound beyond.
double axis_total(const FourierObservable& f, double s, std::int64_t radius) {
  CompensatedSum sum;
  sum.add(axis_weight(f, s, 0.0));
  for (std::int64_t j = radius; j >= 1; --j) sum.add(2.0 * axis_weight(f, s, static_cast<double>(j)));
  return sum.value() + 2.0 * one_sided_tail(f, s, radius);
}

/// Bound on sum over {|k| > n} via {|k| > n} subset of union_i {|k_i| > n}.
double closed_form_tail(const FourierObservable& f, double s, std::int64_t n) {
  const double side = one_sided_tail(f, s, n);
  if (std::isinf(side)) return kInf;
  const auto d = static_cast<double>(f.dim());
  double others = 1.0;
  if (f.dim() > 1) {
    const double total = axis_total(f, s, f.truncation_radius());
    if (std::isinf(total)) return kInf;
    others = std::pow(total, d - 1.0);
  }
  return std::pow(f.amplitude(), s) * d * 2.0 * side * others;
}

void check_exponent(double p) {
  if (!(p > 2.0 && p <= 4.0)) throw Error(ErrorCode::BadExponent, "p must lie in (2, 4], got " + std::to_string(p));
}

TailEntry make_entry(const TailBound& t, std::int64_t b, double R, double exponent) {
  TailEntry e;
  e.b = b;
  e.measured = t.measured;
  e.remainder_bound = t.remainder;
  e.upper = t.upper();
  const double logb = std::log(static_cast<double>(b));
  e.bound = R * std::pow(logb, -exponent);
  e.minimal_R = e.upper * std::pow(logb, exponent);
  e.holds = e.upper <= e.bound;
  e.beyond_radius = t.beyond_radius;
  return e;
}

}  // namespace

double theta_required_F1(double p) { return (p * p - 2.0) / (p * (p - 1.0)); }
double beta_required_F2(double p) { return (3.0 * p - 4.0) / p; }
double combined_threshold(double p) { return (3.0 * p - 4.0) / (2.0 * (p - 1.0)); }

TailBound tail_bound(const FourierObservable& f, double exponent, std::int64_t b) {
  TailBound out;
  out.beyond_radius = b > f.truncation_radius();
  // Largest |k| first: small terms accumulate before large ones.
  std::vector<std::pair<std::int64_t, double>> entries;
  entries.reserve(f.terms().size());
  for (const auto& t : f.terms()) {
    const std::int64_t norm = sup_norm(t.k);
    if (norm >= b) entries.emplace_back(norm, std::pow(std::abs(t.c), exponent));
  }
  std::stable_sort(entries.begin(), entries.end(), [](const auto& a, const auto& c) { return a.first > c.first; });
  CompensatedSum sum;
  for (const auto& e : entries) sum.add(e.second);
  out.measured = sum.value();
  if (f.kind() != ObservableKind::Explicit)
    out.remainder = closed_form_tail(f, exponent, std::max(f.truncation_radius(), b - 1));
  return out;
}

ConditionReport check_conditions(const FourierObservable& f, const ConditionSpec& spec) {
  check_exponent(spec.p);
  ConditionReport r;
  r.p = spec.p;
  r.q = spec.q();
  r.theta = spec.theta;
  r.beta = spec.beta;
  r.R = spec.R;
  r.theta_required_F1 = theta_required_F1(spec.p);
  r.beta_required_F2 = beta_required_F2(spec.p);
  r.combined_threshold = combined_threshold(spec.p);
  r.tails_hold_F1 = r.tails_hold_F2 = true;
  for (std::int64_t b : spec.b_values) {
    if (b < 2) throw Error(ErrorCode::DegenerateGrid, "tail conditions need b >= 2, got " + std::to_string(b));
    r.condF1_tail.push_back(make_entry(tail_bound(f, r.q, b), b, spec.R, spec.theta));
    r.condF2_tail.push_back(make_entry(tail_bound(f, 2.0, b), b, spec.R, spec.beta));
    r.tails_hold_F1 = r.tails_hold_F1 && r.condF1_tail.back().holds;
    r.tails_hold_F2 = r.tails_hold_F2 && r.condF2_tail.back().holds;
  }
  r.satisfied_F1 = r.tails_hold_F1 && spec.theta > r.theta_required_F1;
  r.satisfied_F2 = r.tails_hold_F2 && spec.beta > r.beta_required_F2;
  r.theta_implies_F2 = spec.theta > r.combined_threshold;
  return r;
}

TailFit fit_tail_exponent(const FourierObservable& f, double exponent, const std::vector<std::int64_t>& b_grid) {
  if (b_grid.size() < 4) throw Error(ErrorCode::DegenerateGrid, "need at least 4 grid points");
  std::vector<double> xs, ys;
  for (std::int64_t b : b_grid) {
    if (b < 2) throw Error(ErrorCode::DegenerateGrid, "grid points must be >= 2");
    if (f.kind() != ObservableKind::Explicit && b > f.truncation_radius())
      throw Error(ErrorCode::DegenerateGrid, "b = " + std::to_string(b) + " lies beyond the materialised radius");
    const double tail = tail_bound(f, exponent, b).upper();
    if (!(tail > 0.0) || std::isinf(tail))
      throw Error(ErrorCode::DegenerateGrid, "tail at b = " + std::to_string(b) + " is " + (tail == 0.0 ? "zero" : "infinite"));
    xs.push_back(std::log(std::log(static_cast<double>(b))));
    ys.push_back(std::log(tail));
  }
  const auto n = static_cast<double>(xs.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx <= 0) throw Error(ErrorCode::DegenerateGrid, "grid points must be distinct");
  TailFit fit;
  const double slope = sxy / sxx;
  fit.theta_hat = -slope;
  fit.intercept = my - slope * mx;
  double sse = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double res = ys[i] - (fit.intercept + slope * xs[i]);
    fit.residuals.push_back(res);
    fit.max_abs_residual = std::max(fit.max_abs_residual, std::fabs(res));
    sse += res * res;
  }
  fit.r_squared = syy > 0 ? 1.0 - sse / syy : 1.0;
  fit.standard_error = std::sqrt(sse / (n - 2.0) / sxx);
  fit.poor_fit = fit.max_abs_residual > kPoorFitResidual || fit.r_squared < kPoorFitR2;
  return fit;
}

}  // namespace toral
