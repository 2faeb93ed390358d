#pragma once

#include <cstdint>
#include <vector>

#include "toral/observable.hpp"

namespace toral {

/// Hypothesis parameters for the two tail conditions
///   sum_{|k| >= b} |c_k|^q <= R log^-theta(b)   (F1, q = p / (p - 1))
///   sum_{|k| >= b} |c_k|^2 <= R log^-beta(b)    (F2)
struct ConditionSpec {
  double p = 4.0;
  double theta = 0.0;
  double beta = 0.0;
  double R = 1.0;
  std::vector<std::int64_t> b_values;

  double q() const { return p / (p - 1.0); }
};

/// Rigorous upper bound on sum_{|k| >= b} |c_k|^s, split into the exact sum
/// over materialised coefficients and an analytic bound on the rest.
struct TailBound {
  double measured = 0;
  double remainder = 0;  // +inf when the analytic tail diverges
  bool beyond_radius = false;
  double upper() const { return measured + remainder; }
};

struct TailEntry {
  std::int64_t b = 0;
  double measured = 0;
  double remainder_bound = 0;
  double upper = 0;
  double bound = 0;       // R log^-exponent(b)
  double minimal_R = 0;   // smallest R for which this inequality holds
  bool holds = false;
  bool beyond_radius = false;
};

struct ConditionReport {
  double p = 0;
  double q = 0;
  double theta = 0;
  double beta = 0;
  double R = 0;
  std::vector<TailEntry> condF1_tail;
  std::vector<TailEntry> condF2_tail;
  double theta_required_F1 = 0;   // (p^2 - 2) / (p (p - 1))
  double beta_required_F2 = 0;    // (3p - 4) / p
  double combined_threshold = 0;  // (3p - 4) / (2 (p - 1))
  bool tails_hold_F1 = false;
  bool tails_hold_F2 = false;
  bool satisfied_F1 = false;
  bool satisfied_F2 = false;
  /// theta alone implies F2 through F1 (theta above the combined threshold).
  bool theta_implies_F2 = false;
};

double theta_required_F1(double p);
double beta_required_F2(double p);
double combined_threshold(double p);

/// Tail sum of |c_k|^exponent over |k| >= b.
TailBound tail_bound(const FourierObservable& f, double exponent, std::int64_t b);

/// Throws BadExponent unless p in (2, 4]; DegenerateGrid for b < 2.
ConditionReport check_conditions(const FourierObservable& f, const ConditionSpec& spec);

struct TailFit {
  double theta_hat = 0;
  double standard_error = 0;
  double intercept = 0;
  double r_squared = 0;
  double max_abs_residual = 0;
  std::vector<double> residuals;
  /// Residuals too large for a log^-theta(b) law: the model is misspecified.
  bool poor_fit = false;
};

/// Least squares of log(tail) against log log(b); theta_hat = -slope.
/// Throws DegenerateGrid with fewer than 4 points, a zero or infinite tail,
/// or a closed-form grid point beyond the materialised radius.
TailFit fit_tail_exponent(const FourierObservable& f, double exponent, const std::vector<std::int64_t>& b_grid);

}  // namespace toral
