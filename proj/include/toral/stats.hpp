#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "toral/automorphism.hpp"
#include "toral/covariance.hpp"
#include "toral/observable.hpp"
#include "toral/orbit.hpp"

namespace toral {

struct ExperimentPlan {
  ExperimentPlan(ToralAutomorphism t, FourierObservable f) : automorphism(std::move(t)), observable(std::move(f)) {}

  ToralAutomorphism automorphism;
  FourierObservable observable;
  std::size_t n = 1000;
  std::size_t samples = 10000;
  std::uint64_t q = kDefaultDenominator;
  std::uint64_t seed = 1;
  unsigned workers = 1;
};

/// Runs body(i) for i in [0, count) on `workers` threads with a static
/// contiguous partition. Callers write into slot i only.
void for_each_index(std::size_t count, unsigned workers, const std::function<void(std::size_t)>& body);

struct Estimate {
  double value = 0;
  double standard_error = 0;
};

/// Leave-one-out jackknife of stat(column means). columns[j][i] is sample i of
/// column j.
Estimate jackknife(const std::vector<std::vector<double>>& columns,
                   const std::function<double(std::span<const double>)>& stat);

/// sup_x |F_n(x) - Phi(x)|.
double ks_distance_normal(std::vector<double> z);
double ks_critical_95(std::size_t samples);

struct VarianceRow {
  std::size_t n = 0;
  Estimate empirical;  // E-hat(S_n^2) / n
  double exact = 0;    // E(S_n^2) / n
  bool within_3se = false;
};

std::vector<VarianceRow> run_variance_growth(const ExperimentPlan& plan, const std::vector<std::size_t>& n_grid);

struct KsAttempt {
  std::uint64_t seed = 0;
  double ks_distance = 0;
  bool pass = false;
};

struct CltReport {
  std::size_t n = 0;
  std::size_t samples = 0;
  double sigma2_used = 0;
  double ks_distance = 0;
  double ks_critical_95 = 0;
  Estimate empirical_var_over_n;
  double exact_var_over_n = 0;
  bool pass_variance = false;
  bool pass_ks = false;
  std::uint64_t seed_used = 0;
  /// Every seed tried under the two-strike policy, in order.
  std::vector<KsAttempt> attempts;
};

/// Single attempt at plan.seed. Throws DegenerateVariance when sigma^2 = 0.
CltReport run_clt(const ExperimentPlan& plan);

/// Retries once with seed + 1 when the first KS test fails.
CltReport run_clt_two_strike(const ExperimentPlan& plan);

struct ScalingReport {
  std::vector<std::size_t> grid;
  std::vector<Estimate> mean_abs_max;  // E-hat[max_{k <= n} |S_k|]
  Estimate fitted_exponent;
  double intercept = 0;
};

/// Throws DegenerateGrid for fewer than 4 points, less than two decades, a
/// non-increasing grid or an identically zero series.
ScalingReport run_scaling(const ExperimentPlan& plan, const std::vector<std::size_t>& n_grid);

struct DecorrelationRow {
  std::size_t lag = 0;
  Estimate empirical;  // Cov-hat(f, f o T^lag)
  double exact = 0;
  bool within_3se = false;
};

std::vector<DecorrelationRow> run_decorrelation(const ExperimentPlan& plan, const std::vector<std::size_t>& lags);

}  // namespace toral
