#include "toral/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <thread>

#include "toral/error.hpp"
#include "toral/summation.hpp"

namespace toral {

namespace {

void require_samples(const ExperimentPlan& plan) {
  if (plan.samples < 2)
    throw Error(ErrorCode::InsufficientSamples, "need at least 2 trajectories, got " + std::to_string(plan.samples));
  if (plan.n < 1) throw Error(ErrorCode::InsufficientSamples, "trajectory length must be >= 1");
}

bool within_3se(const Estimate& e, double exact) {
  const double gap = std::fabs(e.value - exact);
  if (e.standard_error > 0) return gap <= 3.0 * e.standard_error;
  return gap <= 1e-12 * std::max(1.0, std::fabs(exact));
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

/// Per-trajectory streaming state: S_n and running max |S_k| at checkpoints.
struct CheckpointSums {
  std::vector<double> sums;
  std::vector<double> maxima;
};

/// Iterates one trajectory from its sampled start to the last checkpoint.
CheckpointSums trajectory_checkpoints(const ExperimentPlan& plan, const OrbitStepper& stepper,
                                      const ObservableEvaluator& eval, std::size_t index,
                                      const std::vector<std::size_t>& checkpoints) {
  CheckpointSums out;
  out.sums.reserve(checkpoints.size());
  out.maxima.reserve(checkpoints.size());
  const ModularState x0 = sample_state(plan.seed, index, plan.q, plan.automorphism.dim());
  std::vector<std::uint64_t> cur(x0.residues), next(cur.size());
  CompensatedSum sum;
  double running_max = 0;
  std::size_t c = 0;
  const std::size_t last = checkpoints.empty() ? 0 : checkpoints.back();
  for (std::size_t k = 1; k <= last; ++k) {
    stepper.apply(cur.data(), next.data());
    cur.swap(next);
    sum.add(eval(cur.data()));
    const double s = sum.value();
    running_max = std::max(running_max, std::fabs(s));
    while (c < checkpoints.size() && checkpoints[c] == k) {
      out.sums.push_back(s);
      out.maxima.push_back(running_max);
      ++c;
    }
  }
  return out;
}

std::vector<CheckpointSums> simulate(const ExperimentPlan& plan, const std::vector<std::size_t>& checkpoints) {
  const OrbitStepper stepper(plan.automorphism, plan.q);
  const ObservableEvaluator eval(plan.observable, plan.q);
  std::vector<CheckpointSums> results(plan.samples);
  for_each_index(plan.samples, plan.workers, [&](std::size_t i) {
    results[i] = trajectory_checkpoints(plan, stepper, eval, i, checkpoints);
  });
  return results;
}

std::vector<std::size_t> sorted_unique(std::vector<std::size_t> grid) {
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

double mean_of(std::span<const double> m) { return m[0]; }

}  // namespace

void for_each_index(std::size_t count, unsigned workers, const std::function<void(std::size_t)>& body) {
  const std::size_t w = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(count, 1));
  if (w == 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(w);
  for (std::size_t t = 0; t < w; ++t) {
    const std::size_t begin = count * t / w, end = count * (t + 1) / w;
    pool.emplace_back([begin, end, &body] {
      for (std::size_t i = begin; i < end; ++i) body(i);
    });
  }
}

Estimate jackknife(const std::vector<std::vector<double>>& columns,
                   const std::function<double(std::span<const double>)>& stat) {
  const std::size_t k = columns.size();
  if (k == 0) return {};
  const std::size_t n = columns[0].size();
  if (n < 2) throw Error(ErrorCode::InsufficientSamples, "jackknife needs at least 2 samples");
  std::vector<double> totals(k), means(k);
  for (std::size_t j = 0; j < k; ++j) {
    totals[j] = compensated_total(columns[j]);
    means[j] = totals[j] / static_cast<double>(n);
  }
  Estimate e;
  e.value = stat(means);
  std::vector<double> loo(n), tmp(k);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < k; ++j) tmp[j] = (totals[j] - columns[j][i]) / static_cast<double>(n - 1);
    loo[i] = stat(tmp);
  }
  const double centre = compensated_total(loo) / static_cast<double>(n);
  CompensatedSum dev;
  for (double v : loo) dev.add((v - centre) * (v - centre));
  e.standard_error = std::sqrt(static_cast<double>(n - 1) / static_cast<double>(n) * dev.value());
  return e;
}

double ks_distance_normal(std::vector<double> z) {
  std::sort(z.begin(), z.end());
  const auto n = static_cast<double>(z.size());
  double d = 0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double f = normal_cdf(z[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

double ks_critical_95(std::size_t samples) { return 1.358 / std::sqrt(static_cast<double>(samples)); }

std::vector<VarianceRow> run_variance_growth(const ExperimentPlan& plan, const std::vector<std::size_t>& n_grid) {
  require_samples(plan);
  const auto grid = sorted_unique(n_grid);
  if (grid.empty() || grid.front() < 1) throw Error(ErrorCode::DegenerateGrid, "variance grid needs n >= 1");
  const auto report = sigma2(plan.observable, plan.automorphism);
  const auto sims = simulate(plan, grid);
  std::vector<VarianceRow> rows;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    std::vector<std::vector<double>> col(1, std::vector<double>(plan.samples));
    for (std::size_t i = 0; i < plan.samples; ++i) col[0][i] = sims[i].sums[g] * sims[i].sums[g];
    const double n = static_cast<double>(grid[g]);
    VarianceRow row;
    row.n = grid[g];
    row.empirical = jackknife(col, [n](std::span<const double> m) { return m[0] / n; });
    row.exact = exact_second_moment(report, static_cast<long>(grid[g])) / n;
    row.within_3se = within_3se(row.empirical, row.exact);
    rows.push_back(row);
  }
  return rows;
}

CltReport run_clt(const ExperimentPlan& plan) {
  require_samples(plan);
  const auto report = sigma2(plan.observable, plan.automorphism);
  if (report.degenerate || !(report.sigma2 > 0))
    throw Error(ErrorCode::DegenerateVariance,
                "sigma^2 = " + std::to_string(report.sigma2) +
                    ": the observable is a coboundary f = g o T - g, so S_n stays bounded and no CLT scaling applies");
  const auto sims = simulate(plan, {plan.n});
  CltReport r;
  r.n = plan.n;
  r.samples = plan.samples;
  r.sigma2_used = report.sigma2;
  r.seed_used = plan.seed;
  const double scale = std::sqrt(report.sigma2 * static_cast<double>(plan.n));
  std::vector<double> z(plan.samples);
  std::vector<std::vector<double>> col(1, std::vector<double>(plan.samples));
  for (std::size_t i = 0; i < plan.samples; ++i) {
    z[i] = sims[i].sums[0] / scale;
    col[0][i] = sims[i].sums[0] * sims[i].sums[0];
  }
  r.ks_distance = ks_distance_normal(std::move(z));
  r.ks_critical_95 = ks_critical_95(plan.samples);
  r.pass_ks = r.ks_distance < r.ks_critical_95;
  const double n = static_cast<double>(plan.n);
  r.empirical_var_over_n = jackknife(col, [n](std::span<const double> m) { return m[0] / n; });
  r.exact_var_over_n = exact_second_moment(report, static_cast<long>(plan.n)) / n;
  r.pass_variance = within_3se(r.empirical_var_over_n, r.exact_var_over_n);
  r.attempts.push_back({plan.seed, r.ks_distance, r.pass_ks});
  return r;
}

CltReport run_clt_two_strike(const ExperimentPlan& plan) {
  CltReport first = run_clt(plan);
  if (first.pass_ks) return first;
  ExperimentPlan retry = plan;
  retry.seed = plan.seed + 1;
  CltReport second = run_clt(retry);
  second.attempts.insert(second.attempts.begin(), first.attempts.begin(), first.attempts.end());
  return second;
}

ScalingReport run_scaling(const ExperimentPlan& plan, const std::vector<std::size_t>& n_grid) {
  require_samples(plan);
  if (n_grid.size() < 4) throw Error(ErrorCode::DegenerateGrid, "scaling fit needs at least 4 grid points");
  for (std::size_t i = 1; i < n_grid.size(); ++i)
    if (n_grid[i] <= n_grid[i - 1]) throw Error(ErrorCode::DegenerateGrid, "scaling grid must be strictly increasing");
  if (n_grid.front() < 1 || static_cast<double>(n_grid.back()) < 100.0 * static_cast<double>(n_grid.front()))
    throw Error(ErrorCode::DegenerateGrid, "scaling grid must span at least two decades");

  const auto sims = simulate(plan, n_grid);
  ScalingReport r;
  r.grid = n_grid;
  std::vector<double> xs, ys;
  for (std::size_t g = 0; g < n_grid.size(); ++g) {
    std::vector<std::vector<double>> col(1, std::vector<double>(plan.samples));
    for (std::size_t i = 0; i < plan.samples; ++i) col[0][i] = sims[i].maxima[g];
    r.mean_abs_max.push_back(jackknife(col, mean_of));
    xs.push_back(std::log(static_cast<double>(n_grid[g])));
    ys.push_back(std::log(r.mean_abs_max.back().value));
  }
  for (const auto& e : r.mean_abs_max)
    if (!(e.value > 0))
      throw Error(ErrorCode::DegenerateGrid, "max |S_k| is exactly zero on the grid; no log fit is possible");

  const double n = static_cast<double>(xs.size());
  const double mx = compensated_total(xs) / n, my = compensated_total(ys) / n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  const double slope = sxy / sxx;
  r.intercept = my - slope * mx;
  double sse = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double res = ys[i] - (r.intercept + slope * xs[i]);
    sse += res * res;
  }
  r.fitted_exponent = {slope, std::sqrt(sse / (n - 2.0) / sxx)};
  return r;
}

std::vector<DecorrelationRow> run_decorrelation(const ExperimentPlan& plan, const std::vector<std::size_t>& lags) {
  require_samples(plan);
  const auto grid = sorted_unique(lags);
  const std::size_t last = grid.empty() ? 0 : grid.back();
  const OrbitStepper stepper(plan.automorphism, plan.q);
  const ObservableEvaluator eval(plan.observable, plan.q);
  // values[i][j] = f(T^{grid[j]} x0) for trajectory i.
  std::vector<std::vector<double>> values(plan.samples);
  std::vector<double> base(plan.samples);
  for_each_index(plan.samples, plan.workers, [&](std::size_t i) {
    const ModularState x0 = sample_state(plan.seed, i, plan.q, plan.automorphism.dim());
    std::vector<std::uint64_t> cur(x0.residues), next(cur.size());
    base[i] = eval(cur.data());
    auto& out = values[i];
    out.reserve(grid.size());
    std::size_t c = 0;
    for (std::size_t k = 0;; ++k) {
      while (c < grid.size() && grid[c] == k) {
        out.push_back(eval(cur.data()));
        ++c;
      }
      if (k >= last) break;
      stepper.apply(cur.data(), next.data());
      cur.swap(next);
    }
  });

  std::vector<DecorrelationRow> rows;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    std::vector<std::vector<double>> cols(3, std::vector<double>(plan.samples));
    for (std::size_t i = 0; i < plan.samples; ++i) {
      cols[0][i] = base[i];
      cols[1][i] = values[i][j];
      cols[2][i] = base[i] * values[i][j];
    }
    DecorrelationRow row;
    row.lag = grid[j];
    row.empirical = jackknife(cols, [](std::span<const double> m) { return m[2] - m[0] * m[1]; });
    row.exact = covariance_at(plan.observable, plan.automorphism, static_cast<long>(grid[j]));
    row.within_3se = within_3se(row.empirical, row.exact);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace toral
