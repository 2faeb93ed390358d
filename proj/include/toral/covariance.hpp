#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "toral/automorphism.hpp"
#include "toral/observable.hpp"

namespace toral {

/// Cov(f, f o T^n) = sum_m c_{tS^n m} conj(c_m), exact lattice images.
/// Negative n is allowed.
double covariance_at(const FourierObservable& f, const ToralAutomorphism& t, long n);

struct EscapeRecord {
  Frequency m;
  /// Last n >= 1 with tS^n m inside the support (0 if none).
  long last_return = 0;
  /// Step from which the expanding coordinate certifies permanent exit.
  long certified_exit = 0;
};

struct VarianceReport {
  /// Cov_n for n = 0..N0.
  std::vector<double> covariances;
  /// One past the last lag at which some support frequency returns to the
  /// support; Cov_n = 0 for all n >= N0.
  long N0 = 0;
  double sigma2 = 0;
  bool absolutely_convergent = true;
  bool degenerate = false;
  long cap = 0;
  std::int64_t truncation_radius = 0;
  std::vector<EscapeRecord> escapes;
  /// (n, E(S_n^2)) for the requested n.
  std::vector<std::pair<long, double>> partial_sums;
};

/// ceil(10 d bitlen(radius) / log2(lower bound of the spectral radius)).
long default_escape_cap(const FourierObservable& f, const ToralAutomorphism& t);

/// Exact sigma^2 of a finitely supported observable under an ergodic
/// automorphism. cap <= 0 selects default_escape_cap. Throws EscapeCapExceeded
/// naming the offending frequency.
VarianceReport sigma2(const FourierObservable& f, const ToralAutomorphism& t, long cap = 0,
                      const std::vector<long>& partial_sum_n = {});

/// E(S_n^2) = sum_{|i| < n} (n - |i|) Cov_i.
double exact_second_moment(const VarianceReport& r, long n);
double exact_second_moment(const FourierObservable& f, const ToralAutomorphism& t, long n);

}  // namespace toral
