#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "toral/matrix.hpp"
#include "toral/observable.hpp"

namespace toral::testing {

inline IntegerMatrix cat_map() { return IntegerMatrix{{2, 1}, {1, 1}}; }

/// Ergodic, non-hyperbolic automorphism of T^4.
inline IntegerMatrix paper_matrix() {
  return IntegerMatrix{{0, 0, 0, -1}, {1, 0, 0, 2}, {0, 1, 0, 0}, {0, 0, 1, 2}};
}

inline FourierObservable cosine(std::size_t dim) {
  Frequency k(dim, 0);
  k[0] = 1;
  return FourierObservable::from_representatives(dim, {{k, 1.0}});
}

/// f = g o T - g for the cat map with g = 2 cos(2 pi x_1).
inline FourierObservable cat_coboundary() {
  return FourierObservable::from_representatives(2, {{{2, 1}, 1.0}, {{1, 0}, -1.0}});
}

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p = 2; p * p <= n; ++p)
    if (n % p == 0) return false;
  return true;
}

inline std::uint64_t prime_above(std::uint64_t n) {
  while (!is_prime(++n)) {
  }
  return n;
}

/// Random complex coefficients on a few frequencies of sup-norm <= radius.
inline FourierObservable random_observable(std::mt19937_64& rng, std::size_t dim, std::int64_t radius, int terms = 5) {
  std::uniform_int_distribution<std::int64_t> coord(-radius, radius);
  std::uniform_real_distribution<double> val(-1.0, 1.0);
  std::vector<FourierTerm> reps;
  for (int i = 0; i < terms; ++i) {
    Frequency k(dim);
    for (auto& x : k) x = coord(rng);
    if (sup_norm(k) == 0) continue;
    if (!is_canonical(k))
      for (auto& x : k) x = -x;
    bool dup = false;
    for (const auto& t : reps) dup = dup || t.k == k;
    if (!dup) reps.push_back({k, {val(rng), val(rng)}});
  }
  if (reps.empty()) {
    Frequency k(dim, 0);
    k[0] = 1;
    reps.push_back({k, 1.0});
  }
  return FourierObservable::from_representatives(dim, reps);
}

/// (1/q^2) sum_x f(x) f(S^n x) over (Z/qZ)^2 for n = 0..lags, by direct
/// enumeration with plain 64-bit arithmetic and long double trigonometry.
inline std::vector<double> lattice_covariances(const FourierObservable& f, const std::int64_t s[2][2], int lags,
                                               std::uint64_t q) {
  const auto Q = static_cast<std::int64_t>(q);
  std::vector<long double> cosr(q), sinr(q);
  for (std::int64_t r = 0; r < Q; ++r) {
    const long double angle = 2 * std::numbers::pi_v<long double> * r / Q;
    cosr[r] = std::cos(angle);
    sinr[r] = std::sin(angle);
  }
  std::vector<long double> table(q * q);
  for (std::int64_t a = 0; a < Q; ++a)
    for (std::int64_t b = 0; b < Q; ++b) {
      long double v = 0;
      for (const auto& t : f.terms()) {
        const std::int64_t r = ((t.k[0] * a + t.k[1] * b) % Q + Q) % Q;
        v += t.c.real() * cosr[r] - t.c.imag() * sinr[r];
      }
      table[a * Q + b] = v;
    }
  std::vector<double> out;
  std::vector<std::int64_t> idx(q * q);
  for (std::int64_t i = 0; i < Q * Q; ++i) idx[i] = i;
  for (int n = 0; n <= lags; ++n) {
    long double sum = 0;
    for (std::int64_t i = 0; i < Q * Q; ++i) sum += table[i] * table[idx[i]];
    out.push_back(static_cast<double>(sum / (Q * Q)));
    for (auto& i : idx) {
      const std::int64_t a = i / Q, b = i % Q;
      const std::int64_t a2 = (s[0][0] * a + s[0][1] * b) % Q;
      const std::int64_t b2 = (s[1][0] * a + s[1][1] * b) % Q;
      i = ((a2 + Q) % Q) * Q + (b2 + Q) % Q;
    }
  }
  return out;
}

/// Largest sup-norm of tS^n m over the support and n = 0..lags (2x2 S).
inline std::int64_t combined_radius(const FourierObservable& f, const std::int64_t s[2][2], int lags) {
  std::int64_t r = 0;
  for (const auto& t : f.terms()) {
    std::int64_t x = t.k[0], y = t.k[1];
    for (int n = 0; n <= lags; ++n) {
      r = std::max({r, x < 0 ? -x : x, y < 0 ? -y : y});
      const std::int64_t x2 = s[0][0] * x + s[1][0] * y;
      const std::int64_t y2 = s[0][1] * x + s[1][1] * y;
      x = x2;
      y = y2;
    }
  }
  return r;
}

}  // namespace toral::testing
