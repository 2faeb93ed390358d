#pragma once

#include <cstdint>
#include <ostream>
#include <vector>

#include "toral/automorphism.hpp"
#include "toral/lattice.hpp"
#include "toral/observable.hpp"

namespace toral {

inline constexpr std::uint64_t kDefaultDenominator = kMersenne61;

/// S reduced mod q once; applies x -> S x mod q without allocation.
class OrbitStepper {
 public:
  OrbitStepper(const ToralAutomorphism& t, std::uint64_t q);
  OrbitStepper(const IntegerMatrix& s, std::uint64_t q);

  std::size_t dim() const noexcept { return dim_; }
  std::uint64_t q() const noexcept { return modulus_.value(); }

  /// out = S x mod q; out and x must not alias.
  void apply(const std::uint64_t* x, std::uint64_t* out) const noexcept {
    for (std::size_t i = 0; i < dim_; ++i) out[i] = modulus_.dot(rows_.data() + i * dim_, x, dim_);
  }

  ModularState operator()(const ModularState& x) const;

 private:
  Modulus modulus_;
  std::size_t dim_;
  std::vector<std::uint64_t> rows_;
};

/// (S residues) mod q.
ModularState step(const ToralAutomorphism& t, const ModularState& x);

struct BirkhoffSeries {
  ModularState x0;
  std::size_t n = 0;
  /// values[k-1] = f(T^k x0), partial_sums[k-1] = S_k.
  std::vector<double> values;
  std::vector<double> partial_sums;
  /// T^k x0 for k = 1..n when requested.
  std::vector<ModularState> states;
};

/// S_k = f(T x0) + ... + f(T^k x0) for k = 1..n with compensated summation.
/// Throws DimensionMismatch.
BirkhoffSeries birkhoff(const ToralAutomorphism& t, const FourierObservable& f, const ModularState& x0, std::size_t n,
                        bool keep_states = false);

/// SplitMix64 stream. Satisfies UniformRandomBitGenerator.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;
  explicit SplitMix64(std::uint64_t state) noexcept : state_(state) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return ~result_type{0}; }

  static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  result_type operator()() noexcept { return mix(state_ += 0x9e3779b97f4a7c15ULL); }

 private:
  std::uint64_t state_;
};

/// Generator for trajectory `index` of a run seeded by `seed`; independent of
/// how trajectories are scheduled.
SplitMix64 trajectory_rng(std::uint64_t seed, std::uint64_t index);

/// Uniform on [0, q) by multiply-and-reject.
std::uint64_t uniform_below(SplitMix64& rng, std::uint64_t q);

/// Uniform point of (Z/qZ)^dim drawn from trajectory_rng(seed, index).
ModularState sample_state(std::uint64_t seed, std::uint64_t index, std::uint64_t q, std::size_t dim);

/// States for indices 0..count-1.
std::vector<ModularState> sample_initial(std::uint64_t seed, std::uint64_t q, std::size_t count, std::size_t dim);

/// `k,S_k` rows, optionally followed by `x_1..x_d` as "a/q".
void write_trajectory_csv(std::ostream& out, const BirkhoffSeries& series, bool with_states);

}  // namespace toral
