#pragma once

#include <cstdint>
#include <vector>

namespace toral {

/// Exact point residues / q of the torus. Residues are always reduced mod q.
struct ModularState {
  std::uint64_t q = 1;
  std::vector<std::uint64_t> residues;

  std::size_t dim() const noexcept { return residues.size(); }
  bool operator==(const ModularState&) const = default;
};

inline constexpr std::uint64_t kMersenne61 = (std::uint64_t{1} << 61) - 1;

/// Modular arithmetic for a fixed modulus q < 2^63, with a fast path for
/// q = 2^61 - 1.
class Modulus {
 public:
  explicit Modulus(std::uint64_t q);

  std::uint64_t value() const noexcept { return q_; }

  std::uint64_t reduce(unsigned __int128 x) const noexcept {
    if (mersenne_) {
      std::uint64_t lo = static_cast<std::uint64_t>(x & kMersenne61);
      unsigned __int128 hi = x >> 61;
      // hi < 2^67: fold once more.
      std::uint64_t folded = static_cast<std::uint64_t>(hi & kMersenne61) + static_cast<std::uint64_t>(hi >> 61);
      std::uint64_t r = lo + folded;
      r = (r & kMersenne61) + (r >> 61);
      return r >= kMersenne61 ? r - kMersenne61 : r;
    }
    return static_cast<std::uint64_t>(x % q_);
  }

  std::uint64_t mul(std::uint64_t a, std::uint64_t b) const noexcept {
    return reduce(static_cast<unsigned __int128>(a) * b);
  }

  /// Residue of a signed integer.
  std::uint64_t from_signed(std::int64_t v) const noexcept {
    const std::int64_t r = v % static_cast<std::int64_t>(q_);
    return static_cast<std::uint64_t>(r < 0 ? r + static_cast<std::int64_t>(q_) : r);
  }

  /// sum_i a_i b_i mod q, all inputs already reduced. For q <= 2^61 up to 64
  /// products fit one 128-bit accumulator.
  std::uint64_t dot(const std::uint64_t* a, const std::uint64_t* b, std::size_t n) const noexcept {
    if (wide_accumulate_ && n <= 64) {
      unsigned __int128 acc = 0;
      for (std::size_t i = 0; i < n; ++i) acc += static_cast<unsigned __int128>(a[i]) * b[i];
      return reduce(acc);
    }
    std::uint64_t acc = 0;
    for (std::size_t i = 0; i < n; ++i) {
      acc += mul(a[i], b[i]);
      if (acc >= q_) acc -= q_;
    }
    return acc;
  }

 private:
  std::uint64_t q_;
  bool mersenne_;
  bool wide_accumulate_;
};

}  // namespace toral
