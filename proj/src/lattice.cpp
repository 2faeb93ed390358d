#include "toral/lattice.hpp"

#include <string>

#include "toral/error.hpp"

namespace toral {

Modulus::Modulus(std::uint64_t q)
    : q_(q), mersenne_(q == kMersenne61), wide_accumulate_(q <= (std::uint64_t{1} << 61)) {
  if (q == 0 || q >= (std::uint64_t{1} << 63))
    throw Error(ErrorCode::Parse, "lattice denominator must satisfy 1 <= q < 2^63, got " + std::to_string(q));
}

}  // namespace toral
