#include "toral/automorphism.hpp"

#include <utility>

#include "toral/error.hpp"

namespace toral {

namespace {

IntVector power_apply(IntegerMatrix base, unsigned long exponent, IntVector v) {
  // Right-to-left binary powering applied directly to the vector; the factors
  // are powers of one matrix and commute.
  while (exponent > 0) {
    if (exponent & 1UL) v = base * v;
    exponent >>= 1;
    if (exponent > 0) base = base * base;
  }
  return v;
}

}  // namespace

void validate_automorphism(const IntegerMatrix& m) {
  const BigInt det = m.determinant();
  if (abs(det) != 1)
    throw Error(ErrorCode::NotUnimodular, "determinant is " + det.get_str() + ", expected +1 or -1");
}

IntVector transpose_power_apply(const IntegerMatrix& m, long n, const IntVector& v) {
  if (v.size() != m.dim()) throw Error(ErrorCode::DimensionMismatch, "vector length differs from matrix dimension");
  if (n == 0) return v;
  if (n > 0) return power_apply(m.transpose(), static_cast<unsigned long>(n), v);
  validate_automorphism(m);
  return power_apply(m.inverse().transpose(), static_cast<unsigned long>(-(n + 1)) + 1UL, v);
}

ToralAutomorphism::ToralAutomorphism(IntegerMatrix m, unsigned precision_bits)
    : matrix_(std::move(m)), transposed_(matrix_.transpose()) {
  validate_automorphism(matrix_);
  transposed_inverse_ = matrix_.inverse().transpose();
  classification_ = classify(matrix_, precision_bits);
}

IntVector ToralAutomorphism::pushforward(long n, const IntVector& v) const {
  if (v.size() != dim()) throw Error(ErrorCode::DimensionMismatch, "vector length differs from matrix dimension");
  if (n >= 0) return power_apply(transposed_, static_cast<unsigned long>(n), v);
  return power_apply(transposed_inverse_, static_cast<unsigned long>(-(n + 1)) + 1UL, v);
}

}  // namespace toral
