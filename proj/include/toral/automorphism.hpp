#pragma once

#include "toral/matrix.hpp"
#include "toral/spectral.hpp"

namespace toral {

/// t(m^n) v computed exactly; negative n uses the integer inverse.
/// Throws NotUnimodular when n < 0 and |det m| != 1.
IntVector transpose_power_apply(const IntegerMatrix& m, long n, const IntVector& v);

/// Throws NotUnimodular unless |det m| = 1.
void validate_automorphism(const IntegerMatrix& m);

/// An integer matrix with |det| = 1 together with its certified spectral
/// classification. Immutable once built.
class ToralAutomorphism {
 public:
  explicit ToralAutomorphism(IntegerMatrix m, unsigned precision_bits = kDefaultPrecisionBits);

  std::size_t dim() const noexcept { return matrix_.dim(); }
  const IntegerMatrix& matrix() const noexcept { return matrix_; }
  const IntegerMatrix& transposed() const noexcept { return transposed_; }
  const IntegerMatrix& transposed_inverse() const noexcept { return transposed_inverse_; }
  const SpectralClassification& classification() const noexcept { return classification_; }
  bool is_ergodic() const noexcept { return classification_.is_ergodic; }

  /// t(S^n) v for any integer n.
  IntVector pushforward(long n, const IntVector& v) const;

 private:
  IntegerMatrix matrix_;
  IntegerMatrix transposed_;
  IntegerMatrix transposed_inverse_;
  SpectralClassification classification_;
};

}  // namespace toral
