#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace toral {

using BigInt = mpz_class;
using IntVector = std::vector<BigInt>;

/// Square matrix of arbitrary-precision integers, stored row-major.
class IntegerMatrix {
 public:
  IntegerMatrix() = default;
  explicit IntegerMatrix(std::size_t dim);
  IntegerMatrix(std::initializer_list<std::initializer_list<long>> rows);

  /// Builds from a list of rows; throws NotSquare unless every row has
  /// exactly `rows.size()` entries.
  static IntegerMatrix from_rows(const std::vector<std::vector<BigInt>>& rows);
  static IntegerMatrix identity(std::size_t dim);

  std::size_t dim() const noexcept { return dim_; }

  BigInt& operator()(std::size_t i, std::size_t j) { return entries_[i * dim_ + j]; }
  const BigInt& operator()(std::size_t i, std::size_t j) const { return entries_[i * dim_ + j]; }

  IntegerMatrix transpose() const;
  BigInt determinant() const;
  bool is_unimodular() const { return abs(determinant()) == 1; }

  /// Exact integer inverse. Throws NotUnimodular when |det| != 1.
  IntegerMatrix inverse() const;

  IntegerMatrix operator*(const IntegerMatrix& rhs) const;
  IntVector operator*(const IntVector& v) const;

  bool operator==(const IntegerMatrix&) const = default;

  std::vector<std::vector<BigInt>> rows() const;
  std::string to_string() const;

 private:
  std::size_t dim_ = 0;
  std::vector<BigInt> entries_;
};

/// Parses the terse literal "a,b;c,d" (rows separated by ';').
IntegerMatrix parse_matrix_literal(std::string_view text);

/// Fraction-free (Bareiss) determinant of a row-major n x n block.
BigInt bareiss_determinant(std::vector<BigInt> a, std::size_t n);

}  // namespace toral
