#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "toral/matrix.hpp"

namespace toral {

/// Univariate polynomial with integer coefficients, lowest degree first.
/// The representation is kept trimmed: no trailing zero coefficients, and the
/// zero polynomial is the empty vector.
class IntPolynomial {
 public:
  IntPolynomial() = default;
  explicit IntPolynomial(std::vector<BigInt> coeffs);
  IntPolynomial(std::initializer_list<long> coeffs);

  /// -1 for the zero polynomial.
  int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const noexcept { return coeffs_.empty(); }
  bool is_monic() const { return !coeffs_.empty() && coeffs_.back() == 1; }

  const BigInt& operator[](std::size_t i) const { return coeffs_[i]; }
  BigInt coeff(std::size_t i) const { return i < coeffs_.size() ? coeffs_[i] : BigInt(0); }
  const BigInt& leading() const { return coeffs_.back(); }
  const std::vector<BigInt>& coefficients() const noexcept { return coeffs_; }

  IntPolynomial operator*(const IntPolynomial& rhs) const;
  IntPolynomial operator-(const IntPolynomial& rhs) const;

  /// x^deg * p(1/x).
  IntPolynomial reciprocal() const;
  IntPolynomial derivative() const;

  bool operator==(const IntPolynomial&) const = default;

  /// e.g. "x^2 - 3*x + 1".
  std::string to_string() const;

 private:
  void trim();
  std::vector<BigInt> coeffs_;
};

/// det(xI - m), computed exactly with the Faddeev-LeVerrier recurrence (every
/// division it performs is exact over the integers).
IntPolynomial char_poly(const IntegerMatrix& m);

/// Euler's totient.
unsigned long euler_totient(unsigned long n);

/// n-th cyclotomic polynomial, by exact division of x^n - 1 by Phi_d for d | n, d < n.
IntPolynomial cyclotomic(unsigned long n);

/// Every n with phi(n) <= degree. Uses phi(n) >= sqrt(n/2), so n <= 2*degree^2.
std::vector<unsigned long> cyclotomic_indices_up_to_degree(unsigned long degree);

/// Resultant as the determinant of the Sylvester matrix (fraction-free).
BigInt resultant(const IntPolynomial& a, const IntPolynomial& b);

/// True iff p has a root that is a root of unity. Exhaustive over the finite
/// set {n : phi(n) <= deg p}: a root of unity of order n is a root of p iff
/// Res(p, Phi_n) = 0. Throws NonMonic unless p is monic of degree >= 1.
bool has_root_of_unity_root(const IntPolynomial& p);

/// Orders n of the roots of unity found among the roots of p (empty iff none).
std::vector<unsigned long> root_of_unity_orders(const IntPolynomial& p);

// ---------------------------------------------------------------------------
// Exact helpers over Q[x]. Inputs and outputs are integer polynomials; the
// monic/primitive normalisations are stated per function.

/// Monic gcd over Q. For monic integer inputs the result is integral (Gauss).
IntPolynomial monic_gcd(const IntPolynomial& a, const IntPolynomial& b);

/// Exact quotient a / b; throws when the division leaves a remainder or is
/// not integral.
IntPolynomial exact_divide(const IntPolynomial& a, const IntPolynomial& b);

/// Yun's square-free decomposition of a monic polynomial: pairs
/// (multiplicity, monic square-free factor) with p = prod factor^multiplicity.
/// Factors equal to 1 are omitted.
std::vector<std::pair<int, IntPolynomial>> square_free_decomposition(const IntPolynomial& p);

/// Number of distinct real roots of p in the open interval (lo, hi), by a
/// Sturm sequence over Q. p must be square-free and nonzero at both ends.
int sturm_count(const IntPolynomial& p, const mpq_class& lo, const mpq_class& hi);

/// Exact count of roots of a monic polynomial lying on the unit circle,
/// with multiplicity.
int unit_circle_root_count(const IntPolynomial& p);

}  // namespace toral
