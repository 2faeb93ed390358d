#pragma once

#include <gmpxx.h>

#include <complex>
#include <optional>
#include <vector>

#include "toral/matrix.hpp"
#include "toral/polynomial.hpp"

namespace toral {

/// Closed interval with exact rational endpoints.
struct Interval {
  mpq_class lo;
  mpq_class hi;

  bool contains(const mpq_class& x) const { return lo <= x && x <= hi; }
  double lower() const;  // rounded toward -inf
  double upper() const;  // rounded toward +inf
  double mid() const { return (lo.get_d() + hi.get_d()) / 2; }
};

enum class ModulusRegion { Expanding, Neutral, Contracting };

/// One eigenvalue, isolated in the closed disk |z - center| <= radius.
/// Roots of multiplicity k appear once with multiplicity = k.
struct CertifiedRoot {
  std::complex<double> center;
  mpq_class center_re;
  mpq_class center_im;
  mpq_class radius;
  int multiplicity = 1;
  ModulusRegion region = ModulusRegion::Neutral;
};

struct SpectralClassification {
  std::size_t dim = 0;
  IntPolynomial characteristic;
  BigInt determinant;
  bool is_automorphism = false;
  bool is_ergodic = false;
  bool is_hyperbolic = false;
  int d_u = 0;
  int d_e = 0;
  int d_s = 0;
  std::vector<unsigned long> root_of_unity_orders;
  Interval spectral_radius;
  /// Enclosure of the spectral radius of S^{-1} restricted to the expanding
  /// part, i.e. 1 / min{|lambda| : |lambda| > 1}. Empty when d_u = 0.
  std::optional<Interval> rho_u_bound;
  std::vector<CertifiedRoot> roots;
  unsigned precision_bits = 0;
};

inline constexpr unsigned kDefaultPrecisionBits = 128;

/// Certified isolation of every root of a monic integer polynomial. Each root
/// disk is classified against the unit circle; unit-modulus roots are decided
/// exactly (see unit_circle_root_count) and the remaining ones by disks that
/// avoid the circle. Throws PrecisionExhausted when refinement up to
/// 64 * precision_bits fails to separate the moduli from 1.
std::vector<CertifiedRoot> isolate_roots(const IntPolynomial& p, unsigned precision_bits);

SpectralClassification classify(const IntegerMatrix& m, unsigned precision_bits = kDefaultPrecisionBits);

}  // namespace toral
