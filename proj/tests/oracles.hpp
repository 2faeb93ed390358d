#pragma once

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <cstdint>
#include <set>
#include <vector>

#include "toral/automorphism.hpp"
#include "toral/matrix.hpp"
#include "toral/observable.hpp"
#include "toral/orbit.hpp"
#include "toral/polynomial.hpp"

// Independent reference computations shared by unit and acceptance tests.
namespace toral::testing {

using Float128 = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<128, boost::multiprecision::digit_base_2>>;

/// Evaluates p at e^{2 pi i k / n} for all n <= 2 d^2, k < n, at 128 bits.
inline bool numeric_root_of_unity_oracle(const IntPolynomial& p) {
  const int d = p.degree();
  const Float128 two_pi = 2 * boost::math::constants::pi<Float128>();
  const Float128 tol("1e-20");
  for (int n = 1; n <= 2 * d * d; ++n) {
    for (int k = 0; k < n; ++k) {
      const Float128 angle = two_pi * k / n;
      const Float128 c = cos(angle), s = sin(angle);
      Float128 re = 0, im = 0;
      for (int i = d; i >= 0; --i) {
        const Float128 nr = re * c - im * s + Float128(p[i].get_str());
        const Float128 ni = re * s + im * c;
        re = nr;
        im = ni;
      }
      if (sqrt(re * re + im * im) < tol) return true;
    }
  }
  return false;
}

/// Every point of (Z/qZ)^d, lexicographic.
inline std::vector<ModularState> lattice(std::uint64_t q, std::size_t d) {
  std::vector<ModularState> out;
  std::vector<std::uint64_t> r(d, 0);
  while (true) {
    out.push_back({q, r});
    std::size_t i = d;
    while (i > 0 && ++r[i - 1] == q) r[--i] = 0;
    if (i == 0) break;
  }
  return out;
}

inline bool is_permutation_on(const ToralAutomorphism& t, std::uint64_t q) {
  std::set<std::vector<std::uint64_t>> images;
  const auto points = lattice(q, t.dim());
  for (const auto& x : points) {
    auto y = step(t, x);
    for (auto r : y.residues)
      if (r >= q) return false;
    images.insert(y.residues);
  }
  return images.size() == points.size();
}

/// S^n x0 mod q from the exact big-integer power.
inline std::vector<std::uint64_t> power_mod(const IntegerMatrix& s, long n, const std::vector<std::uint64_t>& x0, std::uint64_t q) {
  IntegerMatrix p = IntegerMatrix::identity(s.dim());
  for (long i = 0; i < n; ++i) p = p * s;
  IntVector v;
  for (auto r : x0) v.emplace_back(static_cast<unsigned long>(r));
  v = p * v;
  std::vector<std::uint64_t> out;
  for (const auto& x : v) out.push_back(mpz_fdiv_ui(x.get_mpz_t(), q));
  return out;
}

/// Brute-force tail over an explicit enumeration of [-radius, radius]^d, no
/// analytic remainder.
inline double brute_tail(const FourierObservable& f, double s, std::int64_t b) {
  double sum = 0;
  for (const auto& t : f.terms())
    if (sup_norm(t.k) >= b) sum += std::pow(std::abs(t.c), s);
  return sum;
}

}  // namespace toral::testing
