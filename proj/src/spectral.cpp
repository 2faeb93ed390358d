#include "toral/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "toral/error.hpp"

namespace toral {

namespace {

/// Gaussian integer X + iY, standing for (X + iY) / 2^K at a fixed scale K.
struct GaussInt {
  BigInt re;
  BigInt im;
};

GaussInt mul(const GaussInt& a, const GaussInt& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

BigInt norm2(const GaussInt& a) { return a.re * a.re + a.im * a.im; }

BigInt ceil_sqrt(const BigInt& v) {
  BigInt root, rem;
  mpz_sqrtrem(root.get_mpz_t(), rem.get_mpz_t(), v.get_mpz_t());
  if (rem != 0) ++root;
  return root;
}

BigInt floor_sqrt(const BigInt& v) {
  BigInt root;
  mpz_sqrt(root.get_mpz_t(), v.get_mpz_t());
  return root;
}

mpq_class pow2(long bits) {
  mpq_class out = 1;
  if (bits >= 0)
    mpz_mul_2exp(out.get_num_mpz_t(), out.get_num_mpz_t(), static_cast<mp_bitcnt_t>(bits));
  else
    mpz_mul_2exp(out.get_den_mpz_t(), out.get_den_mpz_t(), static_cast<mp_bitcnt_t>(-bits));
  out.canonicalize();
  return out;
}

/// Dyadic bounds lo <= sqrt(q) <= hi with 2^-bits resolution.
mpq_class sqrt_upper(const mpq_class& q, long bits) {
  BigInt scaled = q.get_num();
  mpz_mul_2exp(scaled.get_mpz_t(), scaled.get_mpz_t(), static_cast<mp_bitcnt_t>(2 * bits));
  mpz_cdiv_q(scaled.get_mpz_t(), scaled.get_mpz_t(), q.get_den_mpz_t());
  return mpq_class(ceil_sqrt(scaled)) * pow2(-bits);
}

mpq_class sqrt_lower(const mpq_class& q, long bits) {
  BigInt scaled = q.get_num();
  mpz_mul_2exp(scaled.get_mpz_t(), scaled.get_mpz_t(), static_cast<mp_bitcnt_t>(2 * bits));
  mpz_fdiv_q(scaled.get_mpz_t(), scaled.get_mpz_t(), q.get_den_mpz_t());
  return mpq_class(floor_sqrt(scaled)) * pow2(-bits);
}

using cld = std::complex<long double>;

std::vector<cld> aberth(const IntPolynomial& p) {
  const int n = p.degree();
  std::vector<long double> c(n + 1);
  for (int i = 0; i <= n; ++i) c[i] = static_cast<long double>(p[i].get_d());
  long double bound = 0;
  for (int i = 0; i < n; ++i) bound = std::max(bound, std::pow(std::fabs(c[i]), 1.0L / (n - i)));
  bound = std::max(bound, 1.0L);
  std::vector<cld> z(n);
  for (int k = 0; k < n; ++k)
    z[k] = std::polar(bound, 2.0L * 3.14159265358979323846L * k / n + 0.4L);
  for (int iter = 0; iter < 500; ++iter) {
    long double worst = 0;
    for (int k = 0; k < n; ++k) {
      cld val = c[n], der = 0;
      for (int i = n - 1; i >= 0; --i) {
        der = der * z[k] + val;
        val = val * z[k] + c[i];
      }
      if (val == cld(0)) continue;
      cld ratio = val / der;
      cld repulsion = 0;
      for (int j = 0; j < n; ++j)
        if (j != k) repulsion += 1.0L / (z[k] - z[j]);
      cld step = ratio / (1.0L - ratio * repulsion);
      z[k] -= step;
      worst = std::max(worst, std::abs(step) / std::max(1.0L, std::abs(z[k])));
    }
    if (worst < 1e-18L) break;
  }
  return z;
}

struct DiskSet {
  std::vector<GaussInt> centers;  // scaled by 2^scale
  std::vector<mpq_class> radii;
  long scale = 0;
};

/// Weierstrass (Durand-Kerner) refinement of simultaneous approximations at
/// fixed-point scale K, followed by the inclusion radii n*|w_i|: every
/// connected component of m disks holds exactly m roots.
DiskSet refine_and_enclose(const IntPolynomial& p, const std::vector<cld>& start, long scale) {
  const int n = p.degree();
  DiskSet out;
  out.scale = scale;
  out.centers.resize(n);
  for (int i = 0; i < n; ++i) {
    // Seed through a double-precision mantissa, then shift into place.
    const int shift = static_cast<int>(scale) - 60;
    BigInt re(static_cast<double>(std::ldexp(start[i].real(), 60)));
    BigInt im(static_cast<double>(std::ldexp(start[i].imag(), 60)));
    if (shift >= 0) {
      mpz_mul_2exp(re.get_mpz_t(), re.get_mpz_t(), shift);
      mpz_mul_2exp(im.get_mpz_t(), im.get_mpz_t(), shift);
    } else {
      mpz_fdiv_q_2exp(re.get_mpz_t(), re.get_mpz_t(), -shift);
      mpz_fdiv_q_2exp(im.get_mpz_t(), im.get_mpz_t(), -shift);
    }
    out.centers[i] = {re, im};
  }

  auto evaluate = [&](const GaussInt& z) {
    // Horner with exact rescaling: acc_j = p-partial(z) * 2^(K j).
    GaussInt acc{p[n], 0};
    BigInt power = 1;
    for (int j = n - 1; j >= 0; --j) {
      acc = mul(acc, z);
      mpz_mul_2exp(power.get_mpz_t(), power.get_mpz_t(), static_cast<mp_bitcnt_t>(scale));
      acc.re += p[j] * power;
    }
    return acc;
  };
  auto weierstrass_denominator = [&](int i) {
    GaussInt prod{1, 0};
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      prod = mul(prod, GaussInt{out.centers[i].re - out.centers[j].re, out.centers[i].im - out.centers[j].im});
    }
    return prod;
  };

  for (int iter = 0; iter < 200; ++iter) {
    bool moved = false;
    std::vector<GaussInt> next = out.centers;
    for (int i = 0; i < n; ++i) {
      GaussInt num = evaluate(out.centers[i]);
      GaussInt den = weierstrass_denominator(i);
      BigInt dn = norm2(den);
      if (dn == 0) {
        next[i].re += 1;
        next[i].im += 1;
        moved = true;
        continue;
      }
      // correction * 2^K = num / den = num * conj(den) / |den|^2
      BigInt cre = num.re * den.re + num.im * den.im;
      BigInt cim = num.im * den.re - num.re * den.im;
      mpz_fdiv_q(cre.get_mpz_t(), cre.get_mpz_t(), dn.get_mpz_t());
      mpz_fdiv_q(cim.get_mpz_t(), cim.get_mpz_t(), dn.get_mpz_t());
      if (abs(cre) > 1 || abs(cim) > 1) moved = true;
      next[i].re -= cre;
      next[i].im -= cim;
    }
    out.centers = std::move(next);
    if (!moved) break;
  }

  out.radii.resize(n);
  for (int i = 0; i < n; ++i) {
    GaussInt num = evaluate(out.centers[i]);
    GaussInt den = weierstrass_denominator(i);
    BigInt dn = norm2(den);
    if (dn == 0) {
      out.radii[i] = -1;  // coincident centers: caller retries at higher precision
      continue;
    }
    // |w_i| * 2^K = |num| / |den|
    mpq_class w2(norm2(num), dn);
    w2.canonicalize();
    out.radii[i] = mpq_class(n) * sqrt_upper(w2, scale) * pow2(-scale);
  }
  return out;
}

}  // namespace

double Interval::lower() const {
  double v = lo.get_d();
  return mpq_class(v) > lo ? std::nextafter(v, -HUGE_VAL) : v;
}

double Interval::upper() const {
  double v = hi.get_d();
  return mpq_class(v) < hi ? std::nextafter(v, HUGE_VAL) : v;
}

std::vector<CertifiedRoot> isolate_roots(const IntPolynomial& p, unsigned precision_bits) {
  if (p.degree() < 1 || !p.is_monic()) throw Error(ErrorCode::NonMonic, "root isolation needs a monic polynomial");
  std::vector<CertifiedRoot> roots;
  const mpq_class one = 1;

  for (const auto& [mult, factor] : square_free_decomposition(p)) {
    const int n = factor.degree();
    const int unit_roots = unit_circle_root_count(factor);
    std::vector<cld> start = aberth(factor);
    bool certified = false;

    for (long scale = static_cast<long>(precision_bits) + 16; scale <= 64L * std::max(precision_bits, 16u); scale *= 2) {
      DiskSet disks = refine_and_enclose(factor, start, scale);
      if (std::any_of(disks.radii.begin(), disks.radii.end(), [](const mpq_class& r) { return r < 0; })) continue;

      const mpq_class unit = pow2(-scale);
      std::vector<mpq_class> re(n), im(n), mod2(n);
      for (int i = 0; i < n; ++i) {
        re[i] = mpq_class(disks.centers[i].re) * unit;
        im[i] = mpq_class(disks.centers[i].im) * unit;
        mod2[i] = re[i] * re[i] + im[i] * im[i];
      }

      // Connected components of the disk union.
      std::vector<int> parent(n);
      std::iota(parent.begin(), parent.end(), 0);
      auto find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
      };
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
          mpq_class dx = re[i] - re[j], dy = im[i] - im[j];
          mpq_class reach = disks.radii[i] + disks.radii[j];
          if (dx * dx + dy * dy <= reach * reach) parent[find(i)] = find(j);
        }

      std::vector<ModulusRegion> disk_region(n);
      std::vector<bool> disk_ambiguous(n, false);
      for (int i = 0; i < n; ++i) {
        const mpq_class& r = disks.radii[i];
        mpq_class outer = one + r;
        mpq_class inner = one - r;
        if (mod2[i] > outer * outer) {
          disk_region[i] = ModulusRegion::Expanding;
        } else if (inner > 0 && mod2[i] < inner * inner) {
          disk_region[i] = ModulusRegion::Contracting;
        } else {
          disk_ambiguous[i] = true;
        }
      }
      std::vector<ModulusRegion> comp_region(n, ModulusRegion::Neutral);
      std::vector<bool> comp_ambiguous(n, false), comp_seen(n, false);
      for (int i = 0; i < n; ++i) {
        int c = find(i);
        if (!comp_seen[c]) {
          comp_seen[c] = true;
          comp_region[c] = disk_region[i];
        }
        if (disk_ambiguous[i] || disk_region[i] != comp_region[c]) comp_ambiguous[c] = true;
      }
      int ambiguous = 0;
      for (int i = 0; i < n; ++i) ambiguous += comp_ambiguous[find(i)] ? 1 : 0;
      if (ambiguous != unit_roots) continue;

      // Enlarge each disk to cover its whole component so that every reported
      // disk provably contains a root.
      std::vector<mpq_class> radius(n);
      for (int i = 0; i < n; ++i) {
        radius[i] = disks.radii[i];
        for (int j = 0; j < n; ++j) {
          if (j == i || find(j) != find(i)) continue;
          mpq_class dx = re[i] - re[j], dy = im[i] - im[j];
          mpq_class reach = sqrt_upper(dx * dx + dy * dy, scale) + disks.radii[j];
          radius[i] = std::max(radius[i], reach);
        }
      }
      for (int i = 0; i < n; ++i) {
        CertifiedRoot root;
        root.center_re = re[i];
        root.center_im = im[i];
        root.center = {re[i].get_d(), im[i].get_d()};
        root.radius = radius[i];
        root.multiplicity = mult;
        root.region = comp_ambiguous[find(i)] ? ModulusRegion::Neutral : comp_region[find(i)];
        roots.push_back(std::move(root));
      }
      certified = true;
      break;
    }
    if (!certified) {
      throw Error(ErrorCode::PrecisionExhausted,
                  "could not separate root moduli from 1 for factor " + factor.to_string());
    }
  }
  return roots;
}

SpectralClassification classify(const IntegerMatrix& m, unsigned precision_bits) {
  if (precision_bits == 0) throw Error(ErrorCode::PrecisionExhausted, "precision must be positive");
  SpectralClassification out;
  out.dim = m.dim();
  out.precision_bits = precision_bits;
  out.characteristic = char_poly(m);
  out.determinant = m.determinant();
  out.is_automorphism = abs(out.determinant) == 1;
  out.root_of_unity_orders = root_of_unity_orders(out.characteristic);
  out.is_ergodic = out.is_automorphism && out.root_of_unity_orders.empty();

  out.roots = isolate_roots(out.characteristic, precision_bits);
  const long bits = static_cast<long>(precision_bits) + 16;
  bool have_radius = false;
  bool have_expanding = false;
  mpq_class min_exp_lo, min_exp_hi;
  for (const auto& root : out.roots) {
    switch (root.region) {
      case ModulusRegion::Expanding: out.d_u += root.multiplicity; break;
      case ModulusRegion::Neutral: out.d_e += root.multiplicity; break;
      case ModulusRegion::Contracting: out.d_s += root.multiplicity; break;
    }
    const mpq_class mod2 = root.center_re * root.center_re + root.center_im * root.center_im;
    mpq_class lo = sqrt_lower(mod2, bits) - root.radius;
    if (lo < 0) lo = 0;
    mpq_class hi = sqrt_upper(mod2, bits) + root.radius;
    if (root.region == ModulusRegion::Neutral) {
      // Exactly on the circle.
      lo = 1;
      hi = 1;
    }
    if (!have_radius) {
      out.spectral_radius = {lo, hi};
      have_radius = true;
    } else {
      out.spectral_radius.lo = std::max(out.spectral_radius.lo, lo);
      out.spectral_radius.hi = std::max(out.spectral_radius.hi, hi);
    }
    if (root.region == ModulusRegion::Expanding) {
      if (!have_expanding) {
        min_exp_lo = lo;
        min_exp_hi = hi;
        have_expanding = true;
      } else {
        min_exp_lo = std::min(min_exp_lo, lo);
        min_exp_hi = std::min(min_exp_hi, hi);
      }
    }
  }
  if (have_expanding) out.rho_u_bound = Interval{1 / min_exp_hi, 1 / min_exp_lo};
  out.is_hyperbolic = out.d_e == 0;
  return out;
}

}  // namespace toral
