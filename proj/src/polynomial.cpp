#include "toral/polynomial.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "toral/error.hpp"

namespace toral {

namespace {

using QPoly = std::vector<mpq_class>;

void trim(QPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

QPoly to_q(const IntPolynomial& p) {
  QPoly out;
  out.reserve(p.coefficients().size());
  for (const auto& c : p.coefficients()) out.emplace_back(c);
  return out;
}

IntPolynomial to_int(const QPoly& p) {
  std::vector<BigInt> out;
  out.reserve(p.size());
  for (const auto& c : p) {
    if (c.get_den() != 1) throw Error(ErrorCode::Parse, "polynomial quotient is not integral");
    out.push_back(c.get_num());
  }
  return IntPolynomial(std::move(out));
}

/// Quotient and remainder of a / b over Q; b nonzero.
std::pair<QPoly, QPoly> divmod(QPoly a, const QPoly& b) {
  trim(a);
  QPoly quot;
  const int db = static_cast<int>(b.size()) - 1;
  if (static_cast<int>(a.size()) - 1 < db) return {quot, a};
  quot.assign(a.size() - b.size() + 1, 0);
  for (int i = static_cast<int>(a.size()) - 1; i >= db; --i) {
    if (a[i] == 0) continue;
    mpq_class f = a[i] / b.back();
    quot[i - db] = f;
    for (int j = 0; j <= db; ++j) a[i - db + j] -= f * b[j];
  }
  a.resize(db);
  trim(a);
  trim(quot);
  return {quot, a};
}

QPoly make_monic(QPoly p) {
  trim(p);
  if (p.empty()) return p;
  const mpq_class lead = p.back();
  for (auto& c : p) c /= lead;
  return p;
}

QPoly gcd_q(QPoly a, QPoly b) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    auto r = divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return make_monic(a);
}

QPoly derivative_q(const QPoly& p) {
  QPoly d;
  for (std::size_t i = 1; i < p.size(); ++i) d.push_back(p[i] * static_cast<unsigned long>(i));
  trim(d);
  return d;
}

mpq_class eval_q(const QPoly& p, const mpq_class& x) {
  mpq_class acc = 0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * x + *it;
  return acc;
}

int sign_variations(const std::vector<QPoly>& chain, const mpq_class& x) {
  int variations = 0;
  int last = 0;
  for (const auto& p : chain) {
    const int s = sgn(eval_q(p, x));
    if (s == 0) continue;
    if (last != 0 && s != last) ++variations;
    last = s;
  }
  return variations;
}

}  // namespace

IntPolynomial::IntPolynomial(std::vector<BigInt> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

IntPolynomial::IntPolynomial(std::initializer_list<long> coeffs) {
  for (long c : coeffs) coeffs_.emplace_back(c);
  trim();
}

void IntPolynomial::trim() {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

IntPolynomial IntPolynomial::operator*(const IntPolynomial& rhs) const {
  if (is_zero() || rhs.is_zero()) return {};
  std::vector<BigInt> out(coeffs_.size() + rhs.coeffs_.size() - 1);
  for (std::size_t i = 0; i < coeffs_.size(); ++i)
    for (std::size_t j = 0; j < rhs.coeffs_.size(); ++j) out[i + j] += coeffs_[i] * rhs.coeffs_[j];
  return IntPolynomial(std::move(out));
}

IntPolynomial IntPolynomial::operator-(const IntPolynomial& rhs) const {
  std::vector<BigInt> out(std::max(coeffs_.size(), rhs.coeffs_.size()));
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = coeff(i) - rhs.coeff(i);
  return IntPolynomial(std::move(out));
}

IntPolynomial IntPolynomial::reciprocal() const {
  std::vector<BigInt> out(coeffs_.rbegin(), coeffs_.rend());
  // Leading zeros of the reversed vector come from x | p; strip them.
  auto first = std::find_if(out.begin(), out.end(), [](const BigInt& c) { return c != 0; });
  out.erase(out.begin(), first);
  return IntPolynomial(std::move(out));
}

IntPolynomial IntPolynomial::derivative() const {
  std::vector<BigInt> out;
  for (std::size_t i = 1; i < coeffs_.size(); ++i) out.push_back(coeffs_[i] * static_cast<unsigned long>(i));
  return IntPolynomial(std::move(out));
}

std::string IntPolynomial::to_string() const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int i = degree(); i >= 0; --i) {
    const BigInt& c = coeffs_[i];
    if (c == 0) continue;
    BigInt mag = abs(c);
    if (first) {
      if (c < 0) os << '-';
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    first = false;
    if (i == 0 || mag != 1) {
      os << mag;
      if (i > 0) os << '*';
    }
    if (i >= 1) os << 'x';
    if (i >= 2) os << '^' << i;
  }
  return os.str();
}

IntPolynomial char_poly(const IntegerMatrix& m) {
  const std::size_t n = m.dim();
  std::vector<BigInt> c(n + 1);
  c[n] = 1;
  IntegerMatrix acc(n);  // M_0 = 0
  for (std::size_t k = 1; k <= n; ++k) {
    IntegerMatrix next = m * acc;
    for (std::size_t i = 0; i < n; ++i) next(i, i) += c[n - k + 1];
    acc = std::move(next);
    IntegerMatrix am = m * acc;
    BigInt trace = 0;
    for (std::size_t i = 0; i < n; ++i) trace += am(i, i);
    BigInt kk = static_cast<unsigned long>(k);
    mpz_divexact(trace.get_mpz_t(), trace.get_mpz_t(), kk.get_mpz_t());
    c[n - k] = -trace;
  }
  return IntPolynomial(std::move(c));
}

unsigned long euler_totient(unsigned long n) {
  unsigned long result = n;
  for (unsigned long p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    while (n % p == 0) n /= p;
    result -= result / p;
  }
  if (n > 1) result -= result / n;
  return result;
}

IntPolynomial cyclotomic(unsigned long n) {
  if (n == 0) throw Error(ErrorCode::Parse, "cyclotomic index must be >= 1");
  std::vector<BigInt> xn(n + 1);
  xn[0] = -1;
  xn[n] = 1;
  IntPolynomial acc(std::move(xn));
  for (unsigned long d = 1; d < n; ++d)
    if (n % d == 0) acc = exact_divide(acc, cyclotomic(d));
  return acc;
}

std::vector<unsigned long> cyclotomic_indices_up_to_degree(unsigned long degree) {
  std::vector<unsigned long> out;
  const unsigned long bound = std::max<unsigned long>(2 * degree * degree, 2);
  for (unsigned long n = 1; n <= bound; ++n)
    if (euler_totient(n) <= degree) out.push_back(n);
  return out;
}

BigInt resultant(const IntPolynomial& a, const IntPolynomial& b) {
  if (a.is_zero() || b.is_zero()) return 0;
  const int m = a.degree();
  const int n = b.degree();
  if (m == 0 && n == 0) return 1;
  const std::size_t size = static_cast<std::size_t>(m + n);
  std::vector<BigInt> sylvester(size * size);
  for (int row = 0; row < n; ++row)
    for (int i = 0; i <= m; ++i) sylvester[row * size + row + i] = a[m - i];
  for (int row = 0; row < m; ++row)
    for (int i = 0; i <= n; ++i) sylvester[(n + row) * size + row + i] = b[n - i];
  return bareiss_determinant(std::move(sylvester), size);
}

std::vector<unsigned long> root_of_unity_orders(const IntPolynomial& p) {
  if (p.degree() < 1 || !p.is_monic())
    throw Error(ErrorCode::NonMonic, "expected a monic polynomial of degree >= 1, got " + p.to_string());
  std::vector<unsigned long> orders;
  for (unsigned long n : cyclotomic_indices_up_to_degree(static_cast<unsigned long>(p.degree())))
    if (resultant(p, cyclotomic(n)) == 0) orders.push_back(n);
  return orders;
}

bool has_root_of_unity_root(const IntPolynomial& p) { return !root_of_unity_orders(p).empty(); }

IntPolynomial monic_gcd(const IntPolynomial& a, const IntPolynomial& b) {
  QPoly g = gcd_q(to_q(a), to_q(b));
  return to_int(g);
}

IntPolynomial exact_divide(const IntPolynomial& a, const IntPolynomial& b) {
  if (b.is_zero()) throw Error(ErrorCode::Parse, "division by the zero polynomial");
  auto [quot, rem] = divmod(to_q(a), to_q(b));
  if (!rem.empty()) throw Error(ErrorCode::Parse, "polynomial division is not exact");
  return to_int(quot);
}

std::vector<std::pair<int, IntPolynomial>> square_free_decomposition(const IntPolynomial& p) {
  if (p.degree() < 1 || !p.is_monic()) throw Error(ErrorCode::NonMonic, "square-free decomposition needs a monic input");
  std::vector<std::pair<int, IntPolynomial>> out;
  QPoly f = to_q(p);
  QPoly df = derivative_q(f);
  QPoly a = gcd_q(f, df);
  QPoly b = divmod(f, a).first;
  QPoly c = divmod(df, a).first;
  QPoly d;
  {
    QPoly db = derivative_q(b);
    d.resize(std::max(c.size(), db.size()));
    for (std::size_t i = 0; i < d.size(); ++i)
      d[i] = (i < c.size() ? c[i] : mpq_class(0)) - (i < db.size() ? db[i] : mpq_class(0));
    trim(d);
  }
  int mult = 1;
  while (b.size() > 1) {
    QPoly g = gcd_q(b, d);
    if (g.size() > 1) out.emplace_back(mult, to_int(g));
    b = divmod(b, g).first;
    c = divmod(d, g).first;
    QPoly db = derivative_q(b);
    d.assign(std::max(c.size(), db.size()), 0);
    for (std::size_t i = 0; i < d.size(); ++i)
      d[i] = (i < c.size() ? c[i] : mpq_class(0)) - (i < db.size() ? db[i] : mpq_class(0));
    trim(d);
    ++mult;
  }
  return out;
}

int sturm_count(const IntPolynomial& p, const mpq_class& lo, const mpq_class& hi) {
  if (p.degree() < 1) return 0;
  std::vector<QPoly> chain{to_q(p), derivative_q(to_q(p))};
  while (chain.back().size() > 1) {
    QPoly r = divmod(chain[chain.size() - 2], chain.back()).second;
    if (r.empty()) break;
    for (auto& c : r) c = -c;
    chain.push_back(std::move(r));
  }
  return sign_variations(chain, lo) - sign_variations(chain, hi);
}

int unit_circle_root_count(const IntPolynomial& p) {
  int total = 0;
  const IntPolynomial x_minus_1{-1, 1};
  const IntPolynomial x_plus_1{1, 1};
  for (const auto& [mult, factor] : square_free_decomposition(p)) {
    IntPolynomial a = factor;
    int count = 0;
    // Square-free, so each of +1, -1 divides at most once.
    BigInt at_one = 0, at_minus_one = 0;
    for (int i = a.degree(); i >= 0; --i) {
      at_one += a[i];
      at_minus_one += (i % 2 ? -a[i] : a[i]);
    }
    if (at_one == 0) {
      a = exact_divide(a, x_minus_1);
      ++count;
    }
    if (at_minus_one == 0) {
      a = exact_divide(a, x_plus_1);
      ++count;
    }
    if (a.degree() >= 2) {
      // Unit-circle roots come in pairs (z, conj z = 1/z), so they are common
      // roots of a and its reciprocal. The gcd g is palindromic of even degree
      // 2m and g(x) = x^m h(x + 1/x); z on the circle <=> x + 1/x in (-2, 2).
      IntPolynomial g = monic_gcd(a, a.reciprocal());
      if (g.degree() >= 2) {
        const int m = g.degree() / 2;
        std::vector<BigInt> h(m + 1);
        std::vector<BigInt> prev{2};  // P_0 = 2 (used only by the recurrence)
        std::vector<BigInt> cur{0, 1};  // P_1 = y
        h[0] += g[m];
        for (int j = 1; j <= m; ++j) {
          for (std::size_t i = 0; i < cur.size(); ++i) h[i] += g[m + j] * cur[i];
          std::vector<BigInt> next(cur.size() + 1);
          for (std::size_t i = 0; i < cur.size(); ++i) next[i + 1] += cur[i];
          for (std::size_t i = 0; i < prev.size(); ++i) next[i] -= prev[i];
          prev = std::move(cur);
          cur = std::move(next);
        }
        count += 2 * sturm_count(IntPolynomial(std::move(h)), mpq_class(-2), mpq_class(2));
      }
    }
    total += mult * count;
  }
  return total;
}

}  // namespace toral
