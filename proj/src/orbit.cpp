#include "toral/orbit.hpp"

#include <charconv>
#include <string>

#include "toral/error.hpp"
#include "toral/summation.hpp"

namespace toral {

namespace {

std::uint64_t reduce_entry(const BigInt& v, std::uint64_t q) {
  static_assert(sizeof(unsigned long) == sizeof(std::uint64_t));
  return mpz_fdiv_ui(v.get_mpz_t(), q);
}

std::string format_double(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

OrbitStepper::OrbitStepper(const IntegerMatrix& s, std::uint64_t q) : modulus_(q), dim_(s.dim()) {
  rows_.reserve(dim_ * dim_);
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j) rows_.push_back(reduce_entry(s(i, j), q));
}

OrbitStepper::OrbitStepper(const ToralAutomorphism& t, std::uint64_t q) : OrbitStepper(t.matrix(), q) {}

ModularState OrbitStepper::operator()(const ModularState& x) const {
  if (x.dim() != dim_) throw Error(ErrorCode::DimensionMismatch, "state and matrix dimensions differ");
  if (x.q != q()) throw Error(ErrorCode::DimensionMismatch, "state denominator differs from the stepper's");
  ModularState out{x.q, std::vector<std::uint64_t>(dim_)};
  std::vector<std::uint64_t> in(x.residues);
  for (auto& r : in) r %= x.q;
  apply(in.data(), out.residues.data());
  return out;
}

ModularState step(const ToralAutomorphism& t, const ModularState& x) { return OrbitStepper(t, x.q)(x); }

BirkhoffSeries birkhoff(const ToralAutomorphism& t, const FourierObservable& f, const ModularState& x0, std::size_t n,
                        bool keep_states) {
  if (f.dim() != t.dim() || x0.dim() != t.dim())
    throw Error(ErrorCode::DimensionMismatch, "observable, point and automorphism dimensions differ");
  const OrbitStepper stepper(t, x0.q);
  const ObservableEvaluator eval(f, x0.q);
  BirkhoffSeries s;
  s.x0 = x0;
  s.n = n;
  s.values.reserve(n);
  s.partial_sums.reserve(n);
  std::vector<std::uint64_t> cur(x0.residues), next(x0.dim());
  for (auto& r : cur) r %= x0.q;
  CompensatedSum sum;
  for (std::size_t k = 1; k <= n; ++k) {
    stepper.apply(cur.data(), next.data());
    cur.swap(next);
    const double v = eval(cur.data());
    sum.add(v);
    s.values.push_back(v);
    s.partial_sums.push_back(sum.value());
    if (keep_states) s.states.push_back({x0.q, cur});
  }
  return s;
}

SplitMix64 trajectory_rng(std::uint64_t seed, std::uint64_t index) {
  // Two rounds of mixing keep nearby (seed, index) pairs on unrelated streams.
  return SplitMix64(SplitMix64::mix(SplitMix64::mix(seed) ^ (index * 0xd1b54a32d192ed03ULL + 1)));
}

std::uint64_t uniform_below(SplitMix64& rng, std::uint64_t q) {
  // Lemire: high word of x * q, rejecting the biased low range.
  unsigned __int128 m = static_cast<unsigned __int128>(rng()) * q;
  auto low = static_cast<std::uint64_t>(m);
  if (low < q) {
    const std::uint64_t threshold = -q % q;
    while (low < threshold) {
      m = static_cast<unsigned __int128>(rng()) * q;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

ModularState sample_state(std::uint64_t seed, std::uint64_t index, std::uint64_t q, std::size_t dim) {
  auto rng = trajectory_rng(seed, index);
  ModularState x{q, std::vector<std::uint64_t>(dim)};
  for (auto& r : x.residues) r = uniform_below(rng, q);
  return x;
}

std::vector<ModularState> sample_initial(std::uint64_t seed, std::uint64_t q, std::size_t count, std::size_t dim) {
  std::vector<ModularState> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(sample_state(seed, i, q, dim));
  return out;
}

void write_trajectory_csv(std::ostream& out, const BirkhoffSeries& series, bool with_states) {
  out << "k,S_k";
  if (with_states)
    for (std::size_t i = 1; i <= series.x0.dim(); ++i) out << ",x_" << i;
  out << '\n';
  for (std::size_t k = 0; k < series.partial_sums.size(); ++k) {
    out << (k + 1) << ',' << format_double(series.partial_sums[k]);
    if (with_states && k < series.states.size())
      for (auto r : series.states[k].residues) out << ',' << r << '/' << series.states[k].q;
    out << '\n';
  }
}

}  // namespace toral
