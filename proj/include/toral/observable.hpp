#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string_view>
#include <vector>

#include "toral/lattice.hpp"

namespace toral {

/// Lattice point k of Z^d.
using Frequency = std::vector<std::int64_t>;

/// max_i |k_i|
std::int64_t sup_norm(const Frequency& k);

/// True when the first nonzero coordinate of k is positive; exactly one of
/// k, -k is canonical for k != 0.
bool is_canonical(const Frequency& k);

enum class ObservableKind { Explicit, ProductDecay, Leonov };

std::string_view to_string(ObservableKind kind);
ObservableKind observable_kind_from_string(std::string_view name);

struct ObservableSpec {
  ObservableKind kind = ObservableKind::Explicit;
  std::size_t dim = 0;
  /// Closed-form kinds: |c_k| = A * prod_i g(k_i).
  double amplitude = 1.0;
  /// delta for ProductDecay, alpha for Leonov.
  double exponent = 0.0;
  std::int64_t truncation_radius = 0;
  /// Explicit kind: the full coefficient map, both k and -k present.
  std::map<Frequency, std::complex<double>> coefficients;
  /// Optional phase schedule for closed-form kinds, applied on canonical k;
  /// -k receives the opposite phase.
  std::function<double(const Frequency&)> phase;
};

struct FourierTerm {
  Frequency k;
  std::complex<double> c;
};

/// Real centred trigonometric polynomial sum_k c_k e^{2 pi i <k, x>} with a
/// finite materialised support (c_0 = 0, c_{-k} = conj c_k).
class FourierObservable {
 public:
  /// Throws ZeroRadius, NonSymmetricExplicitInput, DimensionMismatch.
  static FourierObservable build(const ObservableSpec& spec);

  /// Explicit observable from one representative per +-k pair (the file
  /// format); the conjugate partners are filled in.
  static FourierObservable from_representatives(std::size_t dim, const std::vector<FourierTerm>& reps);

  std::size_t dim() const noexcept { return dim_; }
  ObservableKind kind() const noexcept { return kind_; }
  double amplitude() const noexcept { return amplitude_; }
  double exponent() const noexcept { return exponent_; }
  /// Closed-form kinds: the materialisation radius. Explicit: max |k| over
  /// the support (0 when empty).
  std::int64_t truncation_radius() const noexcept { return radius_; }
  std::int64_t support_radius() const noexcept { return support_radius_; }

  /// Full support, sorted by k.
  const std::vector<FourierTerm>& terms() const noexcept { return terms_; }
  /// Canonical half of the support.
  const std::vector<FourierTerm>& representatives() const noexcept { return reps_; }
  std::complex<double> coefficient(const Frequency& k) const;
  bool empty() const noexcept { return terms_.empty(); }

  /// sum |c_k| and sum |c_k|^2 over the materialised support.
  double l1_norm() const;
  double l2_norm_squared() const;

 private:
  std::size_t dim_ = 0;
  ObservableKind kind_ = ObservableKind::Explicit;
  double amplitude_ = 0;
  double exponent_ = 0;
  std::int64_t radius_ = 0;
  std::int64_t support_radius_ = 0;
  std::vector<FourierTerm> terms_;
  std::vector<FourierTerm> reps_;
  std::map<Frequency, std::complex<double>> lookup_;
};

/// f(a/q). The phase <k, a> mod q is formed exactly before the single
/// transcendental evaluation; the sum runs over canonical k and is real by
/// construction.
double evaluate(const FourierObservable& f, const ModularState& x);

/// Full complex sum over the support (diagnostic; the imaginary part is
/// pure roundoff for a real observable).
std::complex<double> evaluate_complex(const FourierObservable& f, const ModularState& x);

/// Evaluation bound to one denominator q: the frequencies are reduced mod q
/// once, so each call costs one modular dot product and one sin/cos per
/// canonical frequency. Used in the orbit hot loops.
class ObservableEvaluator {
 public:
  ObservableEvaluator(const FourierObservable& f, std::uint64_t q);

  double operator()(const std::uint64_t* residues) const;
  double operator()(const ModularState& x) const { return (*this)(x.residues.data()); }

  std::size_t dim() const noexcept { return dim_; }

 private:
  Modulus modulus_;
  std::size_t dim_;
  std::vector<std::uint64_t> freq_mod_q_;  // row-major, one row per canonical k
  std::vector<double> re_;
  std::vector<double> im_;
};

}  // namespace toral
