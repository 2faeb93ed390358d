#include "toral/io.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "toral/error.hpp"

namespace toral {

namespace {

BigInt big_from_json(const json& v) {
  if (v.is_number_integer()) return BigInt(std::to_string(v.get<std::int64_t>()));
  if (v.is_number_unsigned()) return BigInt(std::to_string(v.get<std::uint64_t>()));
  if (v.is_string()) {
    BigInt out;
    if (out.set_str(v.get<std::string>(), 10) != 0)
      throw Error(ErrorCode::Parse, "matrix entry '" + v.get<std::string>() + "' is not an integer");
    return out;
  }
  throw Error(ErrorCode::Parse, "matrix entries must be integers");
}

json big_to_json(const BigInt& v) {
  if (v.fits_slong_p()) return v.get_si();
  return v.get_str();
}

/// Non-finite doubles become null.
json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double require_number(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number()) throw Error(ErrorCode::Parse, std::string("missing numeric field '") + key + "'");
  return j[key].get<double>();
}

std::string region_name(ModulusRegion r) {
  switch (r) {
    case ModulusRegion::Expanding: return "expanding";
    case ModulusRegion::Neutral: return "neutral";
    case ModulusRegion::Contracting: return "contracting";
  }
  return "neutral";
}

json tail_entries(const std::vector<TailEntry>& entries) {
  json out = json::array();
  for (const auto& e : entries)
    out.push_back({{"b", e.b},
                   {"measured", number(e.measured)},
                   {"remainder_bound", number(e.remainder_bound)},
                   {"upper", number(e.upper)},
                   {"bound", number(e.bound)},
                   {"minimal_R", number(e.minimal_R)},
                   {"holds", e.holds},
                   {"beyond_radius", e.beyond_radius}});
  return out;
}

}  // namespace

IntegerMatrix matrix_from_json(const json& j) {
  if (!j.is_object() || !j.contains("rows") || !j["rows"].is_array())
    throw Error(ErrorCode::Parse, "matrix JSON needs a 'rows' array");
  std::vector<std::vector<BigInt>> rows;
  for (const auto& row : j["rows"]) {
    if (!row.is_array()) throw Error(ErrorCode::Parse, "each matrix row must be an array");
    std::vector<BigInt> r;
    for (const auto& v : row) r.push_back(big_from_json(v));
    rows.push_back(std::move(r));
  }
  auto m = IntegerMatrix::from_rows(rows);
  if (j.contains("dim") && (!j["dim"].is_number_integer() || j["dim"].get<std::int64_t>() != static_cast<std::int64_t>(m.dim())))
    throw Error(ErrorCode::NotSquare, "'dim' does not match the number of rows");
  return m;
}

json matrix_to_json(const IntegerMatrix& m) {
  json rows = json::array();
  for (const auto& row : m.rows()) {
    json r = json::array();
    for (const auto& v : row) r.push_back(big_to_json(v));
    rows.push_back(r);
  }
  return {{"dim", m.dim()}, {"rows", rows}};
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Parse, "cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Parse, "'" + path + "': " + e.what());
  }
}

IntegerMatrix load_matrix(const std::string& path_or_literal) {
  std::error_code ec;
  if (std::filesystem::is_regular_file(path_or_literal, ec)) return matrix_from_json(load_json_file(path_or_literal));
  if (path_or_literal.find_first_of(",;") != std::string::npos || path_or_literal.find_first_not_of("-0123456789 ") == std::string::npos)
    return parse_matrix_literal(path_or_literal);
  throw Error(ErrorCode::Parse, "'" + path_or_literal + "' is neither a matrix file nor a literal like 2,1;1,1");
}

FourierObservable observable_from_json(const json& j) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
    throw Error(ErrorCode::Parse, "observable JSON needs a 'kind' string");
  if (!j.contains("dim") || !j["dim"].is_number_integer() || j["dim"].get<std::int64_t>() < 1)
    throw Error(ErrorCode::Parse, "observable JSON needs a positive integer 'dim'");
  const auto dim = j["dim"].get<std::size_t>();
  const ObservableKind kind = observable_kind_from_string(j["kind"].get<std::string>());
  if (kind == ObservableKind::Explicit) {
    if (!j.contains("coeffs") || !j["coeffs"].is_array()) throw Error(ErrorCode::Parse, "explicit observable needs 'coeffs'");
    std::vector<FourierTerm> reps;
    for (const auto& c : j["coeffs"]) {
      if (!c.contains("k") || !c["k"].is_array()) throw Error(ErrorCode::Parse, "each coefficient needs a 'k' array");
      Frequency k;
      for (const auto& v : c["k"]) {
        if (!v.is_number_integer()) throw Error(ErrorCode::Parse, "frequency entries must be integers");
        k.push_back(v.get<std::int64_t>());
      }
      const double re = c.value("re", 0.0), im = c.value("im", 0.0);
      reps.push_back({k, {re, im}});
    }
    return FourierObservable::from_representatives(dim, reps);
  }
  ObservableSpec spec;
  spec.kind = kind;
  spec.dim = dim;
  spec.amplitude = j.contains("A") ? require_number(j, "A") : 1.0;
  spec.exponent = require_number(j, kind == ObservableKind::ProductDecay ? "delta" : "alpha");
  if (!j.contains("radius") || !j["radius"].is_number_integer()) throw Error(ErrorCode::Parse, "missing integer 'radius'");
  spec.truncation_radius = j["radius"].get<std::int64_t>();
  return FourierObservable::build(spec);
}

json to_json(const Interval& i) {
  return {{"lo", number(i.lower())}, {"hi", number(i.upper())}, {"lo_exact", i.lo.get_str()}, {"hi_exact", i.hi.get_str()}};
}

json to_json(const SpectralClassification& c) {
  json charpoly = json::array();
  for (const auto& a : c.characteristic.coefficients()) charpoly.push_back(big_to_json(a));
  json roots = json::array();
  for (const auto& r : c.roots)
    roots.push_back({{"re", r.center.real()},
                     {"im", r.center.imag()},
                     {"radius", number(r.radius.get_d())},
                     {"multiplicity", r.multiplicity},
                     {"region", region_name(r.region)}});
  json orders = json::array();
  for (auto o : c.root_of_unity_orders) orders.push_back(o);
  return {{"schema", kSchemaVersion},
          {"dim", c.dim},
          {"characteristic_polynomial", charpoly},
          {"determinant", big_to_json(c.determinant)},
          {"is_automorphism", c.is_automorphism},
          {"is_ergodic", c.is_ergodic},
          {"is_hyperbolic", c.is_hyperbolic},
          {"d_u", c.d_u},
          {"d_e", c.d_e},
          {"d_s", c.d_s},
          {"root_of_unity_orders", orders},
          {"spectral_radius", to_json(c.spectral_radius)},
          {"rho_u_bound", c.rho_u_bound ? to_json(*c.rho_u_bound) : json(nullptr)},
          {"roots", roots},
          {"precision_bits", c.precision_bits}};
}

json to_json(const VarianceReport& r) {
  json covs = json::array();
  for (std::size_t n = 0; n < r.covariances.size(); ++n) covs.push_back({n, r.covariances[n]});
  json escapes = json::array();
  for (const auto& e : r.escapes)
    escapes.push_back({{"m", e.m}, {"last_return", e.last_return}, {"certified_exit", e.certified_exit}});
  json partial = json::array();
  for (const auto& [n, v] : r.partial_sums) partial.push_back({n, v});
  return {{"schema", kSchemaVersion},
          {"covariances", covs},
          {"N0", r.N0},
          {"sigma2", r.sigma2},
          {"absolutely_convergent", r.absolutely_convergent},
          {"degenerate", r.degenerate},
          {"cap", r.cap},
          {"truncation_radius", r.truncation_radius},
          {"escapes", escapes},
          {"partial_sums", partial}};
}

json to_json(const TailFit& f) {
  return {{"theta_hat", number(f.theta_hat)},
          {"standard_error", number(f.standard_error)},
          {"intercept", number(f.intercept)},
          {"r_squared", number(f.r_squared)},
          {"max_abs_residual", number(f.max_abs_residual)},
          {"residuals", f.residuals},
          {"poor_fit", f.poor_fit}};
}

json to_json(const ConditionReport& r) {
  return {{"schema", kSchemaVersion},
          {"p", r.p},
          {"q", r.q},
          {"theta", r.theta},
          {"beta", r.beta},
          {"R", r.R},
          {"theta_required_F1", r.theta_required_F1},
          {"beta_required_F2", r.beta_required_F2},
          {"combined_threshold", r.combined_threshold},
          {"condF1_tail", tail_entries(r.condF1_tail)},
          {"condF2_tail", tail_entries(r.condF2_tail)},
          {"tails_hold_F1", r.tails_hold_F1},
          {"tails_hold_F2", r.tails_hold_F2},
          {"satisfied_F1", r.satisfied_F1},
          {"satisfied_F2", r.satisfied_F2},
          {"theta_implies_F2", r.theta_implies_F2}};
}

json to_json(const Estimate& e) { return {{"value", number(e.value)}, {"standard_error", number(e.standard_error)}}; }

json to_json(const std::vector<VarianceRow>& rows) {
  json out = json::array();
  for (const auto& r : rows)
    out.push_back({{"n", r.n}, {"empirical", to_json(r.empirical)}, {"exact", r.exact}, {"within_3se", r.within_3se}});
  return {{"schema", kSchemaVersion}, {"rows", out}};
}

json to_json(const std::vector<DecorrelationRow>& rows) {
  json out = json::array();
  for (const auto& r : rows)
    out.push_back({{"lag", r.lag}, {"empirical", to_json(r.empirical)}, {"exact", r.exact}, {"within_3se", r.within_3se}});
  return {{"schema", kSchemaVersion}, {"rows", out}};
}

json to_json(const CltReport& r) {
  json attempts = json::array();
  for (const auto& a : r.attempts) attempts.push_back({{"seed", a.seed}, {"ks_distance", a.ks_distance}, {"pass", a.pass}});
  return {{"schema", kSchemaVersion},
          {"n", r.n},
          {"samples", r.samples},
          {"sigma2_used", r.sigma2_used},
          {"ks_distance", r.ks_distance},
          {"ks_critical_95", r.ks_critical_95},
          {"empirical_var_over_n", to_json(r.empirical_var_over_n)},
          {"exact_var_over_n", r.exact_var_over_n},
          {"pass_variance", r.pass_variance},
          {"pass_ks", r.pass_ks},
          {"seed_used", r.seed_used},
          {"attempts", attempts}};
}

json to_json(const ScalingReport& r) {
  json maxima = json::array();
  for (const auto& e : r.mean_abs_max) maxima.push_back(to_json(e));
  return {{"schema", kSchemaVersion},
          {"grid", r.grid},
          {"mean_abs_max", maxima},
          {"fitted_exponent", to_json(r.fitted_exponent)},
          {"intercept", r.intercept}};
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace toral
