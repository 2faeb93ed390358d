#pragma once

#include <json.hpp>
#include <string>

#include "toral/conditions.hpp"
#include "toral/covariance.hpp"
#include "toral/matrix.hpp"
#include "toral/observable.hpp"
#include "toral/spectral.hpp"
#include "toral/stats.hpp"

namespace toral {

using json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

/// {"dim": d, "rows": [[...], ...]}; entries may be JSON integers or decimal
/// strings for values beyond 64 bits. Throws Parse / NotSquare.
IntegerMatrix matrix_from_json(const json& j);
json matrix_to_json(const IntegerMatrix& m);

/// A file path holding matrix JSON, or a literal such as "2,1;1,1".
IntegerMatrix load_matrix(const std::string& path_or_literal);

/// {"kind": "explicit", "dim": d, "coeffs": [{"k": [...], "re": x, "im": y}, ...]}
/// or {"kind": "product_decay" | "leonov", "dim": d, "A": a, "delta" | "alpha": e,
/// "radius": r}. Explicit input lists one representative per +-k pair.
FourierObservable observable_from_json(const json& j);
json load_json_file(const std::string& path);

json to_json(const Interval& i);
json to_json(const SpectralClassification& c);
json to_json(const VarianceReport& r);
json to_json(const ConditionReport& r);
json to_json(const TailFit& f);
json to_json(const Estimate& e);
json to_json(const std::vector<VarianceRow>& rows);
json to_json(const std::vector<DecorrelationRow>& rows);
json to_json(const CltReport& r);
json to_json(const ScalingReport& r);

/// Two-space indented dump with a trailing newline; stable byte for byte.
std::string dump(const json& j);

}  // namespace toral
