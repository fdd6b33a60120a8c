#pragma once

// JSON form: {"order": N, "vars": [..], "terms": [{"a":..,"b":..,"num":"..","den":".."}]}
// Numerators and denominators travel as decimal strings.

#include <nlohmann/json.hpp>

#include "pendinv/series.hpp"

namespace pendinv {

nlohmann::json to_json(const Series2& f);
nlohmann::json to_json(const Series1& f);
nlohmann::json to_json(const ComplexSeries2& f);
Series2 series2_from_json(const nlohmann::json& j);
Series1 series1_from_json(const nlohmann::json& j);

}  // namespace pendinv
