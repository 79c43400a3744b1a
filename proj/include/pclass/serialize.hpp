#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

#include "pclass/hermitian.hpp"
#include "pclass/ineq_single.hpp"

namespace pclass {

// Matrix exchange: {"dim": n, "rows": [[...], ...]}; vectors: {"coords": [...]}.
HermitianOperator operator_from_json(const nlohmann::json& j);
nlohmann::json to_json(const HermitianOperator& a);
/// Accepts {"coords": [...]} or a bare array.
StateVector state_from_json(const nlohmann::json& j);
nlohmann::json to_json(const StateVector& x);

/// [m, M]
SpectrumWindow window_from_json(const nlohmann::json& j);
nlohmann::json to_json(const SpectrumWindow& w);

/// Function spec strings: "power:0.5", "ln", "qcap:1.0", "affine:a,b",
/// "recip", "pwl:x0,y0,x1,y1,...", with an optional "^n" suffix for
/// power_compose. Flags left unknown by the family are certified on the grid.
ScalarFunction parse_function_spec(std::string_view spec, const SpectrumWindow& domain);

/// Bivariate F by name: "diff" (u - v), "ratio" (u / v), "second" (v),
/// "negdiff" (v - u). natural receives the known monotonicity in u.
Bivariate parse_bivariate(std::string_view name, UMonotonicity* natural = nullptr);

}  // namespace pclass
