#pragma once

// Serialization of grid reports. Rationals are written losslessly: JSON as
// {"num": "...", "den": "..."} with decimal strings, CSV and text as "num/den".

#include <string>

#include <nlohmann/json.hpp>

#include "treeprob/counting.hpp"
#include "treeprob/verify.hpp"

namespace treeprob {

using Json = nlohmann::ordered_json;

Json rational_to_json(const Rational& q);
/// Inverse of rational_to_json; throws std::invalid_argument on malformed input.
Rational rational_from_json(const Json& j);

Json report_to_json(const GridReport& report);
/// Header "suite,zeta,check,k,r,p,lhs,rhs,status" then one row per cell.
std::string report_to_csv(const GridReport& report);
/// One line per cell plus a summary; failing evidence cells are flagged as counterexamples.
std::string report_to_text(const GridReport& report);

/// Quotes a CSV field when it holds a comma, quote or newline.
std::string csv_field(const std::string& field);

}  // namespace treeprob
