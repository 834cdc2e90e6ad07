#pragma once

// JSON interchange for vectors and matrices:
//   {"dims": [d0, d1, ...], "re": [...], "im": [...]}
// with row-major flattening. A payload of length D is a StateVector, one
// of length D*D an Operator (always read dense).

#include "ssrqec/hilbert.hpp"

#include <json.hpp>

namespace ssrqec {

nlohmann::json to_json(const StateVector& psi);
nlohmann::json to_json(const Operator& op);
nlohmann::json matrix_to_json(const Eigen::MatrixXcd& m);

// Throws std::invalid_argument on malformed input.
HilbertObject hilbert_from_json(const nlohmann::json& j);
StateVector state_from_json(const nlohmann::json& j);
Operator operator_from_json(const nlohmann::json& j);

}  // namespace ssrqec
