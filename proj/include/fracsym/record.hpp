#pragma once

// JSON records for reduced-solution candidates and symmetry reports.
// Doubles are written in shortest round-trip form, so a write/read cycle is
// bit-exact; non-finite values are written as the strings "inf", "-inf", "nan".

#include <string>

#include <json.hpp>

#include "fracsym/fkdvb.hpp"
#include "fracsym/reduce.hpp"

namespace fracsym {

nlohmann::json params_to_json(const FkdvbParams& params);
FkdvbParams params_from_json(const nlohmann::json& j);

/// Fields: params, basis, coefficients, residual_norm, converged, plus
/// normalization_error, iterations, best_start, cost_history, diagnostics.
nlohmann::json candidate_to_json(const ReducedSolutionCandidate& candidate);
/// Throws IoError naming the first missing or mistyped field.
ReducedSolutionCandidate candidate_from_json(const nlohmann::json& j);

void write_candidate_file(const std::string& path, const ReducedSolutionCandidate& candidate);
ReducedSolutionCandidate read_candidate_file(const std::string& path);

/// Mirrors symmetry_report at full precision.
nlohmann::json symmetry_to_json(const FkdvbParams& params);

}  // namespace fracsym
