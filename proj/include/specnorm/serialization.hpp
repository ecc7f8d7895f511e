#pragma once

// JSON sidecars and result records.

#include "specnorm/harness.hpp"
#include "specnorm/isophote.hpp"
#include "specnorm/reconstruction.hpp"
#include "specnorm/simulator.hpp"

#include <json.hpp>

namespace specnorm {

void to_json(nlohmann::json& j, const Intrinsics& k);
void from_json(const nlohmann::json& j, Intrinsics& k);

/// Keys: M, V_Z, n, theta_deg, sigma, epsilon, t, seed, m. Missing keys keep
/// the defaults, so partial config blocks are accepted.
void to_json(nlohmann::json& j, const SimParams& p);
void from_json(const nlohmann::json& j, SimParams& p);

void to_json(nlohmann::json& j, const GroundTruth& g);
void to_json(nlohmann::json& j, const FitDiagnostics& d);
void to_json(nlohmann::json& j, const NormalPair& n);

/// {"level": t, "closed": bool, "points": [[x, y], ...]}
nlohmann::json polyline_json(const IsophotePolyline& line, double level);

/// Level, conic coefficients, diagnostics, both normals, intrinsics.
nlohmann::json result_json(const SpecularityResult& r);
nlohmann::json trial_json(const TrialRecord& r);
nlohmann::json roi_outcome_json(const RoiOutcome& o);

}  // namespace specnorm
