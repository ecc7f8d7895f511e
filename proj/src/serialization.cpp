#include "specnorm/serialization.hpp"

#include <numbers>

namespace specnorm {

using nlohmann::json;

namespace {

json vec_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }
json point_json(const Point2& p) { return json::array({p.x(), p.y()}); }

template <typename T>
void read_opt(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

void to_json(json& j, const Intrinsics& k) { j = json{{"fx", k.fx}, {"fy", k.fy}, {"cx", k.cx}, {"cy", k.cy}}; }

void from_json(const json& j, Intrinsics& k) {
  k = Intrinsics(j.at("fx").get<double>(), j.at("fy").get<double>(), j.at("cx").get<double>(),
                 j.at("cy").get<double>());
}

void to_json(json& j, const SimParams& p) {
  j = json{{"M", p.texture_size},
           {"V_Z", p.viewpoint_z},
           {"n", p.roughness},
           {"theta_deg", p.slant * 180.0 / std::numbers::pi},
           {"sigma", p.noise},
           {"epsilon", p.light_offset},
           {"t", p.isovalue},
           {"seed", p.seed},
           {"m", p.max_intensity}};
}

void from_json(const json& j, SimParams& p) {
  read_opt(j, "M", p.texture_size);
  read_opt(j, "V_Z", p.viewpoint_z);
  read_opt(j, "n", p.roughness);
  if (j.contains("theta_deg")) p.slant = j.at("theta_deg").get<double>() * std::numbers::pi / 180.0;
  read_opt(j, "sigma", p.noise);
  read_opt(j, "epsilon", p.light_offset);
  read_opt(j, "t", p.isovalue);
  read_opt(j, "seed", p.seed);
  read_opt(j, "m", p.max_intensity);
}

void to_json(json& j, const GroundTruth& g) {
  const Mat3& h = g.homography.matrix();
  json rows = json::array();
  for (int r = 0; r < 3; ++r) rows.push_back(json::array({h(r, 0), h(r, 1), h(r, 2)}));
  j = json{{"normal", vec_json(g.normal.vec())},
           {"homography", rows},
           {"intrinsics", g.intrinsics},
           {"bp_image", point_json(g.bp_image)},
           {"bp_scene", point_json(g.bp_scene)},
           {"light", vec_json(g.light)}};
}

void to_json(json& j, const FitDiagnostics& d) {
  j = json{{"rms_algebraic", d.rms_algebraic},
           {"rms_distance", d.rms_distance},
           {"point_count", d.point_count},
           {"eccentricity", d.eccentricity},
           {"conditioning", d.conditioning}};
}

void to_json(json& j, const NormalPair& n) {
  j = json{{"n_plus", vec_json(n.n_plus.vec())}, {"n_minus", vec_json(n.n_minus.vec())}, {"degenerate", n.degenerate}};
}

json polyline_json(const IsophotePolyline& line, double level) {
  json pts = json::array();
  for (const auto& p : line.points) pts.push_back(point_json(p));
  return json{{"level", level}, {"closed", line.closed}, {"points", pts}};
}

json result_json(const SpecularityResult& r) {
  const auto c = r.fit.conic.coeffs();
  return json{{"t", r.isovalue},
              {"bp", point_json(r.bp)},
              {"conic", json::array({c[0], c[1], c[2], c[3], c[4], c[5]})},
              {"diagnostics", r.fit.diagnostics},
              {"normals", r.normals},
              {"intrinsics", r.intrinsics},
              {"warnings", r.warnings}};
}

json trial_json(const TrialRecord& r) {
  json j{{"value", r.value}, {"trial", r.trial}, {"success", r.success}};
  if (r.success) {
    j["error_deg"] = r.error_deg;
    j["diagnostics"] = r.diagnostics;
  } else {
    j["reason"] = r.reason;
  }
  return j;
}

json roi_outcome_json(const RoiOutcome& o) {
  json j{{"roi", json::array({o.roi.x0, o.roi.y0, o.roi.width, o.roi.height})}};
  if (o.result) {
    j["success"] = true;
    j["result"] = result_json(*o.result);
  } else {
    j["success"] = false;
    j["reason"] = o.failure;
  }
  return j;
}

}  // namespace specnorm
