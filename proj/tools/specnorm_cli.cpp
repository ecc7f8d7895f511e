// Command-line front end: render, trial, sweep, reconstruct, selftest.

#include "specnorm/error.hpp"
#include "specnorm/harness.hpp"
#include "specnorm/selftest.hpp"
#include "specnorm/serialization.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace specnorm;

namespace {

struct Overrides {
  std::optional<double> sigma, theta_deg, roughness, isovalue, epsilon, viewpoint_z;
  std::optional<int> texture_size;
};

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out = ".";
  std::string score_mode;
  std::optional<double> blur;
  std::optional<unsigned> threads;
  Overrides params;
};

struct Config {
  SimParams base;
  int trials = 1000;
  unsigned threads = 1;
  std::uint64_t seed = 0;
  PipelineOptions options;
  std::map<std::string, std::vector<double>> grids;
};

void add_common(CLI::App* app, Common& c, bool with_params) {
  app->add_option("--config", c.config, "JSON configuration file");
  app->add_option("--seed", c.seed, "Master seed (u64)");
  app->add_option("--out", c.out, "Output directory");
  app->add_option("--score-mode", c.score_mode, "min | oracle-sign")->check(CLI::IsMember({"min", "oracle-sign"}));
  app->add_option("--blur", c.blur, "Gaussian smoothing sigma in pixels");
  app->add_option("--threads", c.threads, "Worker threads");
  if (!with_params) return;
  app->add_option("--sigma", c.params.sigma, "Noise std as a fraction of m");
  app->add_option("--theta", c.params.theta_deg, "Plane slant in degrees");
  app->add_option("--roughness,-n", c.params.roughness, "Phong exponent");
  app->add_option("--isovalue,-t", c.params.isovalue, "Normalized isovalue");
  app->add_option("--epsilon", c.params.epsilon, "Light offset in mm");
  app->add_option("--vz", c.params.viewpoint_z, "Camera to plane distance in mm");
  app->add_option("--size,-M", c.params.texture_size, "Texture and image size in pixels");
}

Config load_config(const Common& c) {
  Config cfg;
  if (!c.config.empty()) {
    std::ifstream in(c.config);
    if (!in) throw Error(ErrorCode::Io, "cannot open config " + c.config);
    json j;
    try {
      in >> j;
      if (j.contains("params")) cfg.base = j.at("params").get<SimParams>();
      if (j.contains("trials")) cfg.trials = j.at("trials").get<int>();
      if (j.contains("threads")) cfg.threads = j.at("threads").get<unsigned>();
      if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
      if (j.contains("blur_sigma")) cfg.options.blur_sigma = j.at("blur_sigma").get<double>();
      if (j.contains("score_mode")) {
        cfg.options.score = j.at("score_mode").get<std::string>() == "oracle-sign" ? ScoreMode::OracleSign : ScoreMode::Min;
      }
      if (j.contains("sweeps")) cfg.grids = j.at("sweeps").get<std::map<std::string, std::vector<double>>>();
    } catch (const json::exception& e) {
      throw Error(ErrorCode::Io, std::string("bad config: ") + e.what());
    }
  }
  if (c.seed) cfg.seed = *c.seed;
  cfg.base.seed = cfg.seed;
  if (c.threads) cfg.threads = *c.threads;
  if (c.blur) cfg.options.blur_sigma = *c.blur;
  if (!c.score_mode.empty()) cfg.options.score = c.score_mode == "oracle-sign" ? ScoreMode::OracleSign : ScoreMode::Min;
  const Overrides& o = c.params;
  if (o.sigma) cfg.base.noise = *o.sigma;
  if (o.theta_deg) cfg.base.slant = *o.theta_deg * std::numbers::pi / 180.0;
  if (o.roughness) cfg.base.roughness = *o.roughness;
  if (o.isovalue) cfg.base.isovalue = *o.isovalue;
  if (o.epsilon) cfg.base.light_offset = *o.epsilon;
  if (o.viewpoint_z) cfg.base.viewpoint_z = *o.viewpoint_z;
  if (o.texture_size) cfg.base.texture_size = *o.texture_size;
  return cfg;
}

void write_json(const fs::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out << j.dump(2) << '\n';
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(std::stod(item));
  }
  return out;
}

RegionOfInterest parse_roi(const std::string& text) {
  const auto v = parse_list(text);
  if (v.size() != 4) throw Error(ErrorCode::InvalidArgument, "ROI must be x,y,width,height: " + text);
  return {static_cast<int>(v[0]), static_cast<int>(v[1]), static_cast<int>(v[2]), static_cast<int>(v[3])};
}

int cmd_render(const Common& c, const std::string& format, const std::string& name, bool texture) {
  const Config cfg = load_config(c);
  Rng rng(cfg.seed);
  const SimulatedView view = simulate(cfg.base, rng);
  fs::create_directories(c.out);
  const fs::path stem = fs::path(c.out) / name;
  const PixelDepth depth = format.ends_with("16") ? PixelDepth::Bits16 : PixelDepth::Bits8;
  const bool png = format.starts_with("png");
  const fs::path image_path = stem.string() + (png ? ".png" : ".pgm");
  if (png) write_png(view.image, image_path, depth);
  else write_pgm(view.image, image_path, depth);
  if (texture) {
    const ScalarImage tex = render_texture(cfg.base, view.truth.light);
    write_pgm(tex, stem.string() + ".texture.pgm", depth);
  }
  write_json(stem.string() + ".params.json", json(cfg.base));
  write_json(stem.string() + ".truth.json", json(view.truth));
  std::cout << image_path.string() << '\n';
  return 0;
}

int cmd_trial(const Common& c) {
  const Config cfg = load_config(c);
  const TrialRecord rec = run_trial(cfg.base, cfg.seed, cfg.options);
  json out{{"params", cfg.base}, {"record", trial_json(rec)}};
  std::cout << out.dump(2) << '\n';
  return rec.success ? 0 : 1;
}

int cmd_sweep(const Common& c, const std::string& param, const std::string& values, std::optional<int> trials,
              bool fast) {
  const Config cfg = load_config(c);
  std::vector<SweptParam> params;
  if (param.empty()) {
    params = {SweptParam::Sigma, SweptParam::Theta, SweptParam::Roughness, SweptParam::Isovalue, SweptParam::Epsilon};
  } else {
    const auto p = parse_swept_param(param);
    if (!p) throw Error(ErrorCode::InvalidArgument, "unknown sweep parameter " + param);
    params = {*p};
  }
  fs::create_directories(c.out);
  for (SweptParam p : params) {
    SweepSpec spec = default_sweep(p, cfg.trials, cfg.seed);
    // The epsilon sweep keeps its own roughness; everything else follows the config.
    const double roughness = spec.base.roughness;
    spec.base = cfg.base;
    if (p == SweptParam::Epsilon && !c.params.roughness) spec.base.roughness = roughness;
    spec.options = cfg.options;
    spec.threads = cfg.threads;
    if (fast) spec.trials = 100;
    if (trials) spec.trials = *trials;
    const std::string key(to_string(p));
    if (cfg.grids.contains(key)) spec.values = cfg.grids.at(key);
    if (!values.empty()) spec.values = parse_list(values);
    const SweepResult result = run_sweep(spec);
    const fs::path path = fs::path(c.out) / ("sweep_" + key + ".csv");
    emit_sweep_csv(result, path);
    std::cout << "# " << key << " (" << spec.trials << " trials per value) -> " << path.string() << '\n'
              << summary_csv(result);
  }
  return 0;
}

int cmd_reconstruct(const Common& c, const std::string& image, const std::string& intrinsics,
                    const std::vector<std::string>& roi_texts, double isovalue, bool overlay) {
  const Config cfg = load_config(c);
  const ScalarImage img = read_image(image);
  std::vector<RegionOfInterest> rois;
  for (const auto& t : roi_texts) rois.push_back(parse_roi(t));
  if (rois.empty()) rois.push_back(RegionOfInterest::full(img));
  const Intrinsics k = load_intrinsics(intrinsics);
  const auto outcomes = reconstruct_image(img, k, rois, isovalue, cfg.options);
  json results = json::array();
  for (const auto& o : outcomes) results.push_back(roi_outcome_json(o));
  const json doc{{"image", image}, {"t", isovalue}, {"intrinsics", k}, {"results", results}};
  fs::create_directories(c.out);
  write_json(fs::path(c.out) / "reconstruction.json", doc);
  if (overlay) write_png(render_overlay(img, outcomes), fs::path(c.out) / "overlay.png");
  std::cout << doc.dump(2) << '\n';
  return std::all_of(outcomes.begin(), outcomes.end(), [](const RoiOutcome& o) { return o.result.has_value(); }) ? 0 : 1;
}

int cmd_selftest(const Common& c, int samples) {
  const Config cfg = load_config(c);
  bool all = true;
  for (const auto& r : run_analytic_checks(cfg.seed, samples)) {
    std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << ": " << r.detail << '\n';
    all = all && r.passed;
  }
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Surface normals from specular isophotes under co-located light and camera"};
  app.require_subcommand(1);

  Common common;
  std::string format = "pgm16", name = "render";
  bool texture = false;
  auto* render = app.add_subcommand("render", "Render a synthetic image with JSON sidecars");
  add_common(render, common, true);
  render->add_option("--format", format, "pgm8 | pgm16 | png8 | png16")
      ->check(CLI::IsMember({"pgm8", "pgm16", "png8", "png16"}));
  render->add_option("--name", name, "Output file stem");
  render->add_flag("--texture", texture, "Also write the scene-plane texture");

  auto* trial = app.add_subcommand("trial", "Run one end-to-end trial and print JSON");
  add_common(trial, common, true);

  std::string param, values;
  std::optional<int> trials;
  bool fast = false;
  auto* sweep = app.add_subcommand("sweep", "Monte-Carlo parameter sweep to CSV");
  add_common(sweep, common, true);
  sweep->add_option("--param", param, "sigma | theta | roughness | isovalue | epsilon (default: all)");
  sweep->add_option("--values", values, "Comma-separated values (theta in degrees)");
  sweep->add_option("--trials", trials, "Trials per value");
  sweep->add_flag("--fast", fast, "100 trials per value");

  std::string image, intrinsics;
  std::vector<std::string> rois;
  double isovalue = 0.1;
  bool overlay = false;
  auto* recon = app.add_subcommand("reconstruct", "Reconstruct normals from a calibrated image");
  add_common(recon, common, false);
  recon->add_option("--image", image, "PGM or PNG image")->required();
  recon->add_option("--intrinsics", intrinsics, "JSON with fx, fy, cx, cy (or a truth sidecar)")->required();
  recon->add_option("--roi", rois, "x,y,width,height (repeatable; default whole image)");
  recon->add_option("--isovalue,-t", isovalue, "Normalized isovalue");
  recon->add_flag("--overlay", overlay, "Write overlay.png with ellipses and normals");

  int samples = 1000;
  auto* selftest = app.add_subcommand("selftest", "Run the analytic invariant checks");
  add_common(selftest, common, false);
  selftest->add_option("--samples", samples, "Random samples per check");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*render) return cmd_render(common, format, name, texture);
    if (*trial) return cmd_trial(common);
    if (*sweep) return cmd_sweep(common, param, values, trials, fast);
    if (*recon) return cmd_reconstruct(common, image, intrinsics, rois, isovalue, overlay);
    if (*selftest) return cmd_selftest(common, samples);
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.code()) << "): " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
