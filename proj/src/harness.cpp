#include "specnorm/harness.hpp"

#include "specnorm/error.hpp"
#include "specnorm/serialization.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

namespace specnorm {

SpecularityResult reconstruct_specularity(const ScalarImage& img, const RegionOfInterest& roi, double isovalue,
                                          const Intrinsics& k, const PipelineOptions& options) {
  validate_roi(roi, img);
  if (!(isovalue > 0.0)) throw Error(ErrorCode::OutOfDomain, "isovalue must be positive");
  const ScalarImage smooth = gaussian_smooth(img, options.blur_sigma);
  const NormalizedImage norm = normalize_bp(smooth, roi);

  SpecularityResult out;
  out.isovalue = isovalue;
  out.bp = norm.bp;
  out.intrinsics = k;
  if (norm.bp_on_boundary) out.warnings.emplace_back("bp-on-boundary");
  if (norm.saturated) out.warnings.emplace_back("saturated");

  if (isovalue >= 1.0) throw Error(ErrorCode::EmptyIsophote, "isovalue is at or above the normalized peak");
  ExtractionResult extracted = extract_isophote(norm.image, roi, isovalue);
  if (extracted.polylines.empty()) throw Error(ErrorCode::NoSpecularity, "no usable isophote in the region");
  const IsophoteSelection selected = select_primary_isophote(extracted.polylines, norm.bp);
  if (selected.clipped) out.warnings.emplace_back("clipped-isophote");
  if (!selected.contains_bp) out.warnings.emplace_back("isophote-misses-bp");
  out.isophote = selected.polyline;

  out.fit = fit_ellipse(out.isophote.points);
  out.normalized_conic = normalize_to_camera(out.fit.conic, k);
  out.normals = backproject_circle(out.normalized_conic);
  return out;
}

TrialRecord run_trial(const SimParams& params, std::uint64_t seed, const PipelineOptions& options) {
  TrialRecord record;
  try {
    Rng rng(seed);
    const SimulatedView view = simulate(params, rng);
    const SpecularityResult result = reconstruct_specularity(view.image, RegionOfInterest::full(view.image),
                                                             params.isovalue, view.truth.intrinsics, options);
    record.diagnostics = result.fit.diagnostics;
    record.error_deg = options.score == ScoreMode::Min ? angular_error(result.normals, view.truth.normal)
                                                       : oracle_sign_error(result.normals, view.truth.normal);
    record.success = true;
  } catch (const Error& e) {
    record.success = false;
    record.reason = std::string(to_string(e.code()));
  } catch (const std::exception& e) {
    record.success = false;
    record.reason = std::string("internal: ") + e.what();
  }
  return record;
}

std::string_view to_string(SweptParam p) {
  switch (p) {
    case SweptParam::Sigma: return "sigma";
    case SweptParam::Theta: return "theta";
    case SweptParam::Roughness: return "roughness";
    case SweptParam::Isovalue: return "isovalue";
    case SweptParam::Epsilon: return "epsilon";
  }
  return "unknown";
}

std::optional<SweptParam> parse_swept_param(std::string_view name) {
  for (SweptParam p : {SweptParam::Sigma, SweptParam::Theta, SweptParam::Roughness, SweptParam::Isovalue,
                       SweptParam::Epsilon}) {
    if (to_string(p) == name) return p;
  }
  return std::nullopt;
}

SimParams apply_value(SimParams base, SweptParam param, double value) {
  switch (param) {
    case SweptParam::Sigma: base.noise = value; break;
    case SweptParam::Theta: base.slant = value * std::numbers::pi / 180.0; break;
    case SweptParam::Roughness: base.roughness = value; break;
    case SweptParam::Isovalue: base.isovalue = value; break;
    case SweptParam::Epsilon: base.light_offset = value; break;
  }
  return base;
}

void SweepSpec::validate() const {
  if (trials < 1) throw Error(ErrorCode::InvalidArgument, "trials must be at least 1");
  if (values.empty()) throw Error(ErrorCode::InvalidArgument, "sweep needs at least one value");
  for (double v : values) apply_value(base, param, v).validate();
}

SweepSpec default_sweep(SweptParam param, int trials, std::uint64_t master_seed) {
  SweepSpec spec;
  spec.param = param;
  spec.trials = trials;
  spec.master_seed = master_seed;
  switch (param) {
    case SweptParam::Sigma: spec.values = {0.0, 0.025, 0.05, 0.075, 0.10}; break;
    case SweptParam::Theta: spec.values = {0.0, 15.0, 30.0, 45.0, 58.0, 70.0, 80.0}; break;
    case SweptParam::Roughness: spec.values = {30.0, 60.0, 90.0, 120.0}; break;
    case SweptParam::Isovalue: spec.values = {0.02, 0.1, 0.2, 0.4, 0.6, 0.8}; break;
    case SweptParam::Epsilon:
      spec.values = {0.0, 100.0, 200.0, 400.0, 800.0};
      spec.base.roughness = 100.0;
      break;
  }
  return spec;
}

std::vector<SummaryRow> summarize(const std::vector<TrialRecord>& records, const std::vector<double>& values) {
  std::vector<SummaryRow> rows(values.size());
  for (std::size_t j = 0; j < values.size(); ++j) {
    SummaryRow& row = rows[j];
    row.value = values[j];
    double sum = 0.0;
    row.min = std::numeric_limits<double>::infinity();
    row.max = -std::numeric_limits<double>::infinity();
    for (const auto& r : records) {
      if (r.value_index != j) continue;
      if (!r.success) {
        ++row.n_fail;
        continue;
      }
      ++row.n_success;
      sum += r.error_deg;
      row.min = std::min(row.min, r.error_deg);
      row.max = std::max(row.max, r.error_deg);
    }
    if (row.n_success == 0) {
      row.mean = row.stddev = row.min = row.max = std::numeric_limits<double>::quiet_NaN();
      continue;
    }
    row.mean = sum / static_cast<double>(row.n_success);
    double sq = 0.0;
    for (const auto& r : records) {
      if (r.value_index == j && r.success) sq += (r.error_deg - row.mean) * (r.error_deg - row.mean);
    }
    row.stddev = std::sqrt(sq / static_cast<double>(row.n_success));
  }
  return rows;
}

std::uint64_t trial_seed(std::uint64_t master, double value, std::size_t trial) {
  // Keyed on the value itself, not its position, so reordering the grid
  // only reorders the rows.
  return Rng::substream_seed(master, std::bit_cast<std::uint64_t>(value + 0.0), trial);
}

SweepResult run_sweep(const SweepSpec& spec) {
  spec.validate();
  const std::size_t trials = static_cast<std::size_t>(spec.trials);
  const std::size_t total = spec.values.size() * trials;
  SweepResult result;
  result.param = spec.param;
  result.records.resize(total);

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < total; k = next++) {
      const std::size_t j = k / trials;
      const std::size_t i = k % trials;
      const SimParams params = apply_value(spec.base, spec.param, spec.values[j]);
      TrialRecord rec = run_trial(params, trial_seed(spec.master_seed, spec.values[j], i), spec.options);
      rec.value_index = j;
      rec.value = spec.values[j];
      rec.trial = i;
      result.records[k] = std::move(rec);
    }
  };
  const unsigned workers = std::max(1u, spec.threads);
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  result.summary = summarize(result.records, spec.values);
  return result;
}

namespace {

std::string fmt9(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::Io, "write failed: " + path.string());
}

}  // namespace

std::string trials_csv(const SweepResult& result) {
  std::ostringstream out;
  out << "swept_param,value,trial,error_deg,success,reason\n";
  for (const auto& r : result.records) {
    out << to_string(result.param) << ',' << fmt9(r.value) << ',' << r.trial << ','
        << (r.success ? fmt9(r.error_deg) : std::string()) << ',' << (r.success ? 1 : 0) << ','
        << csv_field(r.reason) << '\n';
  }
  return out.str();
}

std::string summary_csv(const SweepResult& result) {
  std::ostringstream out;
  out << "value,mean,std,min,max,n_fail\n";
  for (const auto& row : result.summary) {
    out << fmt9(row.value) << ',' << fmt9(row.mean) << ',' << fmt9(row.stddev) << ',' << fmt9(row.min) << ','
        << fmt9(row.max) << ',' << row.n_fail << '\n';
  }
  return out.str();
}

std::filesystem::path emit_sweep_csv(const SweepResult& result, const std::filesystem::path& path) {
  if (result.records.empty()) throw Error(ErrorCode::InvalidArgument, "no records to write");
  write_text(path, trials_csv(result));
  std::filesystem::path summary = path;
  summary.replace_filename(path.stem().string() + "_summary" + path.extension().string());
  write_text(summary, summary_csv(result));
  return summary;
}

Intrinsics load_intrinsics(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  nlohmann::json j;
  try {
    in >> j;
    if (j.contains("intrinsics")) return j.at("intrinsics").get<Intrinsics>();
    return j.get<Intrinsics>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Io, "bad intrinsics file " + path.string() + ": " + e.what());
  }
}

std::vector<RoiOutcome> reconstruct_image(const ScalarImage& img, const Intrinsics& k,
                                          const std::vector<RegionOfInterest>& rois, double isovalue,
                                          const PipelineOptions& options) {
  std::vector<RoiOutcome> outcomes;
  for (const auto& roi : rois) {
    RoiOutcome o{roi, std::nullopt, {}};
    try {
      o.result = reconstruct_specularity(img, roi, isovalue, k, options);
    } catch (const Error& e) {
      o.failure = std::string(to_string(e.code()));
    }
    outcomes.push_back(std::move(o));
  }
  return outcomes;
}

std::vector<RoiOutcome> reconstruct_image(const std::filesystem::path& image_path,
                                          const std::filesystem::path& intrinsics_path,
                                          const std::vector<RegionOfInterest>& rois, double isovalue,
                                          const PipelineOptions& options,
                                          const std::optional<std::filesystem::path>& overlay_path) {
  const ScalarImage img = read_image(image_path);
  const Intrinsics k = load_intrinsics(intrinsics_path);
  auto outcomes = reconstruct_image(img, k, rois, isovalue, options);
  if (overlay_path) write_png(render_overlay(img, outcomes), *overlay_path);
  return outcomes;
}

}  // namespace specnorm
