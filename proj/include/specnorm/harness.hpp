#pragma once

// End-to-end trials, Monte-Carlo parameter sweeps and reconstruction of
// calibrated images from disk.

#include "specnorm/geometry.hpp"
#include "specnorm/image.hpp"
#include "specnorm/isophote.hpp"
#include "specnorm/reconstruction.hpp"
#include "specnorm/simulator.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace specnorm {

enum class ScoreMode { Min, OracleSign };

struct PipelineOptions {
  double blur_sigma = kDefaultBlurSigma;
  ScoreMode score = ScoreMode::Min;
};

/// Everything recovered from one specularity.
struct SpecularityResult {
  double isovalue = 0.0;
  Point2 bp{0.0, 0.0};
  IsophotePolyline isophote;
  EllipseFit fit;
  Conic normalized_conic;
  NormalPair normals;
  Intrinsics intrinsics;
  std::vector<std::string> warnings;
};

/// smooth -> normalize at the BP -> marching squares -> select -> fit ->
/// K^T C K -> backproject. Throws on any stage failure.
SpecularityResult reconstruct_specularity(const ScalarImage& img, const RegionOfInterest& roi, double isovalue,
                                          const Intrinsics& k, const PipelineOptions& options = {});

struct TrialRecord {
  std::size_t value_index = 0;
  double value = 0.0;
  std::size_t trial = 0;
  bool success = false;
  double error_deg = 0.0;  // meaningful only on success
  std::string reason;      // populated only on failure
  FitDiagnostics diagnostics;
};

/// Simulate, reconstruct and score one trial. Never throws: failures are
/// reported in the record.
TrialRecord run_trial(const SimParams& params, std::uint64_t seed, const PipelineOptions& options = {});

enum class SweptParam { Sigma, Theta, Roughness, Isovalue, Epsilon };

std::string_view to_string(SweptParam p);
std::optional<SweptParam> parse_swept_param(std::string_view name);

struct SweepSpec {
  SweptParam param = SweptParam::Sigma;
  /// Values in user units: sigma as a fraction of m, theta in degrees,
  /// roughness, isovalue, epsilon in mm.
  std::vector<double> values;
  int trials = 1000;
  SimParams base;
  std::uint64_t master_seed = 0;
  PipelineOptions options;
  unsigned threads = 1;

  void validate() const;
};

/// Default grid and base parameters for a swept parameter. The epsilon
/// sweep uses n = 100.
SweepSpec default_sweep(SweptParam param, int trials = 1000, std::uint64_t master_seed = 0);

/// Base parameters with one swept value applied.
SimParams apply_value(SimParams base, SweptParam param, double value);

struct SummaryRow {
  double value = 0.0;
  double mean = 0.0;
  double stddev = 0.0;  // population standard deviation of successful trials
  double min = 0.0;
  double max = 0.0;
  std::size_t n_success = 0;
  std::size_t n_fail = 0;
};

struct SweepResult {
  SweptParam param = SweptParam::Sigma;
  std::vector<TrialRecord> records;  // ordered by (value_index, trial)
  std::vector<SummaryRow> summary;   // one per value, in grid order
};

/// Seed of trial i at one swept value (user units).
std::uint64_t trial_seed(std::uint64_t master, double value, std::size_t trial);

SweepResult run_sweep(const SweepSpec& spec);
std::vector<SummaryRow> summarize(const std::vector<TrialRecord>& records, const std::vector<double>& values);

/// Writes `path` with one row per trial and `<stem>_summary.csv` next to it.
/// Returns the summary path.
std::filesystem::path emit_sweep_csv(const SweepResult& result, const std::filesystem::path& path);
std::string trials_csv(const SweepResult& result);
std::string summary_csv(const SweepResult& result);

struct RoiOutcome {
  RegionOfInterest roi;
  std::optional<SpecularityResult> result;
  std::string failure;  // set when result is empty
};

/// Intrinsics from a JSON file holding {fx, fy, cx, cy}, either at the top
/// level or under "intrinsics" (as in the ground-truth sidecar).
Intrinsics load_intrinsics(const std::filesystem::path& path);

/// Reconstructs every ROI independently; one failing ROI does not affect
/// the others. Optionally writes an annotated RGB PNG.
std::vector<RoiOutcome> reconstruct_image(const ScalarImage& img, const Intrinsics& k,
                                          const std::vector<RegionOfInterest>& rois, double isovalue,
                                          const PipelineOptions& options = {});
std::vector<RoiOutcome> reconstruct_image(const std::filesystem::path& image_path,
                                          const std::filesystem::path& intrinsics_path,
                                          const std::vector<RegionOfInterest>& rois, double isovalue,
                                          const PipelineOptions& options = {},
                                          const std::optional<std::filesystem::path>& overlay_path = std::nullopt);

/// Grey background with fitted ellipses and both normal directions drawn.
RgbImage render_overlay(const ScalarImage& img, const std::vector<RoiOutcome>& outcomes);

}  // namespace specnorm
