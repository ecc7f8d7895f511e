#include "specnorm/error.hpp"
#include "specnorm/harness.hpp"
#include "specnorm/serialization.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

namespace specnorm {
namespace {

namespace fs = std::filesystem;

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("specnorm_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::size_t count_lines(const std::string& text) { return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')); }

SweepSpec small_sweep(SweptParam param, int trials) {
  SweepSpec spec = default_sweep(param, trials, 1234);
  spec.base.texture_size = 128;
  return spec;
}

TEST(RunTrial, DefaultsSucceed) {
  SimParams p;
  p.texture_size = 160;
  const TrialRecord r = run_trial(p, 7);
  EXPECT_TRUE(r.success) << r.reason;
  EXPECT_LT(r.error_deg, 5.0);
  EXPECT_GT(r.diagnostics.point_count, 12u);
}

TEST(RunTrial, FailuresAreReportedNotThrown) {
  SimParams p;
  p.texture_size = 96;
  p.isovalue = 1.0;
  const TrialRecord r = run_trial(p, 1);
  EXPECT_FALSE(r.success);
  EXPECT_EQ(r.reason, "empty isophote");
  p.isovalue = 0.1;
  p.roughness = -1;
  const TrialRecord bad = run_trial(p, 1);
  EXPECT_FALSE(bad.success);
  EXPECT_EQ(bad.reason, "invalid-argument");
}

TEST(RunTrial, ScoreModes) {
  SimParams p;
  p.texture_size = 160;
  PipelineOptions oracle;
  oracle.score = ScoreMode::OracleSign;
  const TrialRecord a = run_trial(p, 3);
  const TrialRecord b = run_trial(p, 3, oracle);
  ASSERT_TRUE(a.success && b.success);
  EXPECT_LE(a.error_deg, b.error_deg + 1e-12);
}

TEST(Sweep, ParamNamesRoundTrip) {
  for (SweptParam p : {SweptParam::Sigma, SweptParam::Theta, SweptParam::Roughness, SweptParam::Isovalue,
                       SweptParam::Epsilon}) {
    EXPECT_EQ(parse_swept_param(to_string(p)), p);
  }
  EXPECT_FALSE(parse_swept_param("gamma").has_value());
}

TEST(Sweep, DefaultGrids) {
  EXPECT_EQ(default_sweep(SweptParam::Sigma).values.size(), 5u);
  EXPECT_EQ(default_sweep(SweptParam::Theta).values.back(), 80.0);
  EXPECT_EQ(default_sweep(SweptParam::Epsilon).base.roughness, 100.0);
  EXPECT_EQ(default_sweep(SweptParam::Sigma).trials, 1000);
  EXPECT_NEAR(apply_value(SimParams{}, SweptParam::Theta, 30).slant, std::numbers::pi / 6, 1e-15);
}

TEST(Sweep, ValidationRejectsBadValues) {
  SweepSpec spec = small_sweep(SweptParam::Isovalue, 2);
  spec.values = {0.5, 1.5};
  EXPECT_THROW(spec.validate(), Error);
  spec = small_sweep(SweptParam::Sigma, 0);
  EXPECT_THROW(spec.validate(), Error);
}

TEST(Sweep, CsvShapeAndOrder) {
  const SweepResult r = run_sweep(small_sweep(SweptParam::Roughness, 3));
  ASSERT_EQ(r.records.size(), 12u);
  for (std::size_t k = 0; k < r.records.size(); ++k) {
    EXPECT_EQ(r.records[k].value_index, k / 3);
    EXPECT_EQ(r.records[k].trial, k % 3);
  }
  const std::string trials = trials_csv(r);
  EXPECT_EQ(count_lines(trials), 13u);
  EXPECT_EQ(trials.substr(0, trials.find('\n')), "swept_param,value,trial,error_deg,success,reason");
  EXPECT_EQ(count_lines(summary_csv(r)), 5u);

  const fs::path dir = scratch_dir("csv");
  const fs::path summary = emit_sweep_csv(r, dir / "sweep_roughness.csv");
  EXPECT_EQ(summary.filename(), "sweep_roughness_summary.csv");
  EXPECT_TRUE(fs::exists(dir / "sweep_roughness.csv"));
  EXPECT_TRUE(fs::exists(summary));
}

TEST(Sweep, DeterministicAcrossRunsAndThreads) {
  SweepSpec spec = small_sweep(SweptParam::Sigma, 4);
  const std::string one = trials_csv(run_sweep(spec));
  EXPECT_EQ(one, trials_csv(run_sweep(spec)));
  spec.threads = 3;
  EXPECT_EQ(one, trials_csv(run_sweep(spec)));
  spec.master_seed += 1;
  EXPECT_NE(one, trials_csv(run_sweep(spec)));
}

TEST(Sweep, PermutingValuesPermutesRows) {
  SweepSpec spec = small_sweep(SweptParam::Theta, 3);
  spec.values = {20, 50, 70};
  const SweepResult a = run_sweep(spec);
  spec.values = {70, 20, 50};
  const SweepResult b = run_sweep(spec);
  const std::size_t map[] = {1, 2, 0};
  for (std::size_t k = 0; k < 3; ++k) {
    const SummaryRow& x = a.summary[k];
    const SummaryRow& y = b.summary[map[k]];
    EXPECT_EQ(x.value, y.value);
    EXPECT_EQ(x.mean, y.mean);
    EXPECT_EQ(x.stddev, y.stddev);
    EXPECT_EQ(x.n_fail, y.n_fail);
  }
  const TrialRecord direct = run_trial(apply_value(spec.base, SweptParam::Theta, 50), trial_seed(spec.master_seed, 50, 1));
  EXPECT_EQ(direct.error_deg, a.records[4].error_deg);
}

TEST(Sweep, FailuresAreIsolatedAndCounted) {
  SweepSpec spec = small_sweep(SweptParam::Isovalue, 3);
  spec.values = {0.02, 0.4};
  spec.base.noise = 0.3;
  const SweepResult r = run_sweep(spec);
  for (const auto& row : r.summary) EXPECT_EQ(row.n_success + row.n_fail, 3u);
  // The 0.4 row is the same with or without its failing neighbour.
  spec.values = {0.4};
  EXPECT_EQ(run_sweep(spec).summary[0].mean, r.summary[1].mean);
}

TEST(Summary, MeanStdAndFailures) {
  std::vector<TrialRecord> recs(5);
  const double errs[] = {1, 2, 3, 0, 0};
  for (int k = 0; k < 5; ++k) {
    recs[k].value_index = k < 4 ? 0 : 1;
    recs[k].success = k < 3;
    recs[k].error_deg = errs[k];
  }
  const auto rows = summarize(recs, {0.1, 0.2});
  EXPECT_DOUBLE_EQ(rows[0].mean, 2.0);
  EXPECT_DOUBLE_EQ(rows[0].stddev, std::sqrt(2.0 / 3.0));
  EXPECT_EQ(rows[0].min, 1.0);
  EXPECT_EQ(rows[0].max, 3.0);
  EXPECT_EQ(rows[0].n_fail, 1u);
  EXPECT_TRUE(std::isnan(rows[1].mean));
  EXPECT_EQ(rows[1].n_fail, 1u);

  std::vector<TrialRecord> shuffled(recs.rbegin(), recs.rend());
  EXPECT_DOUBLE_EQ(summarize(shuffled, {0.1, 0.2})[0].mean, 2.0);
}

TEST(Reconstruct, ExportedImageMatchesInMemoryQuantized) {
  SimParams p;
  p.texture_size = 200;
  Rng rng(5);
  const SimulatedView view = simulate(p, rng);
  const fs::path dir = scratch_dir("export");
  write_pgm(view.image, dir / "view.pgm", PixelDepth::Bits16);
  {
    std::ofstream k(dir / "k.json");
    nlohmann::json j;
    j["intrinsics"] = view.truth.intrinsics;
    k << j;
  }
  const RegionOfInterest roi = RegionOfInterest::full(view.image);
  const auto from_disk = reconstruct_image(dir / "view.pgm", dir / "k.json", {roi}, 0.1, {}, dir / "overlay.png");
  const auto in_memory = reconstruct_image(quantize(view.image, PixelDepth::Bits16), view.truth.intrinsics, {roi}, 0.1);
  ASSERT_TRUE(from_disk[0].result && in_memory[0].result);
  EXPECT_LT(angle_between(from_disk[0].result->normals.n_plus, in_memory[0].result->normals.n_plus), 1e-9);
  EXPECT_LT(angle_between(from_disk[0].result->normals.n_minus, in_memory[0].result->normals.n_minus), 1e-9);
  EXPECT_LT(angular_error(from_disk[0].result->normals, view.truth.normal), 5.0);
  EXPECT_TRUE(fs::exists(dir / "overlay.png"));
}

TEST(Reconstruct, EmptyCornerIsNoSpecularityAndOthersSurvive) {
  SimParams p;
  p.slant = 80 * std::numbers::pi / 180;
  p.noise = 0;
  Rng rng(1);
  const SimulatedView view = simulate(p, rng);
  // Find a 24x24 corner that the warped texture never reaches.
  std::optional<RegionOfInterest> empty;
  const int m = p.texture_size;
  for (const auto& r : {RegionOfInterest{0, 0, 24, 24}, RegionOfInterest{m - 24, 0, 24, 24},
                        RegionOfInterest{0, m - 24, 24, 24}, RegionOfInterest{m - 24, m - 24, 24, 24}}) {
    bool zero = true;
    for (int y = r.y0; y < r.y1(); ++y)
      for (int x = r.x0; x < r.x1(); ++x) zero = zero && view.image.at(x, y) == 0.0;
    if (zero) empty = r;
  }
  ASSERT_TRUE(empty.has_value());
  const auto out = reconstruct_image(view.image, view.truth.intrinsics,
                                     {*empty, RegionOfInterest::full(view.image)}, 0.1);
  EXPECT_FALSE(out[0].result.has_value());
  EXPECT_EQ(out[0].failure, "no-specularity");
  EXPECT_TRUE(out[1].result.has_value());
}

TEST(Reconstruct, RoiCuttingTheIsophoteWarnsClipped) {
  SimParams p;
  p.slant = 0;
  p.noise = 0;
  Rng rng(1);
  const SimulatedView view = simulate(p, rng);
  const int half = p.texture_size / 2;
  const SpecularityResult r = reconstruct_specularity(view.image, RegionOfInterest{half - 40, half - 150, 200, 300}, 0.1,
                                                      view.truth.intrinsics);
  EXPECT_NE(std::find(r.warnings.begin(), r.warnings.end(), "clipped-isophote"), r.warnings.end());
}

TEST(Reconstruct, FrontoParallelIsophoteIsCircle) {
  SimParams p;
  p.slant = 0;
  p.noise = 0;
  Rng rng(0);
  const SimulatedView view = simulate(p, rng);
  const SpecularityResult r =
      reconstruct_specularity(view.image, RegionOfInterest::full(view.image), 0.1, view.truth.intrinsics);
  EXPECT_LT(r.fit.diagnostics.eccentricity, 0.02);
  EXPECT_TRUE(r.normals.degenerate || angular_error(r.normals, view.truth.normal) < 1.0);
}

TEST(Reconstruct, SlantedIsophoteIsEllipse) {
  SimParams p;
  p.noise = 0;
  for (double deg : {15.0, 58.0, 80.0}) {
    p.slant = deg * std::numbers::pi / 180;
    Rng rng(0);
    const SimulatedView view = simulate(p, rng);
    const SpecularityResult r =
        reconstruct_specularity(view.image, RegionOfInterest::full(view.image), 0.1, view.truth.intrinsics);
    EXPECT_LT(r.fit.diagnostics.rms_algebraic, 1e-3) << deg;
  }
}

TEST(Reconstruct, IntrinsicsFileFormats) {
  const fs::path dir = scratch_dir("intrinsics");
  std::ofstream(dir / "flat.json") << R"({"fx": 500, "fy": 510, "cx": 320, "cy": 240})";
  std::ofstream(dir / "bad.json") << R"({"fx": 500})";
  const Intrinsics k = load_intrinsics(dir / "flat.json");
  EXPECT_EQ(k.fy, 510);
  EXPECT_EQ(k.cy, 240);
  EXPECT_THROW(load_intrinsics(dir / "bad.json"), Error);
  EXPECT_THROW(load_intrinsics(dir / "missing.json"), Error);
}

TEST(Serialization, SimParamsRoundTrip) {
  SimParams p;
  p.texture_size = 300;
  p.slant = 0.5;
  p.noise = 0.025;
  p.light_offset = 200;
  p.seed = 99;
  const nlohmann::json j = p;
  const SimParams q = j.get<SimParams>();
  EXPECT_EQ(q.texture_size, 300);
  EXPECT_NEAR(q.slant, 0.5, 1e-15);
  EXPECT_EQ(q.noise, 0.025);
  EXPECT_EQ(q.light_offset, 200);
  EXPECT_EQ(q.seed, 99u);
  const SimParams partial = nlohmann::json{{"n", 80}}.get<SimParams>();
  EXPECT_EQ(partial.roughness, 80);
  EXPECT_EQ(partial.texture_size, 406);
}

TEST(ImageIo, PgmAndPngRoundTrip) {
  const fs::path dir = scratch_dir("io");
  ScalarImage img(33, 17, 255);
  Rng rng(8);
  for (double& v : img.data()) v = rng.uniform(0, 255);
  for (auto depth : {PixelDepth::Bits8, PixelDepth::Bits16}) {
    const ScalarImage q = quantize(img, depth);
    write_pgm(img, dir / "a.pgm", depth);
    write_png(img, dir / "a.png", depth);
    for (const char* name : {"a.pgm", "a.png"}) {
      const ScalarImage back = read_image(dir / name);
      ASSERT_EQ(back.width(), 33);
      ASSERT_EQ(back.height(), 17);
      const double scale = q.max_value() / back.max_value();
      for (std::size_t i = 0; i < q.data().size(); ++i) EXPECT_NEAR(back.data()[i] * scale, q.data()[i], 1e-9);
    }
  }
  EXPECT_THROW(read_image(dir / "nope.pgm"), Error);
}

}  // namespace
}  // namespace specnorm
