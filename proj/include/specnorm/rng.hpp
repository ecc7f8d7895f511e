#pragma once

#include <cstdint>
#include <random>

namespace specnorm {

/// Portable seeded generator: std::mt19937_64 (whose output sequence is fixed
/// by the standard) plus hand-written uniform and normal transforms, since
/// the std:: distributions are implementation-defined.
///
/// Stream splitting: substream(master, key, i) seeds an independent generator
/// for trial i of a sweep value identified by `key`, by hashing
/// (master, key, i) with SplitMix64.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  static Rng substream(std::uint64_t master, std::uint64_t key, std::uint64_t trial) {
    return Rng(substream_seed(master, key, trial));
  }
  static std::uint64_t substream_seed(std::uint64_t master, std::uint64_t key, std::uint64_t trial);

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Standard normal via the Marsaglia polar method.
  double normal();

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace specnorm
