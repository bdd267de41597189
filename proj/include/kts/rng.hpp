#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace kts {

/// Derive an independent stream seed from a base seed. All randomized
/// components (clustering init, region sampling, negative mining, ...)
/// obtain their seeds through this single scheme so a run is reproducible
/// from one global seed.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

/// Deterministic random source. All distributions are generated from the
/// raw 64-bit stream in-library so sequences are pinned by this code alone.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [lo, hi], inclusive.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::int64_t>(engine_() % span);
  }

  /// Standard normal (Box-Muller).
  double normal();

  /// Index sampled with probability proportional to weights[i].
  /// Returns weights.size() when the total weight is not positive.
  std::size_t categorical(const std::vector<double>& weights);

 private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace kts
