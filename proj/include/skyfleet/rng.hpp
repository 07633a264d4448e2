#pragma once

#include <cstdint>
#include <random>

namespace skyfleet {

/// Independent random streams. Each subsystem draws only from its own stream so
/// toggling one feature never shifts the numbers another feature sees.
enum class Stream : std::uint64_t {
  World = 1,
  Users = 2,
  Learning = 3,
  Noise = 4,
  Dynamics = 5,
};

/// SplitMix64 finalizer, used to derive per-stream engine seeds.
std::uint64_t splitmix64(std::uint64_t x);

/// Seed for (run seed, stream, sub-stream). Sub-streams separate agents within
/// the learning stream.
std::uint64_t stream_seed(std::uint64_t seed, Stream stream, std::uint64_t sub = 0);

/// Engine is std::mt19937_64 (output fixed by the standard). Distributions are
/// implemented here because the standard library ones are implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  Rng(std::uint64_t seed, Stream stream, std::uint64_t sub = 0)
      : engine_(stream_seed(seed, stream, sub)) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53 bits of resolution.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer on [0, n). n must be > 0.
  std::uint64_t below(std::uint64_t n);

  /// Uniform integer on the closed range [lo, hi].
  int between(int lo, int hi);

  bool bernoulli(double p) { return uniform() < p; }

  /// Standard normal via the Marsaglia polar method.
  double normal();

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace skyfleet
