#pragma once

#include <cstdint>
#include <random>

namespace adaptsa {

/// Stream tags keep the different consumers of one base seed apart.
enum class Stream : std::uint64_t {
  kReplication = 0,
  kInstance = 1,
  kPilot = 2,
  kReference = 3,
};

/// Seeded generator with library-independent variate construction.
///
/// The engine is std::mt19937_64 seeded through std::seed_seq from the
/// (seed, stream) pair. Uniforms take the top 53 bits of one engine output.
/// Normals use the Marsaglia polar method with the second variate cached, so
/// a given seed yields identical streams under any standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);
  Rng(std::uint64_t seed, Stream stream)
      : Rng(seed, static_cast<std::uint64_t>(stream)) {}

  /// Uniform on [0, 1).
  double uniform();
  /// Uniform on (0, 1); never returns 0.
  double uniform_open();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal();
  /// Uniform integer on [0, n).
  std::uint64_t index(std::uint64_t n);

  std::uint64_t seed() const noexcept { return seed_; }

 private:
  std::mt19937_64 engine_;
  std::uint64_t seed_;
  double cached_normal_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace adaptsa
