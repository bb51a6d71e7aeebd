#pragma once

#include <cstdint>
#include <random>

namespace thermosdp {

/// Seeded random stream. Substreams derived from (seed, stream) are
/// statistically independent and reproducible on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  /// Independent child stream; does not advance this generator.
  Rng substream(std::uint64_t index) const;

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  /// Fair coin.
  bool bit() { return (engine_() >> 63) != 0; }
  std::uint64_t next() { return engine_(); }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::mt19937_64 engine_;
};

}  // namespace thermosdp
