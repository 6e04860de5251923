#pragma once

#include <array>
#include <cstdint>

namespace lowrr {

/// Deterministic generator: xoshiro256++ seeded through splitmix64.
/// Substreams get an initial splitmix state of seed + stream * 2^64/phi,
/// so distinct (seed, stream) pairs start from unrelated states. Normal
/// variates use the Marsaglia polar method with the spare value cached.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t next_u64();

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();

  /// Standard normal draw.
  double gaussian();

 private:
  std::array<std::uint64_t, 4> state_{};
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace lowrr
