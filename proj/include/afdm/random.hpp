#pragma once

#include <array>
#include <cstdint>

#include "afdm/linalg.hpp"

namespace afdm {

/// Philox4x32-10 block function (Salmon et al., "Parallel random numbers: as easy as 1, 2, 3").
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter, std::array<std::uint32_t, 2> key);

/// SplitMix64 finalizer; used to fold structured identifiers into one 64-bit substream id.
std::uint64_t mix64(std::uint64_t x);

/// Deterministic random stream addressed by (seed, substream).
///
/// The seed is the Philox key; the substream fills the upper half of the
/// counter and the lower half counts blocks. Two streams with different
/// (seed, substream) never share blocks, so every Monte Carlo trial can own
/// a stream derived from its coordinates with no coordination between workers.
/// Output is bit-identical across platforms: Gaussian variates come from an
/// explicit Box-Muller transform, not from <random> distributions.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t substream);

  std::uint32_t next_u32();
  std::uint64_t next_u64();
  /// Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform();
  double standard_normal();
  /// Circularly symmetric complex Gaussian with total variance `variance`.
  cplx complex_normal(double variance);
  std::uint8_t bit() { return static_cast<std::uint8_t>(next_u32() & 1u); }

 private:
  void refill();

  std::array<std::uint32_t, 2> key_;
  std::uint64_t substream_;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  int used_ = 4;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace afdm
