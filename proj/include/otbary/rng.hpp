#pragma once

#include <cstdint>

namespace otbary {

// SplitMix64 (Steele, Lea & Flood 2014; Vigna's reference constants).
// The state walks a Weyl sequence, so output k is a pure function of
// (seed, k): the generator is counter-based and gives identical streams
// on every platform. Distribution transforms (uniform doubles via the
// top 53 bits, normals via Box-Muller) are spelled out here instead of
// relying on <random>, whose distributions are implementation-defined.
class SplitMix64 {
public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  // Output for counter k under the given seed.
  static std::uint64_t at(std::uint64_t seed, std::uint64_t counter);

  std::uint64_t next_u64();

  // Uniform on [0, 1), 53-bit resolution.
  double next_double();

  // Uniform on (0, 1]; safe as a log() argument.
  double next_double_open();

  // Standard normal via Box-Muller; generated in pairs, spare cached.
  double next_normal();

  // Uniform integer in [0, bound) by rejection; bound >= 1.
  std::uint64_t next_below(std::uint64_t bound);

private:
  std::uint64_t state_;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

// Independent substream seed for task `stream` under `master`. Used to
// hand every repetition / worker its own generator while keeping one
// user-facing seed.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

}  // namespace otbary
