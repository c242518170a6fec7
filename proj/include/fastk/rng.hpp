#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace fastk {

// Deterministic random source. All draws are implemented on top of the raw
// 64-bit stream so that results are bit-identical across platforms and
// standard-library versions (std::*_distribution is implementation-defined).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // Derives an independent stream from (seed, stream) via splitmix64 mixing.
  static Rng derive(std::uint64_t seed, std::uint64_t stream) {
    return Rng(mix(seed + 0x9e3779b97f4a7c15ULL * (stream + 1)));
  }

  std::uint64_t next_u64() { return gen_(); }

  // Uniform in [0, 1) with 53 bits of precision.
  double uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform integer in [lo, hi], inclusive. Rejection sampling, no modulo bias.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    const std::uint64_t range = static_cast<std::uint64_t>(hi - lo) + 1;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % range;
    std::uint64_t x;
    do {
      x = next_u64();
    } while (x >= limit);
    return lo + static_cast<std::int64_t>(x % range);
  }

  double exponential(double rate) {
    // -log(1 - U) with U in [0, 1); never takes log(0).
    return -std::log1p(-uniform01()) / rate;
  }

  // Standard normal via Box-Muller. No cached spare, so the draw count per
  // call is fixed and replay is straightforward.
  double gaussian() {
    double u1 = 1.0 - uniform01();  // (0, 1]
    double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ULL;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return z;
  }

  std::mt19937_64 gen_;
};

}  // namespace fastk
