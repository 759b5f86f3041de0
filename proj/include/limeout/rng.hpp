#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace limeout {

// Deterministic random source.  All draws go through hand-rolled
// transformations of the raw mt19937_64 stream because the standard
// library's distribution objects are implementation-defined and would
// break bit-for-bit reproducibility across toolchains.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform double in [0, 1) with 53 random bits.
  double next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1p-53;
  }

  // Uniform integer in [0, n).  Rejection sampling keeps it unbiased.
  std::uint64_t below(std::uint64_t n) {
    if (n <= 1) return 0;
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    std::uint64_t x = next_u64();
    while (x >= limit) x = next_u64();
    return x % n;
  }

  // Uniform integer in [lo, hi] inclusive.
  long long uniform_int(long long lo, long long hi) {
    return lo + static_cast<long long>(
                    below(static_cast<std::uint64_t>(hi - lo) + 1));
  }

  double uniform_real(double lo, double hi) {
    return lo + (hi - lo) * next_unit();
  }

  // Standard Box-Muller; pairs are cached so consecutive calls consume the
  // underlying stream in a fixed pattern.
  double normal(double mean = 0.0, double stddev = 1.0) {
    if (have_spare_) {
      have_spare_ = false;
      return mean + stddev * spare_;
    }
    double u1 = 1.0 - next_unit();  // (0, 1], keeps log finite
    double u2 = next_unit();
    double r = std::sqrt(-2.0 * std::log(u1));
    double theta = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return mean + stddev * r * std::cos(theta);
  }

 private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// Splits one base seed into independent streams.  splitmix64-style mixing:
// closely related inputs land far apart in the output space, so per-member
// and per-stage seeds never collide in practice.
inline std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream,
                                 std::uint64_t index = 0) {
  std::uint64_t h = mix_seed(base ^ 0x5851f42d4c957f2dULL);
  h = mix_seed(h ^ mix_seed(stream));
  h = mix_seed(h ^ mix_seed(index));
  return h;
}

// Named stages so derived seeds are stable across the codebase.
namespace seed_stream {
inline constexpr std::uint64_t kSplit = 1;
inline constexpr std::uint64_t kCandidates = 2;
inline constexpr std::uint64_t kExplainOriginal = 3;
inline constexpr std::uint64_t kExplainEnsemble = 4;
inline constexpr std::uint64_t kTrain = 5;
inline constexpr std::uint64_t kPoolMember = 6;
inline constexpr std::uint64_t kForestMember = 7;
inline constexpr std::uint64_t kInstance = 8;
}  // namespace seed_stream

}  // namespace limeout
