#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace hdgl {

// SplitMix64 finalizer. Used for seed derivation and tie-break streams so
// that every randomized quantity in the pipeline is a pure function of the
// 64-bit seeds it was keyed with.
constexpr std::uint64_t split_mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Folds an ordered list of parts (seed, tag, indices...) into one seed.
// Order-sensitive: derive_seed({a,b}) != derive_seed({b,a}) in general.
constexpr std::uint64_t derive_seed(std::initializer_list<std::uint64_t> parts) {
  std::uint64_t h = 0x8f1bbcdcbfa53e0bULL;
  for (std::uint64_t p : parts) h = split_mix64(h ^ split_mix64(p));
  return h;
}

// Stream tags keeping independent random streams from colliding when they
// share a base seed.
namespace seed_tag {
inline constexpr std::uint64_t kProjectionRow = 0x01;
inline constexpr std::uint64_t kNeighborSample = 0x02;
inline constexpr std::uint64_t kBundleTie = 0x03;
inline constexpr std::uint64_t kClassTie = 0x04;
inline constexpr std::uint64_t kEdgeMemoryTie = 0x05;
inline constexpr std::uint64_t kNegativeSample = 0x06;
inline constexpr std::uint64_t kRepeat = 0x07;
}  // namespace seed_tag

// Deterministic scalar draws on top of mt19937_64. The standard pins the
// engine's output but not the distribution adaptors, so the mappings are
// spelled out here to keep results identical across toolchains.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on (0, 1].
  double next_unit() {
    return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
  }

  // Uniform on [lo, hi).
  double next_uniform(double lo, double hi) {
    double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    return lo + u * (hi - lo);
  }

  // Standard normal via Box-Muller; consumes two engine draws per pair.
  double next_normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = next_unit();
    double u2 = next_unit();
    double radius = std::sqrt(-2.0 * std::log(u1));
    double angle = 2.0 * 3.141592653589793238462643383279502884 * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
  }

  // Uniform integer in [0, n).
  std::uint64_t next_below(std::uint64_t n) {
    // Rejection sampling stripping modulo bias.
    std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n + 1) % n;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x > limit);
    return x % n;
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace hdgl
