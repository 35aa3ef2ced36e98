#pragma once

#include <cstdint>
#include <random>

#include "rknot/core/vec.hpp"

namespace rknot {

// SplitMix64 finalizer. Used for all seed derivation so that child streams
// depend only on (parent seed, index).
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Derive the seed of child stream `index` from `seed`.
constexpr std::uint64_t split_seed(std::uint64_t seed, std::uint64_t index) {
  return mix64(mix64(seed) ^ mix64(index + 0x632be59bd9b4e019ULL));
}

// A seeded normal/uniform stream. One engine, one distribution object, so the
// sequence is a pure function of the seed.
class Stream {
 public:
  explicit Stream(std::uint64_t seed) : engine_(seed) {}

  double normal() { return normal_(engine_); }
  double uniform() { return uniform_(engine_); }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform_(engine_); }
  std::uint64_t bits() { return engine_(); }

  Vec3 normal3() {
    Vec3 v;
    v.x = normal();
    v.y = normal();
    v.z = normal();
    return v;
  }

  // Uniform direction on the unit sphere.
  Vec3 direction() {
    for (;;) {
      Vec3 v = normal3();
      double n = norm(v);
      if (n > 1e-12) return v * (1.0 / n);
    }
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

}  // namespace rknot
