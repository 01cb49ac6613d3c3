#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

#include "mglab/common.hpp"

namespace mglab {

// splitmix64 finalizer; used to derive substream seeds from a root seed.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t hash_name(std::string_view name) {
  // FNV-1a
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : name) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Seeded random stream. Substreams are derived from (root, name, index) by
// counter-based mixing, so adding a consumer never perturbs existing streams.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  static Rng substream(std::uint64_t root, std::string_view name,
                       std::uint64_t index = 0) {
    return Rng(mix64(mix64(root ^ hash_name(name)) ^ index));
  }

  std::uint64_t next_u64() { return eng_(); }

  // Uniform in [0, 1) with 53 random bits; avoids the libstdc++-specific
  // behavior of std::uniform_real_distribution for portable determinism.
  double uniform01() {
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
  }

  int uniform_int(int n) {
    // n is tiny everywhere in this codebase; modulo bias is < 2^-59.
    return static_cast<int>(eng_() % static_cast<std::uint64_t>(n));
  }

  bool bernoulli(double p) { return uniform01() < p; }

  double exponential() {
    double u;
    do {
      u = uniform01();
    } while (u <= 0.0);
    return -std::log(u);
  }

  // Inverse-CDF draw from an (approximately normalized) distribution.
  int sample(const std::vector<double>& probs) {
    double u = uniform01();
    double cum = 0.0;
    int last_positive = -1;
    for (int i = 0; i < static_cast<int>(probs.size()); ++i) {
      if (probs[i] > 0.0) last_positive = i;
      cum += probs[i];
      if (u < cum) return i;
    }
    if (last_positive < 0)
      throw std::invalid_argument("Rng::sample: distribution has no mass");
    return last_positive;
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace mglab
