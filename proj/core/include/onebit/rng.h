#pragma once

#include <cstdint>
#include <random>

namespace onebit {

// Named sub-streams derived from one experiment seed. Each stream can be
// regenerated on its own without replaying the others.
enum class Stream : std::uint64_t {
  kSignal = 1,
  kMatrix = 2,
  kNoise = 3,
};

// SplitMix64 finalizer; a bijection on 64-bit words.
std::uint64_t Mix64(std::uint64_t x);

// Deterministic child seed for (seed, stream).
std::uint64_t DeriveSeed(std::uint64_t seed, Stream stream);

// The one generator used everywhere in the library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(Mix64(seed)) {}

  double Normal() { return normal_(engine_); }

  // Independent generator for a named sub-stream of this generator's seed.
  Rng Split(Stream stream) const { return Rng(DeriveSeed(seed_, stream)); }

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace onebit
