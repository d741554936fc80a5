#include "onebit/rng.h"

namespace onebit {

std::uint64_t Mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t DeriveSeed(std::uint64_t seed, Stream stream) {
  return Mix64(Mix64(seed) ^ (static_cast<std::uint64_t>(stream) *
                              0xd6e8feb86659fd93ULL));
}

}  // namespace onebit
