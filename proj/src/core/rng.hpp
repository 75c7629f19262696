#pragma once

#include <cstdint>

namespace commsim {

// Counter-friendly splitmix64 generator. Unlike std::mt19937 +
// std::bernoulli_distribution, the draw sequence is fully pinned by this
// header, so sampled-mode results are reproducible across platforms and
// standard libraries.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Uniform double in [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

 private:
  std::uint64_t state_;
};

// Derives an independent stream for (seed, stream); used to give every
// decomposition term its own reproducible shot sequence.
inline std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t stream) {
  SplitMix64 mixer(seed ^ (0x632be59bd9b4e019ull + stream * 0x9e3779b97f4a7c15ull));
  return mixer.next();
}

}  // namespace commsim
