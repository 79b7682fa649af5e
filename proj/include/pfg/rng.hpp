#ifndef PFG_RNG_HPP
#define PFG_RNG_HPP

#include <cstdint>

namespace pfg {

// Deterministic 64-bit stream (splitmix64). Small, fast to seed, and good
// enough statistically for sampling work; one instance per logical stream.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Unbiased integer in [0, bound) by rejection (Lemire's method).
  std::uint64_t bounded(std::uint64_t bound) {
    if (bound <= 1) return 0;
    while (true) {
      const std::uint64_t x = next();
      const unsigned __int128 m = static_cast<unsigned __int128>(x) * bound;
      const std::uint64_t low = static_cast<std::uint64_t>(m);
      if (low < bound) {
        const std::uint64_t threshold = (0 - bound) % bound;
        if (low < threshold) continue;
      }
      return static_cast<std::uint64_t>(m >> 64);
    }
  }

  // Uniform double in the open interval (0, 1).
  double uniform01() {
    return (static_cast<double>(next() >> 11) + 0.5) * (1.0 / 9007199254740992.0);
  }

  // Uniform double in [-1, 1).
  double symmetric() { return 2.0 * (static_cast<double>(next() >> 11) *
                                     (1.0 / 9007199254740992.0)) - 1.0; }

 private:
  std::uint64_t state_;
};

// Mixes two 64-bit values into a well-scrambled stream seed; used to derive
// independent per-sample streams from (master seed, sample index).
inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  SplitMix64 g(a ^ (b * 0xD6E8FEB86659FD93ull + 0x2545F4914F6CDD1Dull));
  g.next();
  return g.next();
}

}  // namespace pfg

#endif  // PFG_RNG_HPP
