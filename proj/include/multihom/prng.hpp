#pragma once

#include <cstdint>

namespace multihom {

// splitmix64: small, fast, and fully deterministic across platforms.
// Used for the seeded draws in the toral-family search and the
// invariance-suite coordinate changes. Never used for anything that
// affects exactness, only for choices among valid alternatives.
class Prng {
  public:
    explicit Prng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // Uniform in [lo, hi], inclusive.
    long range(long lo, long hi) {
        return lo + static_cast<long>(next() % static_cast<std::uint64_t>(hi - lo + 1));
    }

  private:
    std::uint64_t state_;
};

}  // namespace multihom
