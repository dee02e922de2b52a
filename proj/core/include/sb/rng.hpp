#pragma once

#include <cstdint>

namespace sb {

// Deterministic splittable generator (splitmix64 core).  Every stochastic
// routine takes an explicit seed and derives independent streams per work
// item, so results are reproducible bit-for-bit regardless of thread count.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed ^ 0x9e3779b97f4a7c15ULL) {
        // avoid the all-zero fixed point and decorrelate small seeds
        next_u64();
        next_u64();
    }

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform in [0,1)
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // uniform in [lo,hi)
    double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    // fair coin as +1 / -1
    int next_sign() { return (next_u64() & 1) ? +1 : -1; }

    std::uint32_t next_below(std::uint32_t n) {
        return static_cast<std::uint32_t>(next_u64() % n);
    }

    // independent child stream for work item `index`
    static Rng child(std::uint64_t seed, std::uint64_t index) {
        Rng mix(seed);
        std::uint64_t s = mix.next_u64() ^ (0x9e3779b97f4a7c15ULL * (index + 1));
        return Rng(s);
    }

  private:
    std::uint64_t state_;
};

} // namespace sb
