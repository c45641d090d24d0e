// Counter-based pseudo-random streams for Monte Carlo sampling.
//
// Each trial gets its own statistically independent stream derived from
// (seed, trial index), so results are bit-identical for a given seed no
// matter how trials are partitioned across threads.
#pragma once

#include <cmath>
#include <cstdint>

namespace apqr::rng {

// SplitMix64 finalizer: bijective 64-bit mixer with good avalanche.
inline uint64_t mix64(uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

class stream {
  public:
    stream(uint64_t seed, uint64_t trial)
        : state_(mix64(seed ^ mix64(trial + 0x632be59bd9b4e019ULL))) {}

    uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform() < p; }

    // Number of successes in n independent Bernoulli(p) trials.
    // Uses geometric gap sampling, so the cost is O(successes + 1) rather
    // than O(n); exact in distribution for any p.
    uint64_t binomial(uint64_t n, double p) {
        if (n == 0 || p <= 0.0) return 0;
        if (p >= 1.0) return n;
        const double log_q = std::log1p(-p);
        uint64_t count = 0;
        double remaining = static_cast<double>(n);
        while (true) {
            const double u = uniform();
            // Failures before the next success: floor(log(1-u)/log(1-p)).
            const double gap = std::floor(std::log1p(-u) / log_q);
            if (!(gap + 1.0 <= remaining)) break; // next success lands past the end
            remaining -= gap + 1.0;
            ++count;
            if (remaining <= 0.0) break;
        }
        return count;
    }

  private:
    uint64_t state_;
};

} // namespace apqr::rng
