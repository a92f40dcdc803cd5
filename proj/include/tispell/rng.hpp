#pragma once

// Seeded, splittable PRNG used everywhere randomness appears.
// SplitMix64 core: 64-bit state, platform-independent sequence for a given
// seed, so datasets and training runs reproduce bit-for-bit anywhere.
// child(i) derives an independent stream per work item (corpus line, epoch)
// through the same avalanche mix, which keeps streams collision-resistant
// within a corpus.

#include <cassert>
#include <cmath>
#include <cstdint>
#include <utility>

namespace tispell {

class Rng {
public:
    explicit Rng(uint64_t seed) : state_(seed) {}

    // SplitMix64 finalizer; bijective on 64-bit values.
    static constexpr uint64_t mix(uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        return mix(state_);
    }

    // Derived stream for work item `index`; does not disturb this stream.
    Rng child(uint64_t index) const {
        return Rng(mix(mix(state_ ^ 0xA02B9FE5E0A1B2C3ULL) + index));
    }

    uint64_t seed_state() const { return state_; }

    // Unbiased draw from [0, n). Rejection on the top of the range; the
    // loop practically never iterates for the small n used here.
    uint64_t below(uint64_t n) {
        assert(n > 0);
        const uint64_t limit = ~uint64_t{0} - (~uint64_t{0} % n);
        uint64_t v = next_u64();
        while (v >= limit) v = next_u64();
        return v % n;
    }

    // Inclusive range draw.
    int64_t range(int64_t lo, int64_t hi) {
        assert(lo <= hi);
        return lo + static_cast<int64_t>(below(static_cast<uint64_t>(hi - lo + 1)));
    }

    size_t index(size_t n) { return static_cast<size_t>(below(n)); }

    bool chance(double p) {
        if (p >= 1.0) return true;
        if (p <= 0.0) return false;
        return uniform() < p;
    }

    // Uniform double in [0, 1) with 53 bits of randomness.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Standard normal via Box-Muller (both values used in turn).
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        double u2 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(theta);
        have_spare_ = true;
        return r * std::cos(theta);
    }

    // Two distinct indices drawn from [0, n), order as drawn.
    std::pair<size_t, size_t> two_distinct(size_t n) {
        assert(n >= 2);
        const size_t a = index(n);
        size_t b = index(n);
        while (b == a) b = index(n);
        return {a, b};
    }

private:
    uint64_t state_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace tispell
