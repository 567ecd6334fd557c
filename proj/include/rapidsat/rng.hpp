#pragma once

#include <cstdint>
#include <vector>

namespace rapidsat {

/// SplitMix64 pseudo-random generator (Steele, Lea & Flood). The algorithm
/// is pinned here rather than taken from <random> so that seeded runs are
/// bit-identical on every platform and standard library.
class SplitMix64 {
public:
    explicit SplitMix64(uint64_t seed) : state_(seed) {}

    uint64_t next() {
        uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1).
    double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, bound), bound >= 1. Rejection sampling keeps
    /// the draw unbiased and the sequence platform-independent.
    uint64_t next_below(uint64_t bound) {
        uint64_t threshold = -bound % bound;
        for (;;) {
            uint64_t r = next();
            if (r >= threshold) return r % bound;
        }
    }

    bool next_bool() { return next() & 1; }

private:
    uint64_t state_;
};

/// Fisher-Yates shuffle driven by SplitMix64.
template <typename T>
void shuffle(std::vector<T>& items, SplitMix64& rng) {
    for (size_t i = items.size(); i > 1; --i) {
        size_t j = static_cast<size_t>(rng.next_below(i));
        std::swap(items[i - 1], items[j]);
    }
}

} // namespace rapidsat
