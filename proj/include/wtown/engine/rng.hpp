#pragma once

#include <cstdint>

namespace wtown {

// SplitMix64. The full state is one 64-bit word, which is stored in game
// records so any implementation can reproduce a supply stream:
//
//   state += 0x9E3779B97F4A7C15
//   z = state
//   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//   return z ^ (z >> 31)
//
// Bounded draws use rejection on the low residue class: with
// range = hi - lo + 1 and threshold = 2^64 mod range, draws below the
// threshold are discarded and lo + (x mod range) is returned.
class SplitMix64 {
public:
    explicit constexpr SplitMix64(std::uint64_t seed) : state_(seed) {}

    constexpr std::uint64_t next() {
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform integer in [lo, hi]. Requires lo <= hi.
    constexpr std::int64_t uniform(std::int64_t lo, std::int64_t hi) {
        const std::uint64_t range = static_cast<std::uint64_t>(hi - lo) + 1;
        if (range == 0) {  // full 64-bit span
            return static_cast<std::int64_t>(next());
        }
        const std::uint64_t threshold = (0 - range) % range;
        std::uint64_t x = next();
        while (x < threshold) {
            x = next();
        }
        return lo + static_cast<std::int64_t>(x % range);
    }

    // Uniform double in [0, 1) from the top 53 bits.
    constexpr double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    constexpr std::uint64_t state() const { return state_; }

private:
    std::uint64_t state_;
};

// Order-sensitive mix of two words, used to derive independent sub-seeds.
constexpr std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
    SplitMix64 g(a ^ (b * 0xD1B54A32D192ED03ULL));
    g.next();
    return g.next();
}

}  // namespace wtown
