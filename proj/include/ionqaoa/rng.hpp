#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <initializer_list>

#include "ionqaoa/constants.hpp"

namespace ionqaoa::rng {

// splitmix64 (Vigna), used for seeding and for tag-based stream derivation.
struct SplitMix64 {
    std::uint64_t state;
    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }
};

inline std::uint64_t mix64(std::uint64_t x) {
    SplitMix64 sm{x};
    return sm.next();
}

// Derives an independent substream seed by folding integer tags through the
// splitmix64 finalizer. Used everywhere a (instance, cycle, run, ...) job
// needs its own reproducible stream regardless of scheduling order.
inline std::uint64_t derive_stream(std::uint64_t seed, std::initializer_list<std::uint64_t> tags) {
    std::uint64_t h = mix64(seed);
    for (std::uint64_t t : tags) h = mix64(h ^ mix64(t + 0x9E3779B97F4A7C15ULL));
    return h;
}

// xoshiro256** (Blackman & Vigna), state seeded from splitmix64. Pinned as
// an algorithm (not std::mt19937) so instances regenerate identically on
// any platform or language.
class Xoshiro256ss {
  public:
    explicit Xoshiro256ss(std::uint64_t seed) {
        SplitMix64 sm{seed};
        for (auto& w : s_) w = sm.next();
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // [0, 1): top 53 bits of one output word
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // (0, 1]: shifted so log() is always finite
    double uniform_pos() { return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Box-Muller, cosine branch only; consumes exactly two words per draw so
    // stream positions stay aligned across implementations.
    double normal() {
        const double u1 = uniform_pos();
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(constants::two_pi * u2);
    }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    std::array<std::uint64_t, 4> s_;
};

}  // namespace ionqaoa::rng
