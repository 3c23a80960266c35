#pragma once

#include <cmath>
#include <cstdint>

namespace gcwsnet::rng {

// Stream tags keep the random numbers used by different subsystems disjoint
// even when they share one master seed.
enum StreamTag : std::uint64_t {
    kGcws = 1,
    kSketch = 2,
    kNrffProjection = 3,
    kNrffPhase = 4,
    kWeightInit = 5,
    kShuffle = 6,
    kPairMix = 7,
    kSynthetic = 8,
};

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

// splitmix64 finalizer, a full-avalanche 64-bit mix.
inline std::uint64_t mix64(std::uint64_t x) {
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ULL;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebULL;
    x ^= x >> 31;
    return x;
}

// Counter-based generator keyed by (seed, tag, a, b). The same key always
// produces the same sequence, so positional randomness (per hash index, per
// coordinate) never needs to be stored.
class Stream {
public:
    Stream(std::uint64_t seed, std::uint64_t tag, std::uint64_t a, std::uint64_t b) {
        std::uint64_t h = mix64(seed + kGolden);
        h = mix64(h ^ (tag * kGolden));
        h = mix64(h ^ (a + kGolden));
        h = mix64(h ^ (b + 0xd1342543de82ef95ULL));
        state_ = h;
    }

    std::uint64_t next_u64() {
        state_ += kGolden;
        return mix64(state_);
    }

    // Uniform on the open interval (0, 1); never returns 0, safe under log().
    double next_unit() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1p-53;
    }

    // Gamma(2,1) as the sum of two unit exponentials.
    double next_gamma2() {
        return -std::log(next_unit()) - std::log(next_unit());
    }

    // Standard normal via Box-Muller.
    double next_normal() {
        const double u1 = next_unit();
        const double u2 = next_unit();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }

private:
    std::uint64_t state_;
};

} // namespace gcwsnet::rng
