// Counter-based randomness. Every random decision is a pure function of
// (seed, shot index, draw index), which makes results independent of batch
// splitting and thread count.
#pragma once

#include <cstdint>

namespace telesurg {

inline uint64_t splitmix64(uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

/// One 64-bit uniform draw addressed by (seed, shot, draw).
inline uint64_t counter_draw(uint64_t seed, uint64_t shot, uint64_t draw) {
    uint64_t a = splitmix64(seed ^ (shot * 0xD1342543DE82EF95ull));
    return splitmix64(a ^ (draw * 0xC2B2AE3D27D4EB4Full));
}

/// Unbiased selection of one of `n` options from a 64-bit draw.
inline uint32_t draw_choice(uint64_t r, uint32_t n) {
    return uint32_t((static_cast<unsigned __int128>(r) * n) >> 64);
}

/// Threshold such that (draw < threshold) fires with probability p.
/// p = 1 maps to all-ones, so the comparison must be `<=` for that case;
/// callers use fire = r < thr, which is exact for p < 1 - 2^-64.
inline uint64_t probability_threshold(double p) {
    if (p <= 0.0) return 0;
    if (p >= 1.0) return ~uint64_t(0);
    long double t = static_cast<long double>(p) * 18446744073709551616.0L;
    if (t >= 18446744073709551615.0L) return ~uint64_t(0);
    return static_cast<uint64_t>(t);
}

/// Chaining hash for deriving per-point seeds from sweep coordinates.
struct SeedHasher {
    uint64_t state = 0x243F6A8885A308D3ull;
    void mix(uint64_t v) { state = splitmix64(state ^ v); }
    uint64_t value() const { return state; }
};

}  // namespace telesurg
