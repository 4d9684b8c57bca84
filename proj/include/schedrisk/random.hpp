#pragma once

// Counter-based randomness keyed by event. Every random draw in a run is a
// pure function of (master seed, iteration, event id, occurrence), so two
// runs that share a seed see identical draws for every event they share,
// regardless of which other events happen or how iterations are scheduled.

#include <cstdint>
#include <string_view>

namespace schedrisk {

/// SplitMix64 finalizer (Steele, Lea & Flood). Bijective on 64 bits.
inline constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// 64-bit FNV-1a over the bytes of `s`; stable across platforms.
inline constexpr std::uint64_t stable_hash(std::string_view s) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

/// Maps the top 53 bits of `bits` onto [0, 1).
inline constexpr double to_unit_interval(std::uint64_t bits) noexcept {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

inline constexpr double event_uniform(std::uint64_t master_seed, std::uint64_t iteration,
                                      std::uint64_t event_hash, std::uint64_t occurrence) noexcept {
    std::uint64_t k = mix64(master_seed);
    k = mix64(k ^ iteration);
    k = mix64(k ^ event_hash);
    k = mix64(k ^ occurrence);
    return to_unit_interval(k);
}

inline constexpr double event_uniform(std::uint64_t master_seed, std::uint64_t iteration, std::string_view event_id,
                                      std::uint64_t occurrence) noexcept {
    return event_uniform(master_seed, iteration, stable_hash(event_id), occurrence);
}

/// Independent seed derived from `seed`, used when two runs must not share draws.
inline constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
    return mix64(mix64(seed) ^ mix64(stream + 0x5eedULL));
}

}  // namespace schedrisk
