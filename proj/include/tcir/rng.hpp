#pragma once

#include <cstdint>
#include <random>

namespace tcir {

// SplitMix64 finalizer; good avalanche, cheap.
inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Deterministic substream derivation: the engine for (master, a, b, c) depends
// only on those values, never on how many other streams were derived before.
// Replicate r of experiment stage k uses substream(seed, k, r).
inline std::mt19937_64 substream(std::uint64_t master, std::uint64_t a = 0,
                                 std::uint64_t b = 0, std::uint64_t c = 0) {
    std::uint64_t s = mix64(master + 0x9e3779b97f4a7c15ULL);
    s = mix64(s ^ (a + 0x9e3779b97f4a7c15ULL));
    s = mix64(s ^ (b + 0x6a09e667f3bcc909ULL));
    s = mix64(s ^ (c + 0xbb67ae8584caa73bULL));
    return std::mt19937_64(s);
}

}  // namespace tcir
