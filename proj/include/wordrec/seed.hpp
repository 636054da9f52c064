#ifndef WORDREC_SEED_HPP
#define WORDREC_SEED_HPP

#include <cstdint>

namespace wordrec {

// splitmix64 finalizer; decorrelates seeds derived from small consecutive
// integers before they reach an engine.
inline std::uint64_t scramble_seed(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Deterministic seed derivation: combine a base seed with a salt. Chain
// calls to mix in more than one salt.
inline std::uint64_t combine_seed(std::uint64_t seed, std::uint64_t salt) {
    return scramble_seed(seed ^ (salt + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2)));
}

}  // namespace wordrec

#endif
