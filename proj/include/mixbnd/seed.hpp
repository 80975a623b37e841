#ifndef MIXBND_SEED_HPP
#define MIXBND_SEED_HPP

#include <cstdint>

namespace mixbnd {

// splitmix64 finalizer; used to derive independent sub-seeds from one seed.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

namespace streams {
inline constexpr std::uint64_t model = 1;
inline constexpr std::uint64_t samples = 2;
inline constexpr std::uint64_t scramble = 3;
inline constexpr std::uint64_t noise = 4;
inline constexpr std::uint64_t em = 5;
}  // namespace streams

}  // namespace mixbnd

#endif
