#ifndef FIDKIT_RNG_HPP
#define FIDKIT_RNG_HPP

#include <cstdint>

namespace fidkit {

// SplitMix64 finalizer; used to derive independent stream seeds so parallel
// and serial generation agree.
inline std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace fidkit

#endif
