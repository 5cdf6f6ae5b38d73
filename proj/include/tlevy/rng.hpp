#ifndef TLEVY_RNG_HPP
#define TLEVY_RNG_HPP

#include <cstdint>
#include <random>

namespace tlevy {

// SplitMix64 step; used to derive independent substream seeds from a
// master seed so that replications and stochastic components never share
// generator state.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Seed for substream `stream` of the master seed.
inline std::uint64_t substream_seed(std::uint64_t master, std::uint64_t stream) {
    std::uint64_t s = master;
    std::uint64_t a = splitmix64(s);
    s = master ^ (0x9e3779b97f4a7c15ULL * (stream + 1));
    std::uint64_t b = splitmix64(s);
    return a ^ b;
}

inline std::mt19937_64 make_engine(std::uint64_t master, std::uint64_t stream) {
    return std::mt19937_64(substream_seed(master, stream));
}

}  // namespace tlevy

#endif
