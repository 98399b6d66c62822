#ifndef FCTSIM_RNG_HPP
#define FCTSIM_RNG_HPP

#include <cstdint>
#include <random>

namespace fctsim {

// splitmix64 finaliser; used to derive independent seeds from a master
// seed so that distinct runs (and distinct p values in a sweep) consume
// unrelated streams.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    return splitmix64(master ^ splitmix64(index + 1));
}

// 53-bit uniform in [0, 1). Avoids std::uniform_real_distribution, whose
// draw sequence is implementation-defined; this keeps runs bit-identical
// across platforms.
inline double uniform01(std::mt19937_64& gen) {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

}  // namespace fctsim

#endif
