#ifndef TSLAM_RNG_HPP
#define TSLAM_RNG_HPP

#include <cstdint>
#include <random>

namespace tslam {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

/// Deterministic stream derived from a root seed and a stream index.
inline std::mt19937_64 seeded_engine(std::uint64_t root, std::uint64_t stream) {
    return std::mt19937_64(splitmix64(root ^ splitmix64(stream)));
}

} // namespace tslam

#endif
