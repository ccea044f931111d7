#pragma once

#include <cstdint>

namespace gridlock::detail {

/// splitmix64; derives independent per-task seeds from one root seed so
/// restarts, folds and replicates stay reproducible and order-free.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (tag + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace gridlock::detail
