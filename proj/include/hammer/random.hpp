#pragma once

#include <cstdint>

namespace hammer {

// splitmix64 finalizer; used to derive independent seeds from a master seed.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) noexcept {
    return splitmix64(master ^ splitmix64(stream + 0x632BE59BD9B4E019ULL));
}

// Uniform double in [0, 1) from the top 53 bits of a 64-bit engine draw.
template <typename Engine>
double uniform01(Engine& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace hammer
