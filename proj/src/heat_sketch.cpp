#include "hammer/heat_sketch.hpp"

#include <algorithm>
#include <limits>

#include "hammer/errors.hpp"
#include "hammer/random.hpp"

namespace hammer {

CountMinSketch::CountMinSketch(std::size_t depth, std::size_t width, std::uint64_t seed)
    : depth_(depth), width_(width) {
    if (depth < 1) throw InvalidConfig("sketch depth must be >= 1");
    if (width < 2) throw InvalidConfig("sketch width must be >= 2");
    multipliers_.resize(depth);
    offsets_.resize(depth);
    for (std::size_t d = 0; d < depth; ++d) {
        multipliers_[d] = derive_seed(seed, 2 * d) | 1ULL;
        offsets_[d] = derive_seed(seed, 2 * d + 1);
    }
    counters_.assign(depth * width, 0);
}

std::size_t CountMinSketch::slot(std::size_t row, std::uint64_t key) const {
    const std::uint64_t z = key * multipliers_[row] + offsets_[row];
    // top 32 bits scaled onto [0, width)
    return static_cast<std::size_t>(((z >> 32) * static_cast<std::uint64_t>(width_)) >> 32);
}

void CountMinSketch::increment(std::uint64_t key) {
    for (std::size_t d = 0; d < depth_; ++d) {
        if (counters_[d * width_ + slot(d, key)] == std::numeric_limits<std::uint32_t>::max()) {
            throw CounterOverflow("sketch counter overflow");
        }
    }
    for (std::size_t d = 0; d < depth_; ++d) {
        ++counters_[d * width_ + slot(d, key)];
    }
}

void CountMinSketch::decrement(std::uint64_t key) {
    for (std::size_t d = 0; d < depth_; ++d) {
        if (counters_[d * width_ + slot(d, key)] == 0) {
            throw CounterUnderflow("sketch decrement without matching increment");
        }
    }
    for (std::size_t d = 0; d < depth_; ++d) {
        --counters_[d * width_ + slot(d, key)];
    }
}

std::uint32_t CountMinSketch::estimate(std::uint64_t key) const {
    std::uint32_t best = std::numeric_limits<std::uint32_t>::max();
    for (std::size_t d = 0; d < depth_; ++d) {
        best = std::min(best, counters_[d * width_ + slot(d, key)]);
    }
    return best;
}

}  // namespace hammer
