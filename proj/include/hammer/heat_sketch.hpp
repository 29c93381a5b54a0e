#pragma once

#include <cstdint>
#include <vector>

namespace hammer {

// Count-Min counter matrix used as a sliding-window heat estimator: the
// pipeline increments a page when it enters the evaluation queue and
// decrements it when it leaves, so the minimum over rows bounds the page's
// in-window access count from above.
class CountMinSketch {
public:
    static constexpr std::size_t kDefaultDepth = 4;
    static constexpr std::size_t kDefaultWidth = 2048;

    CountMinSketch(std::size_t depth = kDefaultDepth, std::size_t width = kDefaultWidth,
                   std::uint64_t seed = 0);

    void increment(std::uint64_t key);
    void decrement(std::uint64_t key);
    std::uint32_t estimate(std::uint64_t key) const;

    std::size_t depth() const { return depth_; }
    std::size_t width() const { return width_; }
    std::size_t slot(std::size_t row, std::uint64_t key) const;
    std::uint32_t counter(std::size_t row, std::size_t column) const {
        return counters_[row * width_ + column];
    }

private:
    std::size_t depth_;
    std::size_t width_;
    std::vector<std::uint64_t> multipliers_;  // odd
    std::vector<std::uint64_t> offsets_;
    std::vector<std::uint32_t> counters_;
};

}  // namespace hammer
