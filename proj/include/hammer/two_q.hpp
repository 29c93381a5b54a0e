#pragma once

#include <cstdint>
#include <list>
#include <unordered_map>

#include "hammer/heat_label.hpp"

namespace hammer {

struct TwoQConfig {
    std::size_t a1in_capacity = 16384;
    std::size_t am_capacity = 32768;
    std::size_t a1out_capacity = 32768;
    bool a1in_counts_hot = false;

    // Capacities scaled to an evaluation-queue capacity: N/4, N/2, N/2.
    static TwoQConfig scaled_to(std::size_t queue_capacity);
};

// 2Q replacement state. A page is predicted hot when it sits in the LRU hot
// queue (Am) at the time of the access.
class TwoQ {
public:
    explicit TwoQ(TwoQConfig config = {});

    HeatLabel access(std::uint64_t page);

    enum class Where { None, A1in, Am, A1out };
    Where where(std::uint64_t page) const;

    std::size_t a1in_size() const { return a1in_.size(); }
    std::size_t am_size() const { return am_.size(); }
    std::size_t a1out_size() const { return a1out_.size(); }
    const TwoQConfig& config() const { return config_; }

private:
    struct Entry {
        Where where = Where::None;
        std::list<std::uint64_t>::iterator pos;
    };

    void push_a1in(std::uint64_t page);
    void push_a1out(std::uint64_t page);
    void push_am(std::uint64_t page);

    TwoQConfig config_;
    // front = newest (a1in, a1out) / most recently used (am)
    std::list<std::uint64_t> a1in_;
    std::list<std::uint64_t> am_;
    std::list<std::uint64_t> a1out_;
    std::unordered_map<std::uint64_t, Entry> index_;
};

}  // namespace hammer
