#include "hammer/two_q.hpp"

#include <algorithm>

#include "hammer/errors.hpp"

namespace hammer {

TwoQConfig TwoQConfig::scaled_to(std::size_t queue_capacity) {
    TwoQConfig c;
    c.a1in_capacity = std::max<std::size_t>(1, queue_capacity / 4);
    c.am_capacity = std::max<std::size_t>(1, queue_capacity / 2);
    c.a1out_capacity = std::max<std::size_t>(1, queue_capacity / 2);
    return c;
}

TwoQ::TwoQ(TwoQConfig config) : config_(config) {
    if (config_.a1in_capacity < 1 || config_.am_capacity < 1 || config_.a1out_capacity < 1) {
        throw InvalidConfig("2Q capacities must be >= 1");
    }
}

TwoQ::Where TwoQ::where(std::uint64_t page) const {
    const auto it = index_.find(page);
    return it == index_.end() ? Where::None : it->second.where;
}

void TwoQ::push_a1out(std::uint64_t page) {
    if (a1out_.size() >= config_.a1out_capacity) {
        index_.erase(a1out_.back());
        a1out_.pop_back();
    }
    a1out_.push_front(page);
    index_[page] = {Where::A1out, a1out_.begin()};
}

void TwoQ::push_a1in(std::uint64_t page) {
    if (a1in_.size() >= config_.a1in_capacity) {
        const auto oldest = a1in_.back();
        a1in_.pop_back();
        index_.erase(oldest);
        push_a1out(oldest);
    }
    a1in_.push_front(page);
    index_[page] = {Where::A1in, a1in_.begin()};
}

void TwoQ::push_am(std::uint64_t page) {
    if (am_.size() >= config_.am_capacity) {
        index_.erase(am_.back());
        am_.pop_back();
    }
    am_.push_front(page);
    index_[page] = {Where::Am, am_.begin()};
}

HeatLabel TwoQ::access(std::uint64_t page) {
    const auto it = index_.find(page);
    if (it == index_.end()) {
        push_a1in(page);
        return HeatLabel::Cold;
    }
    switch (it->second.where) {
        case Where::Am:
            am_.splice(am_.begin(), am_, it->second.pos);
            return HeatLabel::Hot;
        case Where::A1in:
            return config_.a1in_counts_hot ? HeatLabel::Hot : HeatLabel::Cold;
        case Where::A1out:
            a1out_.erase(it->second.pos);
            index_.erase(it);
            push_am(page);
            return HeatLabel::Cold;
        case Where::None:
            break;
    }
    return HeatLabel::Cold;
}

}  // namespace hammer
