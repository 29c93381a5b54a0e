#include "hammer/threshold.hpp"

#include <algorithm>
#include <cmath>

#include "hammer/errors.hpp"

namespace hammer {

double derive_p_init(double hot_capacity, double cold_capacity) {
    if (!(hot_capacity >= 0.0 && cold_capacity >= 0.0 && hot_capacity + cold_capacity > 0.0)) {
        throw InvalidConfig("tier capacities must be non-negative and not both zero");
    }
    return cold_capacity / (hot_capacity + cold_capacity);
}

void validate(const ThresholdConfig& c, double p_init) {
    if (!(0.0 <= c.p_min && c.p_min <= p_init && p_init <= c.p_max && c.p_max <= 1.0)) {
        throw InvalidConfig("threshold bounds must satisfy 0 <= p_min <= p_init <= p_max <= 1");
    }
    if (p_init <= 0.0) {
        throw InvalidConfig("p_init must be > 0");
    }
    if (c.period < 1) {
        throw InvalidConfig("threshold period must be >= 1");
    }
    if (!(c.theta_max >= 0.0 && c.theta_max <= 1.0)) {
        throw InvalidConfig("theta_max must be in [0, 1]");
    }
}

void capture_baseline(ThresholdState& state, const SystemSnapshot& snapshot) {
    if (!state.baseline_captured) {
        state.baseline_pingpong = std::max(1.0, snapshot.pingpong_dis);
        state.baseline_captured = true;
    }
}

double update_threshold(ThresholdState& state, const ThresholdConfig& c,
                        const SystemSnapshot& s) {
    capture_baseline(state, s);
    double p = state.p;
    if (s.cpu_rate > c.theta_max) {
        if (c.cpu_cap_raises) {
            p = std::clamp(std::max(c.p_max, 2.0 * p), c.p_min, c.p_max);
        } else {
            p = std::min(c.p_min, p / 2.0);
        }
    } else {
        const double r = s.pingpong_dis / state.baseline_pingpong;
        const double d = c.mode == ThresholdMode::AsWritten ? r : std::max(r - 1.0, -0.9);
        p = p * std::pow(1.0 + d, c.alpha) / std::pow(1.0 + s.slow_band_rate, c.beta);
        p = std::min(p, c.p_max);
        p = std::max(p, c.p_min);
    }
    state.p = p;
    return p;
}

// ---------------------------------------------------------------------------

CpuSource CpuSource::constant(double value) {
    CpuSource s;
    s.kind_ = Kind::Constant;
    s.parameter_ = value;
    return s;
}

CpuSource CpuSource::schedule(std::vector<double> values) {
    if (values.empty()) {
        throw InvalidConfig("cpu schedule needs at least one value");
    }
    CpuSource s;
    s.kind_ = Kind::Schedule;
    s.values_ = std::move(values);
    return s;
}

CpuSource CpuSource::proxy(double cost_factor) {
    CpuSource s;
    s.kind_ = Kind::Proxy;
    s.parameter_ = cost_factor;
    return s;
}

double CpuSource::next(std::uint64_t migrations, std::uint64_t period) {
    switch (kind_) {
        case Kind::Constant:
            return parameter_;
        case Kind::Schedule: {
            const double v = values_[std::min(cursor_, values_.size() - 1)];
            ++cursor_;
            return v;
        }
        case Kind::Proxy:
            return std::min(1.0, static_cast<double>(migrations) /
                                     static_cast<double>(std::max<std::uint64_t>(period, 1)) *
                                     parameter_);
    }
    return 0.0;
}

// ---------------------------------------------------------------------------

TierModel::TierModel(std::uint64_t hot_capacity_pages) : hot_capacity_(hot_capacity_pages) {}

TierModel::Tier TierModel::tier(std::uint64_t page) const {
    const auto it = pages_.find(page);
    return it == pages_.end() ? Tier::Cold : it->second.tier;
}

void TierModel::migrate(std::uint64_t page, PageState& st, Tier to) {
    const std::int8_t dir = to == Tier::Hot ? 1 : -1;
    if (st.last_window == window_index_ && st.last_direction == -dir) {
        ++window_.pingpongs;
    }
    st.last_direction = dir;
    st.last_window = window_index_;
    st.tier = to;
    ++window_.migrations;
    ++total_migrations_;
    if (to == Tier::Hot) {
        hot_lru_.push_front(page);
        st.lru = hot_lru_.begin();
    } else {
        hot_lru_.erase(st.lru);
        demoted_this_window_.push_back(page);
    }
}

void TierModel::apply(std::uint64_t page, HeatLabel label, std::uint32_t size) {
    auto it = pages_.find(page);
    const Tier current = it == pages_.end() ? Tier::Cold : it->second.tier;
    (current == Tier::Hot ? window_.hot_bytes : window_.cold_bytes) += size;

    if (label == HeatLabel::Hot) {
        if (current == Tier::Hot) {
            hot_lru_.splice(hot_lru_.begin(), hot_lru_, it->second.lru);
            return;
        }
        if (hot_capacity_ == 0) {
            return;
        }
        if (hot_lru_.size() >= hot_capacity_) {
            const auto victim = hot_lru_.back();
            migrate(victim, pages_.at(victim), Tier::Cold);
        }
        if (it == pages_.end()) {
            it = pages_.emplace(page, PageState{}).first;
        }
        migrate(page, it->second, Tier::Hot);
    } else if (current == Tier::Hot) {
        migrate(page, it->second, Tier::Cold);
    }
}

SystemSnapshot TierModel::snapshot(CpuSource& cpu, std::uint64_t period) {
    SystemSnapshot s;
    const auto total = window_.hot_bytes + window_.cold_bytes;
    s.slow_band_rate = static_cast<double>(window_.cold_bytes) /
                       static_cast<double>(std::max<std::uint64_t>(total, 1));
    s.pingpong_dis = static_cast<double>(window_.pingpongs);
    s.cpu_rate = cpu.next(window_.migrations, period);
    window_ = Window{};
    ++window_index_;
    // cold pages only need state while they can still ping-pong
    for (const auto page : demoted_this_window_) {
        const auto it = pages_.find(page);
        if (it != pages_.end() && it->second.tier == Tier::Cold) {
            pages_.erase(it);
        }
    }
    demoted_this_window_.clear();
    return s;
}

}  // namespace hammer
