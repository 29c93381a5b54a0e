#pragma once

#include <cstdint>
#include <list>
#include <optional>
#include <unordered_map>
#include <vector>

#include "hammer/heat_label.hpp"
#include "hammer/system_snapshot.hpp"

namespace hammer {

enum class ThresholdMode {
    AsWritten,       // factor (1 + r)^alpha, r = ping-pong ratio to the baseline
    RelativeChange,  // factor (1 + max(r - 1, -0.9))^alpha, neutral at r = 1
};

struct ThresholdConfig {
    std::optional<double> p_init;  // unset: cold / (hot + cold) capacity
    double p_min = 0.05;
    double p_max = 0.99;
    double alpha = 1.0;  // exponent of the ping-pong term
    double beta = 1.0;   // exponent of the slow-tier bandwidth term
    double theta_max = 0.8;
    std::uint64_t period = 10000;
    ThresholdMode mode = ThresholdMode::RelativeChange;
    // Under CPU pressure: false lowers p to min(p_min, p/2); true raises it to
    // max(p_max, 2p) clamped into [p_min, p_max].
    bool cpu_cap_raises = false;
};

double derive_p_init(double hot_capacity, double cold_capacity);

// Throws InvalidConfig unless 0 <= p_min <= p_init <= p_max <= 1 and period >= 1.
void validate(const ThresholdConfig& config, double p_init);

struct ThresholdState {
    double p = 0.5;
    double baseline_pingpong = 1.0;
    bool baseline_captured = false;
};

// Captures the ping-pong baseline on first use (floored at 1).
void capture_baseline(ThresholdState& state, const SystemSnapshot& snapshot);

// One tuning step; returns and stores the new percentile.
double update_threshold(ThresholdState& state, const ThresholdConfig& config,
                        const SystemSnapshot& snapshot);

// ---------------------------------------------------------------------------

// Source of the cpu_rate signal.
class CpuSource {
public:
    static CpuSource constant(double value);
    static CpuSource schedule(std::vector<double> values);
    // min(1, migrations / period * cost_factor)
    static CpuSource proxy(double cost_factor);

    double next(std::uint64_t migrations, std::uint64_t period);

    enum class Kind { Constant, Schedule, Proxy };
    Kind kind() const { return kind_; }
    const std::vector<double>& values() const { return values_; }
    double parameter() const { return parameter_; }

private:
    Kind kind_ = Kind::Constant;
    std::vector<double> values_;
    double parameter_ = 0.2;
    std::size_t cursor_ = 0;
};

// Two-tier memory driven by heat labels. Hot-labeled pages are promoted into a
// bounded hot tier (evicting the least recently hot-labeled resident);
// cold-labeled residents are demoted.
class TierModel {
public:
    enum class Tier : std::uint8_t { Hot, Cold };

    struct Window {
        std::uint64_t hot_bytes = 0;
        std::uint64_t cold_bytes = 0;
        std::uint64_t migrations = 0;
        std::uint64_t pingpongs = 0;
    };

    explicit TierModel(std::uint64_t hot_capacity_pages);

    void apply(std::uint64_t page, HeatLabel label, std::uint32_t size);

    // Closes the current window: reports its signals and resets the counters.
    SystemSnapshot snapshot(CpuSource& cpu, std::uint64_t period);

    Tier tier(std::uint64_t page) const;
    std::size_t hot_resident() const { return hot_lru_.size(); }
    std::uint64_t hot_capacity() const { return hot_capacity_; }
    const Window& window() const { return window_; }
    std::uint64_t total_migrations() const { return total_migrations_; }

private:
    struct PageState {
        Tier tier = Tier::Cold;
        std::int8_t last_direction = 0;  // +1 to hot, -1 to cold
        std::uint64_t last_window = 0;
        std::list<std::uint64_t>::iterator lru;
    };

    void migrate(std::uint64_t page, PageState& st, Tier to);

    std::uint64_t hot_capacity_;
    std::list<std::uint64_t> hot_lru_;  // front = most recently labeled hot
    std::unordered_map<std::uint64_t, PageState> pages_;
    std::vector<std::uint64_t> demoted_this_window_;
    Window window_;
    std::uint64_t window_index_ = 1;
    std::uint64_t total_migrations_ = 0;
};

}  // namespace hammer
