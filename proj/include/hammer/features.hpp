#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "hammer/system_snapshot.hpp"
#include "hammer/trace.hpp"

namespace hammer {

// Learner-facing description of an instance layout.
struct FeatureSchema {
    std::size_t numeric_count = 0;
    std::vector<std::uint32_t> cardinalities;  // one entry per categorical feature

    std::size_t feature_count() const { return numeric_count + cardinalities.size(); }
};

// Non-owning view of one instance: numeric values, then categorical codes.
struct InstanceView {
    std::span<const double> numeric;
    std::span<const std::uint32_t> categorical;
};

struct FeatureVector {
    double addr_delta_log = 0.0;
    double pc_delta_log = 0.0;
    double size_log = 0.0;
    AccessOp op_type = AccessOp::Read;
    std::uint32_t page_bucket = 0;
    double slow_band_rate = 0.0;
    double pingpong_rate = 0.0;
    double cpu_rate = 0.0;

    static constexpr std::size_t kNumeric = 6;
    static constexpr std::size_t kCategorical = 2;

    // Flat encoding consumed by the learners; see hammer_schema().
    struct Encoded {
        std::array<double, kNumeric> numeric{};
        std::array<std::uint32_t, kCategorical> categorical{};

        InstanceView view() const { return {numeric, categorical}; }
    };

    Encoded encode() const;
};

// Numeric: addr_delta_log, pc_delta_log, size_log, slow_band_rate,
// pingpong_rate, cpu_rate. Categorical: op_type (2), page_bucket (256).
const FeatureSchema& hammer_schema();

// sign(d) * log2(1 + |d|) over the wrapped 64-bit difference `to - from`.
double signed_log_delta(std::uint64_t from, std::uint64_t to);

// 8-bit multiplicative hash of a page id.
constexpr std::uint32_t page_bucket(std::uint64_t page_id) noexcept {
    return static_cast<std::uint32_t>((page_id * 0x9E3779B97F4A7C15ULL) >> 56);
}

class FeatureExtractor {
public:
    explicit FeatureExtractor(unsigned page_size_log2 = 12) : page_size_log2_(page_size_log2) {}

    // Deltas are taken against the previous record of the same thread.
    FeatureVector extract(const AccessRecord& record, const SystemSnapshot& sys);

private:
    struct ThreadState {
        std::uint64_t last_addr = 0;
        std::uint64_t last_pc = 0;
    };

    unsigned page_size_log2_;
    std::unordered_map<std::uint32_t, ThreadState> threads_;
};

}  // namespace hammer
