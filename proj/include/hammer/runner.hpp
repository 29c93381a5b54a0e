#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "hammer/eval_queue.hpp"
#include "hammer/metrics.hpp"
#include "hammer/trace.hpp"

namespace hammer {

struct TTestBlock {
    std::string vs;
    TTestResult accuracy;
    TTestResult f1;
};

struct RunReport {
    std::string learner;
    std::uint64_t records = 0;
    std::uint64_t labeled = 0;
    double final_p = 0.0;
    std::optional<Scores> scores;  // unset when nothing was labeled
    ConfusionMatrix confusion;
    std::vector<TimelineRow> windows;
    std::optional<TTestBlock> ttest;
};

// Applies the configured sampling rate (seeded from the pipeline seed).
std::vector<AccessRecord> prepare_records(std::span<const AccessRecord> records,
                                          const PipelineConfig& config);

// Runs one pipeline over already-prepared records. With `freeze_after`, learning
// stops once that many records have been processed.
RunReport run_pipeline(std::span<const AccessRecord> records, const PipelineConfig& config,
                       std::optional<std::uint64_t> freeze_after = std::nullopt);

nlohmann::json to_json(const RunReport& report);
std::string timeline_csv(const RunReport& report);

struct ComparisonReport {
    std::vector<RunReport> runs;  // runs[i].ttest compares against runs[0]
};

ComparisonReport compare_learners(std::span<const AccessRecord> records,
                                  const PipelineConfig& config,
                                  const std::vector<LearnerKind>& learners);
nlohmann::json to_json(const ComparisonReport& report);

struct BatchVsOnlineReport {
    double split = 0.8;
    std::uint64_t split_index = 0;  // records processed before learning froze
    std::uint64_t split_seq = 0;    // seq of the first record after the split
    RunReport online;
    RunReport frozen;
    std::vector<TimelineRow> online_tail;  // windows starting at or after split_seq
    std::vector<TimelineRow> frozen_tail;
    double online_accuracy = 0.0;  // mean windowed accuracy over the tail
    double frozen_accuracy = 0.0;
    double online_f1 = 0.0;
    double frozen_f1 = 0.0;
    double accuracy_gap = 0.0;  // online - frozen
    double f1_gap = 0.0;
};

// Throws UsageError unless 0 < split < 1. `online` may carry an already
// computed run of the same records and config.
BatchVsOnlineReport batch_vs_online(std::span<const AccessRecord> records,
                                    const PipelineConfig& config, double split,
                                    std::optional<RunReport> online = std::nullopt);
nlohmann::json to_json(const BatchVsOnlineReport& report);

// Mean windowed accuracy over windows whose start_seq is >= `from_seq`.
double mean_accuracy_from(std::span<const TimelineRow> windows, std::uint64_t from_seq);

// ---------------------------------------------------------------------------
// Benchmark

inline constexpr std::uint64_t kBenchmarkRecords = 2'000'000;
inline constexpr double kBenchmarkDriftFraction = 0.85;
inline constexpr double kBenchmarkSplit = 0.8;

GeneratorConfig benchmark_generator_config(std::uint64_t seed);
PipelineConfig benchmark_pipeline_config(std::uint64_t seed);
// seq of the first record of the phase starting at 85% of the benchmark
std::uint64_t benchmark_drift_seq();

struct BenchCriterion {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;
};

struct BenchReport {
    std::uint64_t seed = 0;
    std::uint64_t records = 0;
    ComparisonReport comparison;  // learners: lru2q, nb, hat, arf
    BatchVsOnlineReport batch;
    std::vector<BenchCriterion> criteria;
};

BenchReport run_bench(std::uint64_t seed);
nlohmann::json to_json(const BenchReport& report);

}  // namespace hammer
