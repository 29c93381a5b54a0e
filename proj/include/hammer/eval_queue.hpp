#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hammer/adaptive_random_forest.hpp"
#include "hammer/features.hpp"
#include "hammer/heat_label.hpp"
#include "hammer/heat_sketch.hpp"
#include "hammer/hoeffding_tree.hpp"
#include "hammer/metrics.hpp"
#include "hammer/threshold.hpp"
#include "hammer/trace.hpp"
#include "hammer/two_q.hpp"

namespace hammer {

// Recent exit heats with order-statistic queries. Values are kept in a ring
// buffer for eviction and in a Fenwick tree over heat values for ranking.
class ExitHeatWindow {
public:
    static constexpr std::size_t kDefaultCapacity = 1024;
    static constexpr std::size_t kDefaultMinFill = 64;

    explicit ExitHeatWindow(std::size_t capacity = kDefaultCapacity,
                            std::size_t min_fill = kDefaultMinFill);

    void push(std::uint32_t heat);

    std::size_t size() const { return fill_; }
    bool empty() const { return fill_ == 0; }
    std::size_t capacity() const { return ring_.size(); }
    std::size_t min_fill() const { return min_fill_; }

    // k-th smallest retained value, 1-based.
    std::uint32_t kth_smallest(std::size_t k) const;

private:
    void fenwick_add(std::uint32_t value, int delta);
    void grow(std::uint32_t value);

    std::vector<std::uint32_t> ring_;
    std::size_t head_ = 0;
    std::size_t fill_ = 0;
    std::size_t min_fill_;
    std::vector<int> tree_;  // 1-based over values 0 .. tree_.size() - 2
};

// Nearest-rank percentile: element max(1, ceil(p * n)) of the sorted window.
std::uint32_t percentile(const ExitHeatWindow& window, double p);

// Hot iff heat reaches the window's p-th percentile. Below min_fill the
// threshold is at least 1; an empty window uses threshold 1.
HeatLabel label_heat(std::uint32_t heat, const ExitHeatWindow& window, double p);

struct QueueConfig {
    std::size_t capacity = 65536;
    std::size_t exit_window = ExitHeatWindow::kDefaultCapacity;
    std::size_t min_fill = ExitHeatWindow::kDefaultMinFill;
};

struct SketchConfig {
    std::size_t depth = CountMinSketch::kDefaultDepth;
    std::size_t width = CountMinSketch::kDefaultWidth;
    std::uint64_t seed = 0x48414d4d4552ULL;
};

struct CpuSourceConfig {
    CpuSource::Kind kind = CpuSource::Kind::Constant;
    double value = 0.2;        // constant
    std::vector<double> values;  // schedule
    double cost_factor = 1.0;  // proxy

    CpuSource make() const;
};

struct TierConfig {
    std::uint64_t hot_capacity_pages = 4096;
    std::uint64_t cold_capacity_pages = 12288;
};

enum class LearnerKind { NaiveBayes, HoeffdingAdaptiveTree, AdaptiveRandomForest, Lru2Q };

std::string_view to_string(LearnerKind kind);
LearnerKind learner_from_string(std::string_view name);

struct PipelineConfig {
    unsigned page_size_log2 = 12;
    double sampling_rate = 1.0;
    SketchConfig sketch;
    QueueConfig queue;
    ThresholdConfig threshold;
    TierConfig tier;
    CpuSourceConfig cpu;
    LearnerKind learner = LearnerKind::AdaptiveRandomForest;
    HoeffdingTreeConfig hat;
    ArfConfig arf;
    bool a1in_counts_hot = false;
    std::optional<TwoQConfig> lru2q;  // unset: scaled to the queue capacity
    std::size_t metrics_window = WindowedSeries::kDefaultWindow;
    std::uint64_t seed = 42;

    double resolved_p_init() const;
};

// Throws InvalidConfig.
void validate(const PipelineConfig& config);

struct PendingEntry {
    std::uint64_t seq = 0;
    std::uint64_t page = 0;
    std::uint32_t size = 0;
    FeatureVector::Encoded features;
    HeatLabel predicted = HeatLabel::Cold;
};

struct LabeledOutcome {
    std::uint64_t seq = 0;
    std::uint64_t page = 0;
    HeatLabel predicted = HeatLabel::Cold;
    HeatLabel actual = HeatLabel::Cold;
    std::uint32_t heat = 0;
};

struct TimelineRow {
    std::uint64_t start_seq = 0;
    double accuracy = 0.0;
    double f1 = 0.0;
    double p = 0.0;
    double slow_band_rate = 0.0;
    double pingpong = 0.0;
};

// Whatever produces a heat prediction at arrival time.
class HeatPredictor {
public:
    virtual ~HeatPredictor() = default;

    virtual Prediction predict(const AccessRecord& record, std::uint64_t page,
                               const FeatureVector::Encoded& features) = 0;
    virtual void learn(const FeatureVector::Encoded& features, HeatLabel label) = 0;
    virtual std::string_view name() const = 0;
};

std::unique_ptr<OnlineClassifier> make_classifier(const PipelineConfig& config,
                                                  const FeatureSchema& schema);
std::unique_ptr<HeatPredictor> make_predictor(const PipelineConfig& config);

// Predict-then-enqueue loop with delayed labels: every access is predicted on
// arrival and labeled once it leaves the evaluation queue, using its windowed
// heat and the current percentile threshold.
class Pipeline {
public:
    explicit Pipeline(const PipelineConfig& config);
    Pipeline(const PipelineConfig& config, std::unique_ptr<HeatPredictor> predictor);

    std::optional<LabeledOutcome> process(const AccessRecord& record);

    // Frozen models stop receiving labels; everything else keeps running.
    void set_learning(bool enabled) { learning_ = enabled; }
    bool learning() const { return learning_; }

    std::uint64_t records_processed() const { return processed_; }
    std::uint64_t labeled_count() const { return labeled_; }
    std::size_t queue_length() const { return queue_fill_; }
    double current_p() const { return threshold_state_.p; }
    const SystemSnapshot& last_snapshot() const { return snapshot_; }
    const ConfusionMatrix& matrix() const { return matrix_; }
    const WindowedSeries& series() const { return series_; }
    const std::vector<TimelineRow>& timeline() const { return timeline_; }
    const CountMinSketch& sketch() const { return sketch_; }
    const ExitHeatWindow& exit_window() const { return exit_window_; }
    const TierModel& tier() const { return tier_; }
    const HeatPredictor& predictor() const { return *predictor_; }
    const PipelineConfig& config() const { return config_; }

private:
    PipelineConfig config_;
    FeatureExtractor extractor_;
    std::unique_ptr<HeatPredictor> predictor_;
    CountMinSketch sketch_;
    std::vector<PendingEntry> queue_;  // ring of capacity + 1
    std::size_t queue_head_ = 0;
    std::size_t queue_fill_ = 0;
    ExitHeatWindow exit_window_;
    ThresholdState threshold_state_;
    TierModel tier_;
    CpuSource cpu_;
    SystemSnapshot snapshot_;
    ConfusionMatrix matrix_;
    WindowedSeries series_;
    std::vector<TimelineRow> timeline_;
    std::uint64_t processed_ = 0;
    std::uint64_t labeled_ = 0;
    bool learning_ = true;
};

}  // namespace hammer
