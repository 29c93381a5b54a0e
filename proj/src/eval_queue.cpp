#include "hammer/eval_queue.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "hammer/errors.hpp"
#include "hammer/naive_bayes.hpp"
#include "hammer/random.hpp"

namespace hammer {

ExitHeatWindow::ExitHeatWindow(std::size_t capacity, std::size_t min_fill)
    : ring_(capacity, 0), min_fill_(min_fill), tree_(1025, 0) {
    if (capacity < 1) {
        throw InvalidConfig("exit window capacity must be >= 1");
    }
}

void ExitHeatWindow::fenwick_add(std::uint32_t value, int delta) {
    for (std::size_t i = static_cast<std::size_t>(value) + 1; i < tree_.size(); i += i & (~i + 1)) {
        tree_[i] += delta;
    }
}

void ExitHeatWindow::grow(std::uint32_t value) {
    const std::size_t slots = std::bit_ceil(static_cast<std::size_t>(value) + 1);
    tree_.assign(slots + 1, 0);
    for (std::size_t i = 0; i < fill_; ++i) {
        fenwick_add(ring_[(head_ + ring_.size() - fill_ + i) % ring_.size()], 1);
    }
}

void ExitHeatWindow::push(std::uint32_t heat) {
    if (static_cast<std::size_t>(heat) + 1 >= tree_.size()) {
        grow(heat);
    }
    if (fill_ == ring_.size()) {
        fenwick_add(ring_[head_], -1);
    } else {
        ++fill_;
    }
    ring_[head_] = heat;
    fenwick_add(heat, 1);
    head_ = (head_ + 1) % ring_.size();
}

std::uint32_t ExitHeatWindow::kth_smallest(std::size_t k) const {
    if (fill_ == 0) {
        throw EmptyWindow("exit heat window is empty");
    }
    k = std::clamp<std::size_t>(k, 1, fill_);
    const std::size_t slots = tree_.size() - 1;  // power of two
    std::size_t pos = 0;
    auto remaining = static_cast<int>(k);
    for (std::size_t step = std::bit_floor(slots); step > 0; step >>= 1) {
        if (pos + step <= slots && tree_[pos + step] < remaining) {
            pos += step;
            remaining -= tree_[pos];
        }
    }
    return static_cast<std::uint32_t>(pos);
}

std::uint32_t percentile(const ExitHeatWindow& window, double p) {
    if (window.empty()) {
        throw EmptyWindow("percentile of an empty window");
    }
    const auto n = static_cast<double>(window.size());
    // tolerance keeps products such as 0.7 * 10 from rounding up a rank
    const auto rank = static_cast<std::size_t>(std::max(1.0, std::ceil(p * n - 1e-9)));
    return window.kth_smallest(rank);
}

HeatLabel label_heat(std::uint32_t heat, const ExitHeatWindow& window, double p) {
    std::uint32_t threshold = 1;
    if (!window.empty()) {
        threshold = percentile(window, p);
        if (window.size() < window.min_fill()) {
            threshold = std::max<std::uint32_t>(threshold, 1);
        }
    }
    return heat >= threshold ? HeatLabel::Hot : HeatLabel::Cold;
}

// ---------------------------------------------------------------------------

CpuSource CpuSourceConfig::make() const {
    switch (kind) {
        case CpuSource::Kind::Constant: return CpuSource::constant(value);
        case CpuSource::Kind::Schedule: return CpuSource::schedule(values);
        case CpuSource::Kind::Proxy: return CpuSource::proxy(cost_factor);
    }
    return CpuSource::constant(value);
}

std::string_view to_string(LearnerKind kind) {
    switch (kind) {
        case LearnerKind::NaiveBayes: return "nb";
        case LearnerKind::HoeffdingAdaptiveTree: return "hat";
        case LearnerKind::AdaptiveRandomForest: return "arf";
        case LearnerKind::Lru2Q: return "lru2q";
    }
    return "?";
}

LearnerKind learner_from_string(std::string_view name) {
    if (name == "nb") return LearnerKind::NaiveBayes;
    if (name == "hat") return LearnerKind::HoeffdingAdaptiveTree;
    if (name == "arf") return LearnerKind::AdaptiveRandomForest;
    if (name == "lru2q") return LearnerKind::Lru2Q;
    throw InvalidConfig("unknown learner '" + std::string(name) + "' (expected nb, hat, arf, lru2q)");
}

double PipelineConfig::resolved_p_init() const {
    return threshold.p_init.value_or(derive_p_init(static_cast<double>(tier.hot_capacity_pages),
                                                   static_cast<double>(tier.cold_capacity_pages)));
}

void validate(const PipelineConfig& c) {
    if (c.page_size_log2 < 6 || c.page_size_log2 > 30) {
        throw InvalidConfig("page_size_log2 must be in [6, 30]");
    }
    if (!(c.sampling_rate > 0.0 && c.sampling_rate <= 1.0)) {
        throw InvalidConfig("sampling_rate must be in (0, 1]");
    }
    if (c.sketch.depth < 1 || c.sketch.width < 2) {
        throw InvalidConfig("sketch needs depth >= 1 and width >= 2");
    }
    if (c.queue.capacity < 1 || c.queue.exit_window < 1) {
        throw InvalidConfig("queue capacity and exit_window must be >= 1");
    }
    if (c.queue.capacity >= 0xFFFFFFFFULL) {
        throw InvalidConfig("queue capacity must fit the 32-bit sketch counters");
    }
    validate(c.threshold, c.resolved_p_init());
    if (c.metrics_window < 1) {
        throw InvalidConfig("metrics window must be >= 1");
    }
    if (c.cpu.kind == CpuSource::Kind::Schedule && c.cpu.values.empty()) {
        throw InvalidConfig("cpu schedule needs values");
    }
    if (c.arf.trees < 1) {
        throw InvalidConfig("arf trees must be >= 1");
    }
    if (c.hat.grace_period < 1 || c.arf.tree.grace_period < 1) {
        throw InvalidConfig("grace_period must be >= 1");
    }
}

namespace {

class ClassifierPredictor final : public HeatPredictor {
public:
    explicit ClassifierPredictor(std::unique_ptr<OnlineClassifier> c) : classifier_(std::move(c)) {}

    Prediction predict(const AccessRecord&, std::uint64_t,
                       const FeatureVector::Encoded& features) override {
        return classifier_->predict(features.view());
    }
    void learn(const FeatureVector::Encoded& features, HeatLabel label) override {
        classifier_->learn(features.view(), label);
    }
    std::string_view name() const override { return classifier_->name(); }

private:
    std::unique_ptr<OnlineClassifier> classifier_;
};

class TwoQPredictor final : public HeatPredictor {
public:
    explicit TwoQPredictor(TwoQConfig config) : queue_(config) {}

    Prediction predict(const AccessRecord&, std::uint64_t page,
                       const FeatureVector::Encoded&) override {
        const auto label = queue_.access(page);
        return {label, label == HeatLabel::Hot ? 1.0 : 0.0};
    }
    void learn(const FeatureVector::Encoded&, HeatLabel) override {}
    std::string_view name() const override { return "lru2q"; }

private:
    TwoQ queue_;
};

}  // namespace

std::unique_ptr<OnlineClassifier> make_classifier(const PipelineConfig& config,
                                                  const FeatureSchema& schema) {
    switch (config.learner) {
        case LearnerKind::NaiveBayes:
            return std::make_unique<NaiveBayes>(schema);
        case LearnerKind::HoeffdingAdaptiveTree:
            return std::make_unique<HoeffdingTree>(schema, config.hat, derive_seed(config.seed, 1));
        case LearnerKind::AdaptiveRandomForest:
            return std::make_unique<AdaptiveRandomForest>(schema, config.arf,
                                                          derive_seed(config.seed, 2));
        case LearnerKind::Lru2Q:
            break;
    }
    throw InvalidConfig("lru2q is not a trainable classifier");
}

std::unique_ptr<HeatPredictor> make_predictor(const PipelineConfig& config) {
    if (config.learner == LearnerKind::Lru2Q) {
        auto q = config.lru2q.value_or(TwoQConfig::scaled_to(config.queue.capacity));
        q.a1in_counts_hot = config.a1in_counts_hot;
        return std::make_unique<TwoQPredictor>(q);
    }
    return std::make_unique<ClassifierPredictor>(make_classifier(config, hammer_schema()));
}

// ---------------------------------------------------------------------------

Pipeline::Pipeline(const PipelineConfig& config) : Pipeline(config, make_predictor(config)) {}

Pipeline::Pipeline(const PipelineConfig& config, std::unique_ptr<HeatPredictor> predictor)
    : config_(config),
      extractor_(config.page_size_log2),
      predictor_(std::move(predictor)),
      sketch_(config.sketch.depth, config.sketch.width, config.sketch.seed),
      exit_window_(config.queue.exit_window, config.queue.min_fill),
      tier_(config.tier.hot_capacity_pages),
      cpu_(config.cpu.make()),
      series_(config.metrics_window) {
    validate(config_);
    queue_.resize(config_.queue.capacity + 1);
    threshold_state_.p = config_.resolved_p_init();
    snapshot_.cpu_rate = 0.0;
}

std::optional<LabeledOutcome> Pipeline::process(const AccessRecord& record) {
    const auto page = page_of(record.addr, config_.page_size_log2);
    const auto fv = extractor_.extract(record, snapshot_);

    PendingEntry entry;
    entry.seq = record.seq;
    entry.page = page;
    entry.size = record.size;
    entry.features = fv.encode();
    entry.predicted = predictor_->predict(record, page, entry.features).label;

    sketch_.increment(page);
    queue_[(queue_head_ + queue_fill_) % queue_.size()] = entry;
    ++queue_fill_;

    std::optional<LabeledOutcome> outcome;
    if (queue_fill_ > config_.queue.capacity) {
        const PendingEntry& oldest = queue_[queue_head_];
        LabeledOutcome out;
        out.seq = oldest.seq;
        out.page = oldest.page;
        out.predicted = oldest.predicted;
        out.heat = sketch_.estimate(oldest.page);
        sketch_.decrement(oldest.page);
        exit_window_.push(out.heat);
        out.actual = label_heat(out.heat, exit_window_, threshold_state_.p);
        tier_.apply(oldest.page, out.actual, oldest.size);
        if (learning_) {
            predictor_->learn(oldest.features, out.actual);
        }
        matrix_.update(out.predicted, out.actual);
        if (series_.add(out.seq, out.predicted, out.actual)) {
            const auto& w = series_.windows().back();
            timeline_.push_back({w.start_seq, w.accuracy, w.f1, threshold_state_.p,
                                 snapshot_.slow_band_rate, snapshot_.pingpong_dis});
        }
        ++labeled_;
        queue_head_ = (queue_head_ + 1) % queue_.size();
        --queue_fill_;
        outcome = out;
        // the tier model only sees traffic once labels flow, so periods count labeled records
        if (labeled_ % config_.threshold.period == 0) {
            snapshot_ = tier_.snapshot(cpu_, config_.threshold.period);
            update_threshold(threshold_state_, config_.threshold, snapshot_);
        }
    }

    ++processed_;
    return outcome;
}

}  // namespace hammer
