#pragma once

#include <memory>
#include <optional>
#include <random>
#include <vector>

#include "hammer/adwin.hpp"
#include "hammer/hoeffding_tree.hpp"

namespace hammer {

struct ArfConfig {
    std::size_t trees = 10;
    double lambda = 6.0;
    // false pins every tree's bootstrap weight to 1
    bool bagging = true;
    // 0 means ceil(sqrt(feature count))
    std::size_t feature_subset = 0;
    double warning_delta = 0.01;
    double drift_delta = 0.001;
    bool drift_detection = true;
    std::size_t accuracy_window = 1000;
    double weight_floor = 0.01;
    HoeffdingTreeConfig tree;
};

// Ensemble of Hoeffding trees with Poisson online bagging, random feature
// subsets per split attempt, per-tree warning/drift detectors with background
// trees, and accuracy-weighted voting.
class AdaptiveRandomForest final : public OnlineClassifier {
public:
    AdaptiveRandomForest(FeatureSchema schema, ArfConfig config = {}, std::uint64_t seed = 0);

    Prediction predict(const InstanceView& x) const override;
    void learn(const InstanceView& x, HeatLabel label) override;
    std::string_view name() const override { return "arf"; }

    std::size_t size() const { return members_.size(); }
    std::size_t background_count() const;
    std::size_t drift_count() const { return drifts_; }
    std::size_t warning_count() const { return warnings_; }
    double member_weight(std::size_t i) const;
    const HoeffdingTree& member_tree(std::size_t i) const { return members_[i].tree; }

    // Weighted vote over per-member labels.
    static Prediction vote(std::span<const HeatLabel> labels, std::span<const double> weights);

private:
    struct Member {
        HoeffdingTree tree;
        std::optional<HoeffdingTree> background;
        AdwinDetector warning;
        AdwinDetector drift;
        std::vector<std::uint8_t> window;  // ring of recent correctness bits
        std::size_t window_pos = 0;
        std::size_t window_fill = 0;
        std::size_t window_correct = 0;
        std::mt19937_64 rng;
    };

    HoeffdingTree make_tree(Member& owner);
    void record(Member& m, bool correct);

    FeatureSchema schema_;
    ArfConfig config_;
    HoeffdingTreeConfig tree_config_;
    std::vector<Member> members_;
    std::size_t drifts_ = 0;
    std::size_t warnings_ = 0;
};

}  // namespace hammer
