#pragma once

#include <array>
#include <memory>
#include <random>
#include <vector>

#include "hammer/adwin.hpp"
#include "hammer/learners.hpp"

namespace hammer {

struct HoeffdingTreeConfig {
    std::uint32_t grace_period = 200;
    double split_confidence = 1e-7;
    double tie_threshold = 0.05;
    std::size_t numeric_probes = 10;
    double min_branch_fraction = 0.01;
    // Per-node error monitoring with alternate subtrees (HAT). Off gives a
    // plain Hoeffding tree.
    bool adaptive = true;
    double warning_delta = 0.01;
    double drift_delta = 0.001;
    std::uint64_t alternate_min_instances = 300;
    double alternate_confidence = 0.05;
    // Features considered per split attempt, drawn fresh each attempt.
    // 0 means all features.
    std::size_t feature_subset = 0;
    // 0 means unlimited.
    std::size_t max_depth = 0;
};

struct SplitTest {
    std::size_t feature = 0;  // index into numeric features, then categorical
    bool categorical = false;
    double threshold = 0.0;   // numeric: left iff x <= threshold
    std::uint32_t category = 0;  // categorical: left iff x == category

    friend bool operator==(const SplitTest&, const SplitTest&) = default;
};

// Hoeffding adaptive tree over a mixed numeric/categorical schema. Numeric
// split candidates come from per-class Gaussian summaries; categorical splits
// are one-vs-rest. Leaves predict their majority class.
class HoeffdingTree final : public OnlineClassifier {
public:
    HoeffdingTree(FeatureSchema schema, HoeffdingTreeConfig config = {}, std::uint64_t seed = 0);
    ~HoeffdingTree() override;
    HoeffdingTree(HoeffdingTree&&) noexcept;
    HoeffdingTree& operator=(HoeffdingTree&&) noexcept;

    Prediction predict(const InstanceView& x) const override;
    void learn(const InstanceView& x, HeatLabel label) override { learn(x, label, 1.0); }
    void learn(const InstanceView& x, HeatLabel label, double weight);
    std::string_view name() const override { return "hat"; }

    std::size_t node_count() const;
    std::size_t leaf_count() const;
    std::size_t alternate_count() const;
    std::size_t depth() const;
    // Split tests of the main tree in pre-order.
    std::vector<SplitTest> splits() const;
    // Total class weight held by the leaf `x` routes to.
    double leaf_weight(const InstanceView& x) const;

    const HoeffdingTreeConfig& config() const { return config_; }

private:
    struct Node;
    struct Candidate;

    std::unique_ptr<Node> make_leaf(std::size_t depth, std::array<double, 2> dist = {}) const;
    const Node& route(const Node& node, const InstanceView& x) const;
    static std::size_t child_index(const Node& node, const InstanceView& x, std::size_t numeric_count);

    void learn_subtree(std::unique_ptr<Node>& slot, const InstanceView& x, HeatLabel y, double w);
    void learn_path(std::unique_ptr<Node>& slot, const InstanceView& x, HeatLabel y, double w,
                    bool error);
    void update_leaf(Node& leaf, const InstanceView& x, HeatLabel y, double w);
    void attempt_split(Node& leaf);
    std::vector<std::size_t> candidate_features();

    FeatureSchema schema_;
    HoeffdingTreeConfig config_;
    std::mt19937_64 rng_;
    std::unique_ptr<Node> root_;
};

}  // namespace hammer
