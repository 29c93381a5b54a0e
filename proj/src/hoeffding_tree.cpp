#include "hammer/hoeffding_tree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace hammer {

namespace {

double entropy(double a, double b) {
    const double total = a + b;
    if (total <= 0.0) {
        return 0.0;
    }
    double h = 0.0;
    if (a > 0.0) h -= a / total * std::log2(a / total);
    if (b > 0.0) h -= b / total * std::log2(b / total);
    return h;
}

}  // namespace

struct HoeffdingTree::Node {
    std::array<double, 2> dist{};
    std::size_t depth = 0;

    // internal nodes
    bool is_leaf = true;
    SplitTest test;
    std::unique_ptr<Node> children[2];

    // leaves: numeric [feature * 2 + class], categorical [feature][value * 2 + class]
    std::vector<GaussianStat> numeric;
    std::vector<std::vector<float>> categorical;
    double weight_at_last_eval = 0.0;

    // adaptation
    std::unique_ptr<AdwinDetector> error;
    std::unique_ptr<AdwinDetector> warning;
    std::unique_ptr<Node> alternate;
    std::uint64_t alternate_seen = 0;

    double weight() const { return dist[0] + dist[1]; }
};

struct HoeffdingTree::Candidate {
    double gain = 0.0;
    SplitTest test;
    std::array<std::array<double, 2>, 2> branches{};
};

HoeffdingTree::HoeffdingTree(FeatureSchema schema, HoeffdingTreeConfig config, std::uint64_t seed)
    : schema_(std::move(schema)), config_(config), rng_(seed), root_(make_leaf(0)) {}

HoeffdingTree::~HoeffdingTree() = default;
HoeffdingTree::HoeffdingTree(HoeffdingTree&&) noexcept = default;
HoeffdingTree& HoeffdingTree::operator=(HoeffdingTree&&) noexcept = default;

std::unique_ptr<HoeffdingTree::Node> HoeffdingTree::make_leaf(std::size_t depth,
                                                              std::array<double, 2> dist) const {
    auto node = std::make_unique<Node>();
    node->dist = dist;
    node->depth = depth;
    node->weight_at_last_eval = node->weight();
    node->numeric.resize(schema_.numeric_count * 2);
    for (auto card : schema_.cardinalities) {
        node->categorical.emplace_back(static_cast<std::size_t>(card) * 2, 0.0f);
    }
    if (config_.adaptive) {
        node->error = std::make_unique<AdwinDetector>(config_.drift_delta);
    }
    return node;
}

std::size_t HoeffdingTree::child_index(const Node& node, const InstanceView& x,
                                       std::size_t numeric_count) {
    const auto& t = node.test;
    if (t.categorical) {
        return x.categorical[t.feature - numeric_count] == t.category ? 0 : 1;
    }
    return x.numeric[t.feature] <= t.threshold ? 0 : 1;
}

const HoeffdingTree::Node& HoeffdingTree::route(const Node& node, const InstanceView& x) const {
    const Node* n = &node;
    while (!n->is_leaf) {
        n = n->children[child_index(*n, x, schema_.numeric_count)].get();
    }
    return *n;
}

namespace {

Prediction leaf_prediction(const std::array<double, 2>& dist) {
    const double total = dist[0] + dist[1];
    return {dist[1] > dist[0] ? HeatLabel::Hot : HeatLabel::Cold, (dist[1] + 1.0) / (total + 2.0)};
}

}  // namespace

Prediction HoeffdingTree::predict(const InstanceView& x) const {
    return leaf_prediction(route(*root_, x).dist);
}

void HoeffdingTree::learn(const InstanceView& x, HeatLabel label, double weight) {
    if (weight <= 0.0) {
        return;
    }
    learn_subtree(root_, x, label, weight);
}

void HoeffdingTree::learn_subtree(std::unique_ptr<Node>& slot, const InstanceView& x, HeatLabel y,
                                  double w) {
    const bool error = leaf_prediction(route(*slot, x).dist).label != y;
    learn_path(slot, x, y, w, error);
}

void HoeffdingTree::learn_path(std::unique_ptr<Node>& slot, const InstanceView& x, HeatLabel y,
                               double w, bool error) {
    Node& n = *slot;
    const double e = error ? 1.0 : 0.0;
    if (config_.adaptive) {
        const double before = n.error->estimation();
        const bool drift = n.error->update(e) && n.error->estimation() > before;
        if (!n.is_leaf) {
            const double warn_before = n.warning->estimation();
            const bool warn = n.warning->update(e) && n.warning->estimation() > warn_before;
            bool replace = false;
            if (!n.alternate) {
                if (warn || drift) {
                    n.alternate = make_leaf(n.depth);
                    n.alternate_seen = 0;
                }
            } else if (drift) {
                replace = true;
            } else if (n.alternate_seen >= config_.alternate_min_instances &&
                       n.alternate->error->width() > 0 && n.error->width() > 0) {
                const double old_err = n.error->estimation();
                const double alt_err = n.alternate->error->estimation();
                const double fn = 1.0 / static_cast<double>(n.alternate->error->width()) +
                                  1.0 / static_cast<double>(n.error->width());
                const double bound = std::sqrt(2.0 * old_err * (1.0 - old_err) *
                                               std::log(2.0 / config_.alternate_confidence) * fn);
                if (bound < old_err - alt_err) {
                    replace = true;
                } else if (bound < alt_err - old_err) {
                    n.alternate.reset();
                }
            }
            if (replace) {
                slot = std::move(n.alternate);
                learn_subtree(slot, x, y, w);
                return;
            }
        }
    }
    if (n.is_leaf) {
        update_leaf(n, x, y, w);
        return;
    }
    if (n.alternate) {
        learn_subtree(n.alternate, x, y, w);
        ++n.alternate_seen;
    }
    learn_path(n.children[child_index(n, x, schema_.numeric_count)], x, y, w, error);
}

void HoeffdingTree::update_leaf(Node& leaf, const InstanceView& x, HeatLabel y, double w) {
    const auto c = static_cast<std::size_t>(y);
    leaf.dist[c] += w;
    for (std::size_t f = 0; f < schema_.numeric_count; ++f) {
        leaf.numeric[f * 2 + c].add(x.numeric[f], w);
    }
    for (std::size_t f = 0; f < schema_.cardinalities.size(); ++f) {
        const auto v = std::min<std::uint32_t>(x.categorical[f], schema_.cardinalities[f] - 1);
        leaf.categorical[f][v * 2 + c] += static_cast<float>(w);
    }
    if (leaf.weight() - leaf.weight_at_last_eval >= config_.grace_period) {
        if (config_.max_depth == 0 || leaf.depth < config_.max_depth) {
            attempt_split(leaf);
        }
        leaf.weight_at_last_eval = leaf.weight();
    }
}

std::vector<std::size_t> HoeffdingTree::candidate_features() {
    const std::size_t total = schema_.feature_count();
    std::vector<std::size_t> features(total);
    std::iota(features.begin(), features.end(), std::size_t{0});
    const std::size_t m = config_.feature_subset;
    if (m == 0 || m >= total) {
        return features;
    }
    for (std::size_t i = 0; i < m; ++i) {
        const auto j = i + static_cast<std::size_t>(rng_() % (total - i));
        std::swap(features[i], features[j]);
    }
    features.resize(m);
    std::sort(features.begin(), features.end());
    return features;
}

void HoeffdingTree::attempt_split(Node& leaf) {
    const double total = leaf.weight();
    if (leaf.dist[0] <= 0.0 || leaf.dist[1] <= 0.0) {
        return;
    }
    const double parent_h = entropy(leaf.dist[0], leaf.dist[1]);
    const double min_branch = config_.min_branch_fraction * total;

    auto evaluate = [&](const std::array<double, 2>& left, const std::array<double, 2>& right) {
        const double wl = left[0] + left[1];
        const double wr = right[0] + right[1];
        if (wl < min_branch || wr < min_branch) {
            return -1.0;
        }
        return parent_h - (wl * entropy(left[0], left[1]) + wr * entropy(right[0], right[1])) /
                              (wl + wr);
    };

    std::vector<Candidate> best_per_feature;
    for (const auto f : candidate_features()) {
        Candidate best;
        best.gain = -1.0;
        if (f < schema_.numeric_count) {
            const auto& s0 = leaf.numeric[f * 2];
            const auto& s1 = leaf.numeric[f * 2 + 1];
            const double lo = std::min(s0.min(), s1.min());
            const double hi = std::max(s0.max(), s1.max());
            if (!(hi > lo)) {
                continue;
            }
            const std::size_t probes = config_.numeric_probes;
            std::vector<double> thresholds;
            thresholds.reserve(probes + 1);
            for (std::size_t i = 1; i <= probes; ++i) {
                thresholds.push_back(lo + (hi - lo) * static_cast<double>(i) /
                                              static_cast<double>(probes + 1));
            }
            // disjoint class ranges: the middle of the gap separates them exactly
            if (s0.n() > 0.0 && s1.n() > 0.0) {
                if (s0.max() < s1.min()) thresholds.push_back((s0.max() + s1.min()) / 2.0);
                if (s1.max() < s0.min()) thresholds.push_back((s1.max() + s0.min()) / 2.0);
            }
            for (const double v : thresholds) {
                std::array<double, 2> left{};
                for (std::size_t c = 0; c < 2; ++c) {
                    const auto& s = leaf.numeric[f * 2 + c];
                    if (s.n() <= 0.0 || v < s.min()) {
                        left[c] = 0.0;
                    } else if (v >= s.max()) {
                        left[c] = s.n();
                    } else {
                        left[c] = s.n() * s.cdf(v);
                    }
                }
                const std::array<double, 2> right{leaf.dist[0] - left[0], leaf.dist[1] - left[1]};
                const double gain = evaluate(left, right);
                if (gain > best.gain) {
                    best.gain = gain;
                    best.test = SplitTest{f, false, v, 0};
                    best.branches = {left, right};
                }
            }
        } else {
            const std::size_t cf = f - schema_.numeric_count;
            const auto& counts = leaf.categorical[cf];
            for (std::uint32_t v = 0; v < schema_.cardinalities[cf]; ++v) {
                const std::array<double, 2> left{counts[v * 2], counts[v * 2 + 1]};
                if (left[0] + left[1] <= 0.0) {
                    continue;
                }
                const std::array<double, 2> right{leaf.dist[0] - left[0], leaf.dist[1] - left[1]};
                const double gain = evaluate(left, right);
                if (gain > best.gain) {
                    best.gain = gain;
                    best.test = SplitTest{f, true, 0.0, v};
                    best.branches = {left, right};
                }
            }
        }
        if (best.gain > 0.0) {
            best_per_feature.push_back(best);
        }
    }
    if (best_per_feature.empty()) {
        return;
    }
    std::stable_sort(best_per_feature.begin(), best_per_feature.end(),
                     [](const Candidate& a, const Candidate& b) { return a.gain > b.gain; });
    const Candidate& best = best_per_feature[0];
    // not splitting has merit 0
    const double second = best_per_feature.size() > 1 ? best_per_feature[1].gain : 0.0;
    const double eps = hoeffding_bound(1.0, config_.split_confidence, total);
    if (!(best.gain - second > eps || eps < config_.tie_threshold)) {
        return;
    }

    leaf.is_leaf = false;
    leaf.test = best.test;
    for (std::size_t b = 0; b < 2; ++b) {
        auto dist = best.branches[b];
        dist[0] = std::max(dist[0], 0.0);
        dist[1] = std::max(dist[1], 0.0);
        leaf.children[b] = make_leaf(leaf.depth + 1, dist);
    }
    leaf.numeric.clear();
    leaf.numeric.shrink_to_fit();
    leaf.categorical.clear();
    leaf.categorical.shrink_to_fit();
    if (config_.adaptive) {
        leaf.warning = std::make_unique<AdwinDetector>(config_.warning_delta);
    }
}

// ---------------------------------------------------------------------------

namespace {

template <typename NodeT, typename Fn>
void visit(const NodeT* node, Fn&& fn, bool include_alternates) {
    if (!node) return;
    fn(*node);
    if (!node->is_leaf) {
        visit(node->children[0].get(), fn, include_alternates);
        visit(node->children[1].get(), fn, include_alternates);
    }
    if (include_alternates && node->alternate) {
        visit(node->alternate.get(), fn, include_alternates);
    }
}

}  // namespace

std::size_t HoeffdingTree::node_count() const {
    std::size_t count = 0;
    visit(root_.get(), [&](const Node&) { ++count; }, false);
    return count;
}

std::size_t HoeffdingTree::leaf_count() const {
    std::size_t count = 0;
    visit(root_.get(), [&](const Node& n) { count += n.is_leaf ? 1 : 0; }, false);
    return count;
}

std::size_t HoeffdingTree::alternate_count() const {
    std::size_t count = 0;
    visit(root_.get(), [&](const Node& n) { count += n.alternate ? 1 : 0; }, true);
    return count;
}

std::size_t HoeffdingTree::depth() const {
    std::size_t d = 0;
    const std::size_t base = root_ ? root_->depth : 0;
    visit(root_.get(), [&](const Node& n) { d = std::max(d, n.depth - base); }, false);
    return d;
}

std::vector<SplitTest> HoeffdingTree::splits() const {
    std::vector<SplitTest> out;
    visit(root_.get(), [&](const Node& n) { if (!n.is_leaf) out.push_back(n.test); }, false);
    return out;
}

double HoeffdingTree::leaf_weight(const InstanceView& x) const {
    return root_ ? route(*root_, x).weight() : 0.0;
}

}  // namespace hammer
