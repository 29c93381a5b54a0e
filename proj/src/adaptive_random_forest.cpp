#include "hammer/adaptive_random_forest.hpp"

#include <algorithm>
#include <cmath>

#include "hammer/errors.hpp"
#include "hammer/random.hpp"

namespace hammer {

AdaptiveRandomForest::AdaptiveRandomForest(FeatureSchema schema, ArfConfig config,
                                           std::uint64_t seed)
    : schema_(std::move(schema)), config_(config), tree_config_(config.tree) {
    if (config_.trees < 1) {
        throw InvalidConfig("arf needs at least one tree");
    }
    tree_config_.feature_subset =
        config_.feature_subset != 0
            ? config_.feature_subset
            : static_cast<std::size_t>(
                  std::ceil(std::sqrt(static_cast<double>(schema_.feature_count()))));
    members_.reserve(config_.trees);
    for (std::size_t i = 0; i < config_.trees; ++i) {
        std::mt19937_64 rng(derive_seed(seed, i));
        const auto tree_seed = rng();
        members_.push_back(Member{HoeffdingTree(schema_, tree_config_, tree_seed),
                                  std::nullopt,
                                  AdwinDetector(config_.warning_delta),
                                  AdwinDetector(config_.drift_delta),
                                  std::vector<std::uint8_t>(config_.accuracy_window, 0),
                                  0,
                                  0,
                                  0,
                                  std::move(rng)});
    }
}

HoeffdingTree AdaptiveRandomForest::make_tree(Member& owner) {
    return HoeffdingTree(schema_, tree_config_, owner.rng());
}

void AdaptiveRandomForest::record(Member& m, bool correct) {
    if (m.window.empty()) {
        return;
    }
    if (m.window_fill == m.window.size()) {
        m.window_correct -= m.window[m.window_pos];
    } else {
        ++m.window_fill;
    }
    m.window[m.window_pos] = correct ? 1 : 0;
    m.window_correct += correct ? 1 : 0;
    m.window_pos = (m.window_pos + 1) % m.window.size();
}

double AdaptiveRandomForest::member_weight(std::size_t i) const {
    const auto& m = members_[i];
    if (m.window_fill == 0) {
        return 1.0;
    }
    const double acc = static_cast<double>(m.window_correct) / static_cast<double>(m.window_fill);
    return std::max(acc, config_.weight_floor);
}

std::size_t AdaptiveRandomForest::background_count() const {
    return static_cast<std::size_t>(std::count_if(
        members_.begin(), members_.end(), [](const Member& m) { return m.background.has_value(); }));
}

Prediction AdaptiveRandomForest::vote(std::span<const HeatLabel> labels,
                                      std::span<const double> weights) {
    double hot = 0.0;
    double total = 0.0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        total += weights[i];
        if (labels[i] == HeatLabel::Hot) hot += weights[i];
    }
    if (total <= 0.0) {
        return {HeatLabel::Cold, 0.5};
    }
    return {hot > total - hot ? HeatLabel::Hot : HeatLabel::Cold, hot / total};
}

Prediction AdaptiveRandomForest::predict(const InstanceView& x) const {
    double hot = 0.0;
    double total = 0.0;
    for (std::size_t i = 0; i < members_.size(); ++i) {
        const double w = member_weight(i);
        total += w;
        if (members_[i].tree.predict(x).label == HeatLabel::Hot) hot += w;
    }
    return {hot > total - hot ? HeatLabel::Hot : HeatLabel::Cold, hot / total};
}

void AdaptiveRandomForest::learn(const InstanceView& x, HeatLabel label) {
    for (auto& m : members_) {
        const bool correct = m.tree.predict(x).label == label;
        record(m, correct);

        int k = 1;
        if (config_.bagging) {
            std::poisson_distribution<int> poisson(config_.lambda);
            k = poisson(m.rng);
        }
        if (k == 0) {
            continue;
        }
        m.tree.learn(x, label, k);
        if (m.background) {
            m.background->learn(x, label, k);
        }
        if (!config_.drift_detection) {
            continue;
        }
        const double err = correct ? 0.0 : 1.0;
        const double warn_before = m.warning.estimation();
        if (m.warning.update(err) && m.warning.estimation() > warn_before) {
            m.background = make_tree(m);
            m.warning = AdwinDetector(config_.warning_delta);
            ++warnings_;
        }
        const double drift_before = m.drift.estimation();
        if (m.drift.update(err) && m.drift.estimation() > drift_before) {
            m.tree = m.background ? std::move(*m.background) : make_tree(m);
            m.background.reset();
            m.warning = AdwinDetector(config_.warning_delta);
            m.drift = AdwinDetector(config_.drift_delta);
            std::fill(m.window.begin(), m.window.end(), 0);
            m.window_pos = 0;
            m.window_fill = 0;
            m.window_correct = 0;
            ++drifts_;
        }
    }
}

}  // namespace hammer
