#include "hammer/naive_bayes.hpp"

#include <cmath>
#include <limits>

namespace hammer {

NaiveBayes::NaiveBayes(FeatureSchema schema) : schema_(std::move(schema)) {
    numeric_.resize(schema_.numeric_count * 2);
    for (auto card : schema_.cardinalities) {
        category_.emplace_back(static_cast<std::size_t>(card) * 2, 0.0);
    }
}

void NaiveBayes::learn(const InstanceView& x, HeatLabel label) {
    const auto c = static_cast<std::size_t>(label);
    class_count_[c] += 1.0;
    for (std::size_t f = 0; f < schema_.numeric_count; ++f) {
        numeric_[f * 2 + c].add(x.numeric[f]);
    }
    for (std::size_t f = 0; f < category_.size(); ++f) {
        const auto v = std::min<std::uint32_t>(x.categorical[f], schema_.cardinalities[f] - 1);
        category_[f][v * 2 + c] += 1.0;
    }
}

std::array<double, 2> NaiveBayes::log_joint(const InstanceView& x) const {
    std::array<double, 2> lj{};
    for (std::size_t c = 0; c < 2; ++c) {
        if (class_count_[c] == 0.0) {
            lj[c] = -std::numeric_limits<double>::infinity();
            continue;
        }
        double s = std::log(class_count_[c] / (class_count_[0] + class_count_[1]));
        for (std::size_t f = 0; f < schema_.numeric_count; ++f) {
            s += numeric_[f * 2 + c].log_pdf(x.numeric[f]);
        }
        for (std::size_t f = 0; f < category_.size(); ++f) {
            const auto card = schema_.cardinalities[f];
            const auto v = std::min<std::uint32_t>(x.categorical[f], card - 1);
            s += std::log((category_[f][v * 2 + c] + 1.0) / (class_count_[c] + card));
        }
        lj[c] = s;
    }
    return lj;
}

Prediction NaiveBayes::predict(const InstanceView& x) const {
    if (class_count_[0] + class_count_[1] == 0.0) {
        return {HeatLabel::Cold, 0.5};
    }
    const auto lj = log_joint(x);
    double hot;
    if (lj[0] == -std::numeric_limits<double>::infinity()) {
        hot = 1.0;
    } else if (lj[1] == -std::numeric_limits<double>::infinity()) {
        hot = 0.0;
    } else {
        // logistic of the log-odds, stable for large magnitudes
        const double d = lj[1] - lj[0];
        hot = d >= 0 ? 1.0 / (1.0 + std::exp(-d)) : std::exp(d) / (1.0 + std::exp(d));
    }
    return {hot > 0.5 ? HeatLabel::Hot : HeatLabel::Cold, hot};
}

}  // namespace hammer
