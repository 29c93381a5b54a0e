#pragma once

#include <array>
#include <vector>

#include "hammer/learners.hpp"

namespace hammer {

// Gaussian likelihoods for numeric features, Laplace-smoothed counts for
// categorical ones, priors from class counts.
class NaiveBayes final : public OnlineClassifier {
public:
    explicit NaiveBayes(FeatureSchema schema);

    Prediction predict(const InstanceView& x) const override;
    void learn(const InstanceView& x, HeatLabel label) override;
    std::string_view name() const override { return "nb"; }

    // Unnormalized log-posterior of each class (Cold, Hot).
    std::array<double, 2> log_joint(const InstanceView& x) const;

private:
    FeatureSchema schema_;
    std::array<double, 2> class_count_{};
    std::vector<GaussianStat> numeric_;          // [feature][class]
    std::vector<std::vector<double>> category_;  // [feature] -> [value][class]
};

}  // namespace hammer
