#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <string_view>

#include "hammer/features.hpp"
#include "hammer/heat_label.hpp"

namespace hammer {

struct Prediction {
    HeatLabel label = HeatLabel::Cold;
    double hot_score = 0.5;  // in [0, 1]
};

// Incremental binary classifier. predict() must not change observable state.
class OnlineClassifier {
public:
    virtual ~OnlineClassifier() = default;

    virtual Prediction predict(const InstanceView& x) const = 0;
    virtual void learn(const InstanceView& x, HeatLabel label) = 0;
    virtual std::string_view name() const = 0;
};

inline constexpr double kVarianceFloor = 1e-6;

// Weighted single-pass mean/variance (West's update of Welford's method),
// plus the observed range.
class GaussianStat {
public:
    void add(double x, double weight = 1.0);

    double n() const { return n_; }
    double mean() const { return mean_; }
    double m2() const { return m2_; }
    double min() const { return min_; }
    double max() const { return max_; }

    // Population variance m2/n, or 0 with fewer than two observations.
    double raw_variance() const { return n_ >= 2.0 ? m2_ / n_ : 0.0; }
    // Variance used by likelihoods: never below `floor`.
    double variance(double floor = kVarianceFloor) const;
    double stddev(double floor = kVarianceFloor) const;

    double log_pdf(double x, double floor = kVarianceFloor) const;
    double cdf(double x) const;

private:
    double n_ = 0.0;
    double mean_ = 0.0;
    double m2_ = 0.0;
    double min_ = std::numeric_limits<double>::infinity();
    double max_ = -std::numeric_limits<double>::infinity();
};

// sqrt(R^2 ln(1/delta) / (2n)). Throws InvalidParams unless n >= 1 and
// 0 < delta <= 1.
double hoeffding_bound(double range, double delta, double n);

}  // namespace hammer
