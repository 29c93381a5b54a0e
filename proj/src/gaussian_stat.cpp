#include "hammer/learners.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hammer/errors.hpp"

namespace hammer {

void GaussianStat::add(double x, double weight) {
    if (weight <= 0.0) {
        return;
    }
    const double new_n = n_ + weight;
    const double delta = x - mean_;
    const double r = delta * weight / new_n;
    mean_ += r;
    m2_ += n_ * delta * r;
    n_ = new_n;
    min_ = std::min(min_, x);
    max_ = std::max(max_, x);
}

double GaussianStat::variance(double floor) const {
    return n_ >= 2.0 ? std::max(m2_ / n_, floor) : floor;
}

double GaussianStat::stddev(double floor) const {
    return std::sqrt(variance(floor));
}

double GaussianStat::log_pdf(double x, double floor) const {
    const double var = variance(floor);
    const double d = x - mean_;
    return -0.5 * std::log(2.0 * std::numbers::pi * var) - d * d / (2.0 * var);
}

double GaussianStat::cdf(double x) const {
    const double sd = stddev();
    return 0.5 * std::erfc(-(x - mean_) / (sd * std::numbers::sqrt2));
}

double hoeffding_bound(double range, double delta, double n) {
    if (!(n >= 1.0) || !(delta > 0.0 && delta <= 1.0)) {
        throw InvalidParams("hoeffding_bound requires n >= 1 and 0 < delta <= 1");
    }
    return std::sqrt(range * range * std::log(1.0 / delta) / (2.0 * n));
}

}  // namespace hammer
