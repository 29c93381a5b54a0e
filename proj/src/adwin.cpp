#include "hammer/adwin.hpp"

#include <algorithm>
#include <cmath>

namespace hammer {

void AdwinDetector::Row::pop_front(int n) {
    std::copy(buckets.begin() + n, buckets.begin() + size, buckets.begin());
    size -= n;
}

void AdwinDetector::insert(double value) {
    if (rows_.empty()) {
        rows_.emplace_back();
    }
    rows_[0].push_back({value, 0.0});
    ++width_;
    if (width_ > 1) {
        const double w = static_cast<double>(width_);
        const double d = value - total_ / (w - 1.0);
        variance_ += (w - 1.0) * d * d / w;
    }
    total_ += value;
    compress();
}

void AdwinDetector::compress() {
    for (std::size_t i = 0; i < rows_.size(); ++i) {
        if (rows_[i].size <= kMaxBuckets) {
            break;
        }
        if (i + 1 == rows_.size()) {
            rows_.emplace_back();
        }
        auto& row = rows_[i];
        const double n = static_cast<double>(std::uint64_t{1} << i);
        const Bucket& a = row.buckets[0];
        const Bucket& b = row.buckets[1];
        const double du = a.total / n - b.total / n;
        const Bucket merged{a.total + b.total, a.variance + b.variance + n * du * du / 2.0};
        row.pop_front(2);
        rows_[i + 1].push_back(merged);
    }
}

void AdwinDetector::drop_oldest() {
    while (!rows_.empty() && rows_.back().size == 0) {
        rows_.pop_back();
    }
    if (rows_.empty()) {
        return;
    }
    const std::size_t level = rows_.size() - 1;
    auto& row = rows_.back();
    const Bucket b = row.buckets[0];
    row.pop_front(1);
    const auto n1 = std::uint64_t{1} << level;
    width_ -= n1;
    total_ -= b.total;
    if (width_ == 0) {
        total_ = 0.0;
        variance_ = 0.0;
    } else {
        const double fn1 = static_cast<double>(n1);
        const double w = static_cast<double>(width_);
        const double d = b.total / fn1 - total_ / w;
        variance_ -= b.variance + fn1 * w * d * d / (fn1 + w);
        if (variance_ < 0.0) variance_ = 0.0;
    }
    while (!rows_.empty() && rows_.back().size == 0) {
        rows_.pop_back();
    }
}

bool AdwinDetector::cut(std::uint64_t n0, std::uint64_t n1, double u0, double u1, double v,
                        double dd) const {
    const double diff = u0 / static_cast<double>(n0) - u1 / static_cast<double>(n1);
    const double m = 1.0 / static_cast<double>(n0 - kMinSubWindow + 1) +
                     1.0 / static_cast<double>(n1 - kMinSubWindow + 1);
    const double eps = std::sqrt(2.0 * m * v * dd) + 2.0 / 3.0 * dd * m;
    return std::fabs(diff) > eps;
}

bool AdwinDetector::update(double value) {
    insert(value);
    ++time_;
    bool changed = false;
    if (time_ % kClock != 0 || width_ <= static_cast<std::uint64_t>(kMinSubWindow)) {
        return false;
    }
    bool reduce = true;
    while (reduce) {
        reduce = false;
        std::uint64_t n0 = 0;
        std::uint64_t n1 = width_;
        double u0 = 0.0;
        double u1 = total_;
        const double v = variance();
        const double dd = std::log(2.0 * std::log(static_cast<double>(width_)) / delta_);
        // scan split points from the oldest bucket towards the newest
        for (std::size_t level = rows_.size(); level-- > 0 && !reduce;) {
            const auto size = std::uint64_t{1} << level;
            const auto& row = rows_[level];
            for (int k = 0; k < row.size; ++k) {
                n0 += size;
                n1 -= size;
                u0 += row.buckets[static_cast<std::size_t>(k)].total;
                u1 -= row.buckets[static_cast<std::size_t>(k)].total;
                if (n1 == 0) {
                    break;
                }
                if (n0 >= static_cast<std::uint64_t>(kMinSubWindow) &&
                    n1 >= static_cast<std::uint64_t>(kMinSubWindow) &&
                    cut(n0, n1, u0, u1, v, dd)) {
                    reduce = true;
                    changed = true;
                    drop_oldest();
                    break;
                }
            }
        }
    }
    return changed;
}

}  // namespace hammer
