#include "hammer/metrics.hpp"

#include <cmath>
#include <limits>

#include <boost/math/distributions/students_t.hpp>

#include "hammer/errors.hpp"

namespace hammer {

void ConfusionMatrix::update(HeatLabel predicted, HeatLabel actual) {
    const bool p = predicted == HeatLabel::Hot;
    const bool a = actual == HeatLabel::Hot;
    if (p && a) {
        ++tp;
    } else if (p) {
        ++fp;
    } else if (a) {
        ++fn;
    } else {
        ++tn;
    }
}

Scores scores(const ConfusionMatrix& m) {
    const auto total = m.total();
    if (total == 0) {
        throw EmptyMatrix("no labeled outcomes");
    }
    Scores s;
    s.accuracy = static_cast<double>(m.tp + m.tn) / static_cast<double>(total);
    s.precision = m.tp + m.fp == 0 ? 0.0 : static_cast<double>(m.tp) / static_cast<double>(m.tp + m.fp);
    s.recall = m.tp + m.fn == 0 ? 0.0 : static_cast<double>(m.tp) / static_cast<double>(m.tp + m.fn);
    s.f1 = s.precision + s.recall == 0.0
               ? 0.0
               : 2.0 * s.precision * s.recall / (s.precision + s.recall);
    return s;
}

WindowedSeries::WindowedSeries(std::size_t window_size) : window_size_(window_size) {
    if (window_size < 1) {
        throw InvalidConfig("window size must be >= 1");
    }
}

bool WindowedSeries::add(std::uint64_t seq, HeatLabel predicted, HeatLabel actual) {
    if (current_.matrix.total() == 0) {
        current_.start_seq = seq;
    }
    current_.matrix.update(predicted, actual);
    if (current_.matrix.total() < window_size_) {
        return false;
    }
    const auto s = scores(current_.matrix);
    current_.accuracy = s.accuracy;
    current_.f1 = s.f1;
    windows_.push_back(current_);
    current_ = WindowStats{};
    return true;
}

std::vector<double> WindowedSeries::accuracies() const {
    std::vector<double> out;
    out.reserve(windows_.size());
    for (const auto& w : windows_) out.push_back(w.accuracy);
    return out;
}

std::vector<double> WindowedSeries::f1s() const {
    std::vector<double> out;
    out.reserve(windows_.size());
    for (const auto& w : windows_) out.push_back(w.f1);
    return out;
}

TTestResult paired_t_test(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        throw LengthMismatch("paired series lengths differ: " + std::to_string(a.size()) +
                             " vs " + std::to_string(b.size()));
    }
    const std::size_t n = a.size();
    if (n < 2) {
        throw TooShort("paired t-test needs at least 2 pairs");
    }
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mean += a[i] - b[i];
    }
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = a[i] - b[i] - mean;
        ss += d * d;
    }
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));

    TTestResult r;
    r.n = n;
    if (sd == 0.0) {
        r.degenerate_variance = true;
        if (mean == 0.0) {
            r.t = 0.0;
            r.p_value = 1.0;
        } else {
            r.t = mean > 0 ? std::numeric_limits<double>::infinity()
                           : -std::numeric_limits<double>::infinity();
            r.p_value = 0.0;
        }
        return r;
    }
    r.t = mean / (sd / std::sqrt(static_cast<double>(n)));
    const boost::math::students_t dist(static_cast<double>(n - 1));
    r.p_value = 2.0 * boost::math::cdf(boost::math::complement(dist, std::fabs(r.t)));
    return r;
}

}  // namespace hammer
