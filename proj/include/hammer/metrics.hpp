#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "hammer/heat_label.hpp"

namespace hammer {

// Hot is the positive class.
struct ConfusionMatrix {
    std::uint64_t tp = 0;
    std::uint64_t fp = 0;
    std::uint64_t tn = 0;
    std::uint64_t fn = 0;

    void update(HeatLabel predicted, HeatLabel actual);
    std::uint64_t total() const { return tp + fp + tn + fn; }

    friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

struct Scores {
    double accuracy = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

// Throws EmptyMatrix when no outcome has been observed.
Scores scores(const ConfusionMatrix& m);

struct WindowStats {
    std::uint64_t start_seq = 0;
    ConfusionMatrix matrix;
    double accuracy = 0.0;
    double f1 = 0.0;
};

// Non-overlapping windows of `window_size` labeled outcomes. Scores are
// recomputed from each window's own counts; a trailing partial window is not
// reported.
class WindowedSeries {
public:
    static constexpr std::size_t kDefaultWindow = 1000;

    explicit WindowedSeries(std::size_t window_size = kDefaultWindow);

    // Returns true when this outcome completed a window.
    bool add(std::uint64_t seq, HeatLabel predicted, HeatLabel actual);

    const std::vector<WindowStats>& windows() const { return windows_; }
    std::size_t window_size() const { return window_size_; }

    std::vector<double> accuracies() const;
    std::vector<double> f1s() const;

private:
    std::size_t window_size_;
    WindowStats current_;
    std::vector<WindowStats> windows_;
};

struct TTestResult {
    double t = 0.0;
    double p_value = 1.0;
    std::size_t n = 0;
    bool degenerate_variance = false;
};

// Two-tailed paired t-test on d_i = a_i - b_i with n - 1 degrees of freedom.
TTestResult paired_t_test(std::span<const double> a, std::span<const double> b);

}  // namespace hammer
