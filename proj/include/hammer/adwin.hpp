#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace hammer {

// ADWIN change detector over a stream of observations in [0, 1]. The window
// is stored as an exponential histogram: row i holds up to kMaxBuckets + 1
// buckets that each summarize 2^i observations. Every kClock updates the
// window is scanned for a split whose sub-window means differ by more than
// the delta-cut; the oldest buckets are dropped until none does.
class AdwinDetector {
public:
    static constexpr double kDefaultDelta = 0.002;
    static constexpr int kMaxBuckets = 5;
    static constexpr int kClock = 32;
    static constexpr int kMinSubWindow = 5;

    explicit AdwinDetector(double delta = kDefaultDelta) : delta_(delta) {}

    // Returns true when the window shrank.
    bool update(double value);

    double estimation() const { return width_ > 0 ? total_ / static_cast<double>(width_) : 0.0; }
    std::uint64_t width() const { return width_; }
    double delta() const { return delta_; }
    // Window variance (per observation).
    double variance() const { return width_ > 0 ? variance_ / static_cast<double>(width_) : 0.0; }

private:
    struct Bucket {
        double total = 0.0;
        double variance = 0.0;
    };
    // Buckets of one row, oldest first.
    struct Row {
        std::array<Bucket, kMaxBuckets + 1> buckets;
        int size = 0;

        void pop_front(int n);
        void push_back(const Bucket& b) { buckets[static_cast<std::size_t>(size++)] = b; }
    };

    void insert(double value);
    void compress();
    void drop_oldest();
    bool cut(std::uint64_t n0, std::uint64_t n1, double u0, double u1, double v, double dd) const;

    double delta_;
    std::uint64_t width_ = 0;
    double total_ = 0.0;
    double variance_ = 0.0;
    std::uint64_t time_ = 0;
    std::vector<Row> rows_;
};

}  // namespace hammer
