#include <doctest.h>

#include <random>

#include "hammer/errors.hpp"
#include "hammer/threshold.hpp"

using namespace hammer;

namespace {

ThresholdState state_with(double p, double baseline = 1.0) {
    ThresholdState s;
    s.p = p;
    s.baseline_pingpong = baseline;
    s.baseline_captured = true;
    return s;
}

SystemSnapshot snap(double slow, double pingpong, double cpu) {
    SystemSnapshot s;
    s.slow_band_rate = slow;
    s.pingpong_dis = pingpong;
    s.cpu_rate = cpu;
    return s;
}

}  // namespace

TEST_CASE("cpu pressure halves p down to p_min") {
    ThresholdConfig c;
    c.p_min = 0.1;
    auto s = state_with(0.5);
    CHECK(update_threshold(s, c, snap(0.0, 0.0, 0.9)) == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(s.p == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("neutral inputs leave p unchanged in relative mode") {
    ThresholdConfig c;
    c.mode = ThresholdMode::RelativeChange;
    auto s = state_with(0.37, 4.0);
    CHECK(std::abs(update_threshold(s, c, snap(0.0, 4.0, 0.2)) - 0.37) <= 1e-12);
}

TEST_CASE("as-written mode multiplies by (1 + r) over (1 + slow)") {
    ThresholdConfig c;
    c.mode = ThresholdMode::AsWritten;
    c.alpha = 1.0;
    c.beta = 1.0;
    auto s = state_with(0.3);
    CHECK(std::abs(update_threshold(s, c, snap(0.5, 2.0, 0.2)) - 0.6) <= 1e-12);

    auto capped = state_with(0.9);
    CHECK(update_threshold(capped, c, snap(0.0, 5.0, 0.2)) == c.p_max);
}

TEST_CASE("cpu cap raise variant") {
    ThresholdConfig c;
    c.cpu_cap_raises = true;
    c.p_max = 0.95;
    auto s = state_with(0.3);
    CHECK(update_threshold(s, c, snap(0.0, 0.0, 0.85)) == doctest::Approx(0.95));
}

TEST_CASE("direction properties over a randomized grid") {
    std::mt19937_64 rng(100);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (auto mode : {ThresholdMode::AsWritten, ThresholdMode::RelativeChange}) {
        ThresholdConfig c;
        c.mode = mode;
        c.p_min = 0.0;
        c.p_max = 1.0;
        for (int i = 0; i < 100; ++i) {
            const double p = 0.05 + 0.15 * u(rng);
            const double slow = 0.9 * u(rng);
            const double pp = 5.0 * u(rng);
            const double cpu = c.theta_max * u(rng);
            const double dslow = 0.05 + 0.05 * u(rng);
            const double dpp = 0.5 + u(rng);

            auto base = state_with(p, 2.0);
            const double mid = update_threshold(base, c, snap(slow, pp, cpu));
            auto more_slow = state_with(p, 2.0);
            auto more_pp = state_with(p, 2.0);
            CHECK(update_threshold(more_slow, c, snap(slow + dslow, pp, cpu)) < mid);
            CHECK(update_threshold(more_pp, c, snap(slow, pp + dpp, cpu)) > mid);
        }
    }
}

TEST_CASE("baseline is captured once and floored at one") {
    ThresholdConfig c;
    ThresholdState s;
    s.p = 0.5;
    update_threshold(s, c, snap(0.0, 0.0, 0.0));
    CHECK(s.baseline_captured);
    CHECK(s.baseline_pingpong == 1.0);
    ThresholdState t;
    capture_baseline(t, snap(0.0, 6.0, 0.0));
    capture_baseline(t, snap(0.0, 9.0, 0.0));
    CHECK(t.baseline_pingpong == 6.0);
}

TEST_CASE("initial percentile and validation") {
    CHECK(derive_p_init(4096, 12288) == doctest::Approx(0.75));
    CHECK_THROWS_AS(derive_p_init(0, 0), InvalidConfig);
    ThresholdConfig c;
    CHECK_NOTHROW(validate(c, 0.75));
    CHECK_THROWS_AS(validate(c, 0.01), InvalidConfig);
    c.period = 0;
    CHECK_THROWS_AS(validate(c, 0.5), InvalidConfig);
}

TEST_CASE("tier model: no movement when everything is cold") {
    TierModel t(4);
    for (std::uint64_t p = 0; p < 10; ++p) t.apply(p, HeatLabel::Cold, 100);
    CHECK(t.window().migrations == 0);
    auto cpu = CpuSource::constant(0.2);
    const auto s = t.snapshot(cpu, 10);
    CHECK(s.slow_band_rate == 1.0);
    CHECK(s.pingpong_dis == 0.0);
    CHECK(s.cpu_rate == 0.2);
}

TEST_CASE("tier model: alternating labels ping-pong") {
    TierModel t(4);
    t.apply(7, HeatLabel::Hot, 8);
    t.apply(7, HeatLabel::Cold, 8);
    t.apply(7, HeatLabel::Hot, 8);
    CHECK(t.window().pingpongs >= 1);
    CHECK(t.window().migrations == 3);
    CHECK(t.tier(7) == TierModel::Tier::Hot);
}

TEST_CASE("tier model: capacity eviction counts a migration") {
    TierModel t(2);
    t.apply(1, HeatLabel::Hot, 8);
    t.apply(2, HeatLabel::Hot, 8);
    CHECK(t.window().migrations == 2);
    t.apply(3, HeatLabel::Hot, 8);
    CHECK(t.tier(1) == TierModel::Tier::Cold);
    CHECK(t.tier(2) == TierModel::Tier::Hot);
    CHECK(t.tier(3) == TierModel::Tier::Hot);
    CHECK(t.window().migrations == 4);
    CHECK(t.hot_resident() == 2);
}

TEST_CASE("tier model: byte accounting") {
    TierModel t(1);
    auto cpu = CpuSource::constant(0.0);
    CHECK(t.snapshot(cpu, 1).slow_band_rate == 0.0);
    t.apply(1, HeatLabel::Hot, 100);  // served cold, then promoted
    t.apply(1, HeatLabel::Hot, 400);
    t.apply(2, HeatLabel::Cold, 500);
    CHECK(t.snapshot(cpu, 1).slow_band_rate == doctest::Approx(0.6));
    CHECK(t.window().hot_bytes == 0);
}

TEST_CASE("cpu sources") {
    auto sched = CpuSource::schedule({0.2, 0.9});
    CHECK(sched.next(0, 1) == 0.2);
    CHECK(sched.next(0, 1) == 0.9);
    CHECK(sched.next(0, 1) == 0.9);
    auto proxy = CpuSource::proxy(2.0);
    CHECK(proxy.next(10, 100) == doctest::Approx(0.2));
    CHECK(proxy.next(1000, 100) == 1.0);
    CHECK_THROWS_AS(CpuSource::schedule({}), InvalidConfig);
}
