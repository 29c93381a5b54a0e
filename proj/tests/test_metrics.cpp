#include <doctest.h>

#include <random>

#include "hammer/errors.hpp"
#include "hammer/metrics.hpp"
#include "oracles.hpp"

using namespace hammer;

namespace {

constexpr auto H = HeatLabel::Hot;
constexpr auto C = HeatLabel::Cold;

ConfusionMatrix counts(std::uint64_t tp, std::uint64_t fp, std::uint64_t fn, std::uint64_t tn) {
    ConfusionMatrix m;
    m.tp = tp;
    m.fp = fp;
    m.fn = fn;
    m.tn = tn;
    return m;
}

}  // namespace

TEST_CASE("confusion updates treat hot as positive") {
    ConfusionMatrix m;
    m.update(H, H);
    CHECK(m == counts(1, 0, 0, 0));
    m.update(H, C);
    CHECK(m.fp == 1);
    m.update(C, H);
    CHECK(m.fn == 1);
    m.update(C, C);
    CHECK(m.tn == 1);
    CHECK(m.total() == 4);
}

TEST_CASE("scores: hand-computed example") {
    const auto s = scores(counts(3, 1, 2, 4));
    const auto o = oracle::hand_scores(3, 1, 2, 4);
    CHECK(s.accuracy == doctest::Approx(0.7).epsilon(1e-4));
    CHECK(s.precision == doctest::Approx(0.75).epsilon(1e-4));
    CHECK(s.recall == doctest::Approx(0.6).epsilon(1e-4));
    CHECK(s.f1 == doctest::Approx(0.6667).epsilon(1e-4));
    CHECK(s.f1 == doctest::Approx(o.f1).epsilon(1e-12));
    CHECK(s.accuracy == doctest::Approx(o.accuracy).epsilon(1e-12));
}

TEST_CASE("scores: perfect and degenerate matrices") {
    const auto perfect = scores(counts(5, 0, 0, 5));
    CHECK(perfect.accuracy == 1.0);
    CHECK(perfect.f1 == 1.0);
    const auto none = scores(counts(0, 0, 3, 7));
    CHECK(none.precision == 0.0);
    CHECK(none.recall == 0.0);
    CHECK(none.f1 == 0.0);
    CHECK_THROWS_AS(scores(ConfusionMatrix{}), EmptyMatrix);
}

TEST_CASE("f1 lies between precision and recall") {
    std::mt19937_64 rng(8);
    for (int i = 0; i < 500; ++i) {
        const auto m = counts(1 + rng() % 50, rng() % 50, rng() % 50, rng() % 50);
        const auto s = scores(m);
        CHECK(s.f1 >= std::min(s.precision, s.recall) - 1e-12);
        CHECK(s.f1 <= std::max(s.precision, s.recall) + 1e-12);
        CHECK(s.f1 >= 0.0);
        CHECK(s.f1 <= 1.0);
    }
}

TEST_CASE("windowed series recomputes each window from its own counts") {
    WindowedSeries w(4);
    CHECK_FALSE(w.add(0, H, H));
    CHECK_FALSE(w.add(1, H, H));
    CHECK_FALSE(w.add(2, C, C));
    CHECK(w.add(3, C, H));
    for (std::uint64_t s = 4; s < 8; ++s) w.add(s, H, C);
    w.add(8, H, H);  // partial window
    REQUIRE(w.windows().size() == 2);
    CHECK(w.windows()[0].start_seq == 0);
    CHECK(w.windows()[0].accuracy == doctest::Approx(0.75));
    CHECK(w.windows()[0].f1 == doctest::Approx(0.8));
    CHECK(w.windows()[1].start_seq == 4);
    CHECK(w.windows()[1].accuracy == 0.0);
    CHECK(w.windows()[1].matrix == counts(0, 4, 0, 0));
    CHECK(w.accuracies() == std::vector<double>{0.75, 0.0});
}

TEST_CASE("paired t-test: d = 1..5") {
    const std::vector<double> a{1, 2, 3, 4, 5};
    const std::vector<double> b(5, 0.0);
    const auto r = paired_t_test(a, b);
    const auto o = oracle::paired_t(a, b);
    CHECK(r.n == 5);
    CHECK(r.t == doctest::Approx(4.2426).epsilon(1e-4));
    CHECK(std::abs(r.p_value - 0.0132) < 1e-4);
    CHECK(std::abs(r.t - o.t) < 1e-4);
    CHECK(std::abs(r.p_value - o.p) < 1e-4);
}

TEST_CASE("paired t-test agrees with density quadrature") {
    std::mt19937_64 rng(21);
    std::normal_distribution<double> noise(0.0, 1.0);
    for (std::size_t n : {3, 8, 30, 120}) {
        std::vector<double> a(n);
        std::vector<double> b(n);
        for (std::size_t i = 0; i < n; ++i) {
            a[i] = noise(rng) + 0.3;
            b[i] = noise(rng);
        }
        const auto r = paired_t_test(a, b);
        const auto o = oracle::paired_t(a, b);
        CHECK(std::abs(r.t - o.t) < 1e-9);
        CHECK(std::abs(r.p_value - o.p) < 1e-4);
        CHECK(paired_t_test(b, a).t == doctest::Approx(-r.t));
    }
}

TEST_CASE("paired t-test: degenerate inputs") {
    const std::vector<double> a{0.5, 0.6, 0.7};
    const auto same = paired_t_test(a, a);
    CHECK(same.t == 0.0);
    CHECK(same.p_value == 1.0);

    const std::vector<double> ones{1.0, 1.0, 1.0};
    const std::vector<double> zeros{0.0, 0.0, 0.0};
    const auto flat = paired_t_test(ones, zeros);
    CHECK(flat.p_value == 0.0);
    CHECK(flat.degenerate_variance);
    CHECK(flat.t > 0.0);

    CHECK_THROWS_AS(paired_t_test(a, std::vector<double>{1.0}), LengthMismatch);
    CHECK_THROWS_AS(paired_t_test(std::vector<double>{1.0}, std::vector<double>{2.0}), TooShort);
}
