#include <doctest.h>

#include <random>
#include <unordered_map>

#include "hammer/errors.hpp"
#include "hammer/heat_sketch.hpp"
#include "oracles.hpp"

using namespace hammer;

TEST_CASE("empty sketch and single increments") {
    CountMinSketch s;
    CHECK(s.depth() == 4);
    CHECK(s.width() == 2048);
    CHECK(s.estimate(42) == 0);
    s.increment(42);
    CHECK(s.estimate(42) == 1);
    s.decrement(42);
    CHECK(s.estimate(42) == 0);
}

TEST_CASE("estimates never undercount an exact table") {
    CountMinSketch s(4, 64, 7);
    std::unordered_map<std::uint64_t, std::uint32_t> exact;
    std::mt19937_64 rng(1);
    for (int i = 0; i < 5000; ++i) {
        const auto k = rng() % 500;
        s.increment(k);
        ++exact[k];
    }
    for (const auto& [k, c] : exact) CHECK(s.estimate(k) >= c);

    CountMinSketch wide(4, 2048, 7);
    for (int i = 0; i < 5; ++i) wide.increment(99);
    CHECK(wide.estimate(99) == 5);
    wide.decrement(99);
    wide.decrement(99);
    CHECK(wide.estimate(99) == 3);
}

TEST_CASE("forced collision with one row of width two") {
    CountMinSketch s(1, 2, 3);
    const std::uint64_t a = 1;
    std::uint64_t b = 2;
    while (s.slot(0, b) != s.slot(0, a)) ++b;
    for (int i = 0; i < 3; ++i) s.increment(a);
    for (int i = 0; i < 2; ++i) s.increment(b);
    CHECK(s.estimate(a) == 5);
    CHECK(s.estimate(b) == 5);
    CHECK(s.estimate(a) == s.counter(0, s.slot(0, a)));
}

TEST_CASE("decrement of an unseen key underflows") {
    CountMinSketch s;
    CHECK_THROWS_AS(s.decrement(5), CounterUnderflow);
    s.increment(5);
    s.decrement(5);
    CHECK_THROWS_AS(s.decrement(5), CounterUnderflow);
}

TEST_CASE("invalid dimensions") {
    CHECK_THROWS_AS(CountMinSketch(0, 16), InvalidConfig);
    CHECK_THROWS_AS(CountMinSketch(2, 1), InvalidConfig);
}

TEST_CASE("row hashing depends on the seed and stays in range") {
    CountMinSketch a(4, 2048, 1);
    CountMinSketch b(4, 2048, 2);
    int same = 0;
    for (std::uint64_t k = 0; k < 1000; ++k) {
        for (std::size_t r = 0; r < 4; ++r) REQUIRE(a.slot(r, k) < 2048);
        same += a.slot(0, k) == b.slot(0, k);
    }
    CHECK(same < 20);
}

TEST_CASE("uniform stream of 10000 keys meets the classic bound") {
    const auto r = oracle::sketch_stream(17, 10000, 10000, 10000);
    CHECK(r.underestimates == 0);
    CHECK(r.within_fraction() >= 1.0 - std::exp(-4.0));
}

TEST_CASE("windowed stream with paired increments and decrements") {
    const auto r = oracle::sketch_stream(42, 100000, 65536, 20000);
    CHECK(r.queries == 100000);
    CHECK(r.underestimates == 0);
    CHECK(r.bound == 87);
    CHECK(r.within_fraction() >= 0.98);
    CHECK(r.seconds <= 10.0);
}

TEST_CASE("wider sketches overestimate less") {
    double previous = -1.0;
    for (std::size_t width : {64, 256, 1024, 4096}) {
        CountMinSketch s(4, width, 11);
        std::unordered_map<std::uint64_t, std::uint32_t> exact;
        std::mt19937_64 rng(5);
        for (int i = 0; i < 20000; ++i) {
            const auto k = rng() % 4000;
            s.increment(k);
            ++exact[k];
        }
        double excess = 0.0;
        for (const auto& [k, c] : exact) excess += s.estimate(k) - c;
        if (previous >= 0.0) CHECK(excess < previous);
        previous = excess;
    }
}
