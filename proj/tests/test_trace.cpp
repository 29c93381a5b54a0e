#include <doctest.h>

#include <boost/math/distributions/chi_squared.hpp>

#include <cmath>
#include <map>
#include <sstream>

#include "hammer/errors.hpp"
#include "hammer/trace.hpp"

using namespace hammer;

namespace {

PhaseSpec phase(AccessPattern pattern, std::uint64_t length, std::uint64_t pages,
                std::uint64_t stride = 64) {
    PhaseSpec ph;
    ph.pattern = pattern;
    ph.length = length;
    ph.working_set_pages = pages;
    ph.stride_bytes = stride;
    return ph;
}

}  // namespace

TEST_CASE("parse_trace_line decodes reads and writes") {
    const auto r = parse_trace_line("0,1,0x400123,0x7f0000001000,8,R");
    CHECK(r.seq == 0);
    CHECK(r.tid == 1);
    CHECK(r.pc == 0x400123);
    CHECK(r.addr == 0x7f0000001000);
    CHECK(r.size == 8);
    CHECK(r.op == AccessOp::Read);

    const auto w = parse_trace_line("5,0,0x10,0x20,64,W");
    CHECK(w == AccessRecord{5, 0, 0x10, 0x20, 64, AccessOp::Write});
}

TEST_CASE("parse_trace_line rejects bad lines") {
    CHECK_THROWS_AS(parse_trace_line("5,0,0x10,0x20,64,X"), MalformedLine);
    CHECK_THROWS_AS(parse_trace_line("5,0,0x10,0x20,64"), MalformedLine);
    CHECK_THROWS_AS(parse_trace_line("5,0,0x10,0x20,0,R"), MalformedLine);
    CHECK_THROWS_AS(parse_trace_line("5,0,0x10,0x20,4097,R"), MalformedLine);
    CHECK_THROWS_AS(parse_trace_line("a,0,0x10,0x20,8,R"), MalformedLine);
    try {
        parse_trace_line("1,2,3", 17);
        FAIL("expected MalformedLine");
    } catch (const MalformedLine& e) {
        CHECK(e.line_number() == 17);
    }
}

TEST_CASE("format and parse round-trip") {
    const AccessRecord r{123456789, 3, 0xdeadbeef, 0x7fff00001234, 4096, AccessOp::Write};
    CHECK(parse_trace_line(format_trace_line(r)) == r);
}

TEST_CASE("read_trace reports file line numbers") {
    std::istringstream ok(std::string(kTraceHeader) + "\n0,0,0x1,0x2,8,R\n1,0,0x1,0x3,8,W\n");
    const auto recs = read_trace(ok);
    REQUIRE(recs.size() == 2);
    CHECK(recs[1].op == AccessOp::Write);

    std::istringstream bad(std::string(kTraceHeader) + "\n0,0,0x1,0x2,8,R\n1,0,0x1,0x3,8,Q\n");
    try {
        read_trace(bad);
        FAIL("expected MalformedLine");
    } catch (const MalformedLine& e) {
        CHECK(e.line_number() == 3);
    }

    std::istringstream headless("0,0,0x1,0x2,8,R\n");
    CHECK_THROWS_AS(read_trace(headless), MalformedLine);
}

TEST_CASE("write_trace then read_trace is lossless") {
    GeneratorConfig cfg;
    cfg.master_seed = 9;
    cfg.phases.push_back(phase(AccessPattern::UniformRandom, 500, 64));
    cfg.phases.back().write_ratio = 0.5;
    const auto recs = generate_trace(cfg);
    std::stringstream buf;
    write_trace(buf, recs);
    CHECK(read_trace(buf) == recs);
}

TEST_CASE("sequential phase walks the working set") {
    GeneratorConfig cfg;
    PhaseSpec ph;
    ph.pattern = AccessPattern::Sequential;
    ph.length = 3;
    ph.working_set_pages = 1;
    ph.access_size = 64;
    ph.base_addr = 0x1000;
    cfg.phases.push_back(ph);
    const auto recs = generate_trace(cfg);
    REQUIRE(recs.size() == 3);
    CHECK(recs[0].addr == 0x1000);
    CHECK(recs[1].addr == 0x1040);
    CHECK(recs[2].addr == 0x1080);
    for (std::size_t i = 0; i < recs.size(); ++i) CHECK(recs[i].seq == i);
}

TEST_CASE("phases concatenate with continuous seq") {
    GeneratorConfig cfg;
    cfg.phases.push_back(phase(AccessPattern::Sequential, 1000, 4));
    cfg.phases.push_back(phase(AccessPattern::UniformRandom, 1000, 4));
    const auto recs = generate_trace(cfg);
    REQUIRE(recs.size() == 2000);
    CHECK(total_length(cfg) == 2000);
    CHECK(recs[999].tid == 0);
    CHECK(recs[1000].tid == 1);
    CHECK(recs[1999].seq == 1999);
}

TEST_CASE("zipf hotspot matches the exact pmf") {
    constexpr std::uint64_t pages = 1000;
    constexpr std::uint64_t n = 100000;
    constexpr double s = 1.2;
    GeneratorConfig cfg;
    cfg.master_seed = 2024;
    PhaseSpec ph;
    ph.pattern = AccessPattern::ZipfHotspot;
    ph.length = n;
    ph.working_set_pages = pages;
    ph.zipf_s = s;
    ph.base_addr = 0;
    cfg.phases.push_back(ph);

    std::vector<double> observed(pages, 0.0);
    for (const auto& r : generate_trace(cfg)) {
        const auto page = page_of(r.addr, cfg.page_size_log2);
        REQUIRE(page < pages);
        observed[page] += 1.0;
    }

    double norm = 0.0;
    for (std::uint64_t k = 1; k <= pages; ++k) norm += std::pow(static_cast<double>(k), -s);
    double chi2 = 0.0;
    for (std::uint64_t k = 0; k < pages; ++k) {
        const double expected = n * std::pow(static_cast<double>(k + 1), -s) / norm;
        chi2 += (observed[k] - expected) * (observed[k] - expected) / expected;
    }
    const boost::math::chi_squared dist(static_cast<double>(pages - 1));
    const double critical = boost::math::quantile(boost::math::complement(dist, 0.01));
    CHECK(chi2 < critical);
    // rank order of the head follows the pmf
    CHECK(observed[0] > observed[1]);
    CHECK(observed[1] > observed[2]);
    CHECK(observed[2] > observed[9]);
}

TEST_CASE("generation is deterministic") {
    GeneratorConfig cfg;
    cfg.master_seed = 77;
    cfg.phases.push_back(phase(AccessPattern::ZipfHotspot, 5000, 300));
    cfg.phases.push_back(phase(AccessPattern::Strided, 5000, 300, 4160));
    std::ostringstream a;
    std::ostringstream b;
    write_trace(a, generate_trace(cfg));
    write_trace(b, generate_trace(cfg));
    CHECK(a.str() == b.str());

    cfg.master_seed = 78;
    std::ostringstream c;
    write_trace(c, generate_trace(cfg));
    CHECK(a.str() != c.str());
}

TEST_CASE("generated records respect phase parameters") {
    GeneratorConfig cfg;
    cfg.master_seed = 5;
    PhaseSpec ph;
    ph.pattern = AccessPattern::UniformRandom;
    ph.length = 20000;
    ph.working_set_pages = 50;
    ph.pc_pool = 4;
    ph.write_ratio = 0.25;
    ph.access_size = 16;
    ph.base_addr = 1ULL << 30;
    ph.tid = 9;
    cfg.phases.push_back(ph);
    std::map<std::uint64_t, int> pcs;
    std::size_t writes = 0;
    for (const auto& r : generate_trace(cfg)) {
        CHECK(r.tid == 9);
        CHECK(r.size == 16);
        CHECK(r.addr >= (1ULL << 30));
        CHECK(r.addr + r.size <= (1ULL << 30) + 50 * 4096);
        ++pcs[r.pc];
        writes += r.op == AccessOp::Write;
    }
    CHECK(pcs.size() <= 4);
    CHECK(std::abs(static_cast<double>(writes) / 20000.0 - 0.25) < 0.02);
}

TEST_CASE("sampling") {
    GeneratorConfig cfg;
    cfg.master_seed = 3;
    cfg.phases.push_back(phase(AccessPattern::UniformRandom, 100000, 1000));
    const auto recs = generate_trace(cfg);

    CHECK(sample_trace(recs, 1.0, 1) == recs);

    // 3 sigma of Binomial(100000, 0.1)
    const double sigma = std::sqrt(100000.0 * 0.1 * 0.9);
    const auto kept = sample_trace(recs, 0.1, 11);
    CHECK(std::abs(static_cast<double>(kept.size()) - 10000.0) <= 3.0 * sigma);
    for (std::size_t i = 1; i < kept.size(); ++i) CHECK(kept[i - 1].seq < kept[i].seq);
    CHECK(sample_trace(recs, 0.1, 11) == kept);

    CHECK_THROWS_AS(sample_trace(recs, 0.0, 1), InvalidRate);
    CHECK_THROWS_AS(sample_trace(recs, 1.5, 1), InvalidRate);
    CHECK_THROWS_AS(TraceSampler(-0.1, 1), InvalidRate);
}

TEST_CASE("generator config json") {
    GeneratorConfig cfg;
    cfg.master_seed = 42;
    PhaseSpec ph;
    ph.pattern = AccessPattern::Strided;
    ph.length = 10;
    ph.working_set_pages = 8;
    ph.stride_bytes = 128;
    ph.base_addr = 4096;
    ph.tid = 2;
    cfg.phases.push_back(ph);
    const auto back = parse_generator_config(generator_config_to_json(cfg));
    CHECK(generator_config_to_json(back) == generator_config_to_json(cfg));
    CHECK(back.phases.at(0).base_addr == 4096);

    CHECK_THROWS_AS(parse_generator_config("{\"phases\": ["), InvalidConfig);
    CHECK_THROWS_AS(parse_generator_config(R"({"phases": [], "bogus": 1})"), InvalidConfig);
    CHECK_THROWS_AS(parse_generator_config(R"({"phases": []})"), InvalidConfig);
    CHECK_THROWS_AS(
        parse_generator_config(R"({"phases": [{"pattern": "spiral", "length": 5}]})"),
        InvalidConfig);
    CHECK_THROWS_AS(
        parse_generator_config(R"({"phases": [{"pattern": "sequential", "length": 0}]})"),
        InvalidConfig);
    CHECK_THROWS_AS(load_generator_config("/nonexistent/gen.json"), IoError);
}
