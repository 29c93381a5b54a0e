#include <iomanip>
#include <sstream>

#include "hammer/runner.hpp"

namespace hammer {

using nlohmann::json;

GeneratorConfig benchmark_generator_config(std::uint64_t seed) {
    GeneratorConfig g;
    g.master_seed = seed;
    g.page_size_log2 = 12;

    // graph-like hotspot
    PhaseSpec ranks;
    ranks.pattern = AccessPattern::ZipfHotspot;
    ranks.length = 500'000;
    ranks.working_set_pages = 1000;
    ranks.zipf_s = 1.0;
    ranks.pc_pool = 16;
    ranks.write_ratio = 0.1;
    ranks.access_size = 64;

    // distance-matrix sweep
    PhaseSpec matrix;
    matrix.pattern = AccessPattern::Strided;
    matrix.length = 400'000;
    matrix.working_set_pages = 1024;
    matrix.stride_bytes = 4160;
    matrix.pc_pool = 12;
    matrix.write_ratio = 0.05;
    matrix.access_size = 16;

    // map/reduce buffer scan
    PhaseSpec scan;
    scan.pattern = AccessPattern::Sequential;
    scan.length = 800'000;
    scan.working_set_pages = 512;
    scan.pc_pool = 8;
    scan.write_ratio = 0.3;
    scan.access_size = 128;

    // key-value lookups; starts at 85% of the trace
    PhaseSpec lookups;
    lookups.pattern = AccessPattern::ZipfHotspot;
    lookups.length = 300'000;
    lookups.working_set_pages = 1000;
    lookups.zipf_s = 1.0;
    lookups.pc_pool = 16;
    lookups.write_ratio = 0.1;
    lookups.access_size = 8;

    g.phases = {ranks, matrix, scan, lookups};
    return g;
}

PipelineConfig benchmark_pipeline_config(std::uint64_t seed) {
    PipelineConfig c;
    c.seed = seed;
    return c;
}

std::uint64_t benchmark_drift_seq() {
    const auto g = benchmark_generator_config(0);
    std::uint64_t seq = 0;
    for (std::size_t i = 0; i + 1 < g.phases.size(); ++i) seq += g.phases[i].length;
    return seq;
}

namespace {

std::string fmt(double v, int precision = 4) {
    std::ostringstream out;
    out << std::fixed << std::setprecision(precision) << v;
    return out.str();
}

}  // namespace

BenchReport run_bench(std::uint64_t seed) {
    BenchReport report;
    report.seed = seed;
    const auto trace = generate_trace(benchmark_generator_config(seed));
    const auto config = benchmark_pipeline_config(seed);
    const auto records = prepare_records(trace, config);
    report.records = records.size();

    report.comparison = compare_learners(
        records, config,
        {LearnerKind::Lru2Q, LearnerKind::NaiveBayes, LearnerKind::HoeffdingAdaptiveTree,
         LearnerKind::AdaptiveRandomForest});
    const auto& runs = report.comparison.runs;
    const auto acc = [&](std::size_t i) { return runs[i].scores ? runs[i].scores->accuracy : 0.0; };
    const auto f1 = [&](std::size_t i) { return runs[i].scores ? runs[i].scores->f1 : 0.0; };
    const double lru = acc(0), nb = acc(1), hat = acc(2), arf = acc(3);

    PipelineConfig arf_config = config;
    arf_config.learner = LearnerKind::AdaptiveRandomForest;
    report.batch = batch_vs_online(records, arf_config, kBenchmarkSplit, runs[3]);

    BenchCriterion c1{1, "classifier ordering", false, ""};
    c1.passed = arf > hat && hat > nb && arf - lru >= 0.10 && arf >= 0.85 && f1(3) >= 0.75;
    c1.detail = "acc arf=" + fmt(arf) + " hat=" + fmt(hat) + " nb=" + fmt(nb) + " lru2q=" +
                fmt(lru) + " f1 arf=" + fmt(f1(3));
    report.criteria.push_back(c1);

    BenchCriterion c2{2, "arf vs lru2q paired t-test", false, ""};
    if (runs[3].ttest) {
        const auto& t = runs[3].ttest->accuracy;
        c2.passed = t.n >= 30 && t.p_value < 0.05 && t.t > 0;
        c2.detail = "t=" + fmt(t.t) + " p=" + fmt(t.p_value, 6) + " n=" + std::to_string(t.n);
    } else {
        c2.detail = "too few windows";
    }
    report.criteria.push_back(c2);

    BenchCriterion c3{3, "batch vs online after drift", false, ""};
    const auto drift_seq = benchmark_drift_seq();
    const double online_post = mean_accuracy_from(report.batch.online.windows, drift_seq);
    const double frozen_post = mean_accuracy_from(report.batch.frozen.windows, drift_seq);
    c3.passed = online_post - frozen_post >= 0.10;
    c3.detail = "post-drift acc online=" + fmt(online_post) + " frozen=" + fmt(frozen_post);
    report.criteria.push_back(c3);
    return report;
}

json to_json(const BenchReport& r) {
    json criteria = json::array();
    for (const auto& c : r.criteria) {
        criteria.push_back({{"id", c.id}, {"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    }
    return {{"seed", r.seed},
            {"records", r.records},
            {"criteria", criteria},
            {"comparison", to_json(r.comparison)},
            {"batch_vs_online", to_json(r.batch)}};
}

}  // namespace hammer
