#include "hammer/runner.hpp"

#include <cmath>
#include <iomanip>
#include <numeric>
#include <sstream>

#include "hammer/errors.hpp"
#include "hammer/random.hpp"

namespace hammer {

using nlohmann::json;

std::vector<AccessRecord> prepare_records(std::span<const AccessRecord> records,
                                          const PipelineConfig& config) {
    return sample_trace(records, config.sampling_rate, derive_seed(config.seed, 0x5A3D1E));
}

RunReport run_pipeline(std::span<const AccessRecord> records, const PipelineConfig& config,
                       std::optional<std::uint64_t> freeze_after) {
    Pipeline pipeline(config);
    for (const auto& r : records) {
        if (freeze_after && pipeline.records_processed() == *freeze_after) {
            pipeline.set_learning(false);
        }
        pipeline.process(r);
    }
    RunReport report;
    report.learner = std::string(to_string(config.learner));
    report.records = pipeline.records_processed();
    report.labeled = pipeline.labeled_count();
    report.final_p = pipeline.current_p();
    report.confusion = pipeline.matrix();
    if (report.labeled > 0) {
        report.scores = scores(pipeline.matrix());
    }
    report.windows = pipeline.timeline();
    return report;
}

namespace {

json ttest_json(const TTestResult& t) {
    return {{"t", t.t}, {"p_value", t.p_value}, {"n", t.n},
            {"degenerate_variance", t.degenerate_variance}};
}

json window_json(const TimelineRow& w) {
    return {{"start_seq", w.start_seq}, {"accuracy", w.accuracy}, {"f1", w.f1}, {"p", w.p},
            {"slow_band_rate", w.slow_band_rate}, {"pingpong", w.pingpong}};
}

std::vector<double> accuracies(std::span<const TimelineRow> rows) {
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(r.accuracy);
    return out;
}

std::vector<double> f1s(std::span<const TimelineRow> rows) {
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(r.f1);
    return out;
}

double mean_of(const std::vector<double>& v) {
    return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

}  // namespace

json to_json(const RunReport& r) {
    json doc = {{"learner", r.learner},
                {"records", r.records},
                {"labeled", r.labeled},
                {"final_p", r.final_p},
                {"confusion",
                 {{"tp", r.confusion.tp}, {"fp", r.confusion.fp}, {"tn", r.confusion.tn},
                  {"fn", r.confusion.fn}}}};
    if (r.scores) {
        doc["accuracy"] = r.scores->accuracy;
        doc["precision"] = r.scores->precision;
        doc["recall"] = r.scores->recall;
        doc["f1"] = r.scores->f1;
    } else {
        doc["accuracy"] = nullptr;
        doc["precision"] = nullptr;
        doc["recall"] = nullptr;
        doc["f1"] = nullptr;
        doc["note"] = "no labeled outcomes: trace is not longer than the evaluation queue";
    }
    doc["windows"] = json::array();
    for (const auto& w : r.windows) doc["windows"].push_back(window_json(w));
    if (r.ttest) {
        doc["ttest"] = {{"vs", r.ttest->vs},
                        {"accuracy", ttest_json(r.ttest->accuracy)},
                        {"f1", ttest_json(r.ttest->f1)}};
    }
    return doc;
}

std::string timeline_csv(const RunReport& r) {
    std::ostringstream out;
    out << "start_seq,accuracy,f1,p,slow_band_rate,pingpong\n";
    out << std::setprecision(10);
    for (const auto& w : r.windows) {
        out << w.start_seq << ',' << w.accuracy << ',' << w.f1 << ',' << w.p << ','
            << w.slow_band_rate << ',' << w.pingpong << '\n';
    }
    return out.str();
}

ComparisonReport compare_learners(std::span<const AccessRecord> records,
                                  const PipelineConfig& config,
                                  const std::vector<LearnerKind>& learners) {
    if (learners.size() < 2) {
        throw UsageError("compare needs at least two learners");
    }
    ComparisonReport report;
    for (const auto kind : learners) {
        PipelineConfig c = config;
        c.learner = kind;
        report.runs.push_back(run_pipeline(records, c));
    }
    const auto& base = report.runs.front();
    for (std::size_t i = 1; i < report.runs.size(); ++i) {
        auto& run = report.runs[i];
        if (run.windows.size() < 2) {
            continue;
        }
        const auto a = accuracies(base.windows);
        const auto b = accuracies(run.windows);
        const auto fa = f1s(base.windows);
        const auto fb = f1s(run.windows);
        // run minus base: positive t means this learner beats the first-listed one
        run.ttest = TTestBlock{base.learner, paired_t_test(b, a), paired_t_test(fb, fa)};
    }
    return report;
}

json to_json(const ComparisonReport& r) {
    json runs = json::array();
    for (const auto& run : r.runs) runs.push_back(to_json(run));
    return {{"runs", runs}};
}

double mean_accuracy_from(std::span<const TimelineRow> windows, std::uint64_t from_seq) {
    std::vector<double> v;
    for (const auto& w : windows) {
        if (w.start_seq >= from_seq) v.push_back(w.accuracy);
    }
    return mean_of(v);
}

BatchVsOnlineReport batch_vs_online(std::span<const AccessRecord> records,
                                    const PipelineConfig& config, double split,
                                    std::optional<RunReport> online) {
    if (!(split > 0.0 && split < 1.0)) {
        throw UsageError("split must be in (0, 1)");
    }
    BatchVsOnlineReport report;
    report.split = split;
    report.split_index = static_cast<std::uint64_t>(std::floor(split * static_cast<double>(records.size())));
    report.split_seq = report.split_index < records.size() ? records[report.split_index].seq
                                                           : std::numeric_limits<std::uint64_t>::max();
    report.online = online ? std::move(*online) : run_pipeline(records, config);
    report.frozen = run_pipeline(records, config, report.split_index);
    for (const auto& w : report.online.windows) {
        if (w.start_seq >= report.split_seq) report.online_tail.push_back(w);
    }
    for (const auto& w : report.frozen.windows) {
        if (w.start_seq >= report.split_seq) report.frozen_tail.push_back(w);
    }
    report.online_accuracy = mean_of(accuracies(report.online_tail));
    report.frozen_accuracy = mean_of(accuracies(report.frozen_tail));
    report.online_f1 = mean_of(f1s(report.online_tail));
    report.frozen_f1 = mean_of(f1s(report.frozen_tail));
    report.accuracy_gap = report.online_accuracy - report.frozen_accuracy;
    report.f1_gap = report.online_f1 - report.frozen_f1;
    return report;
}

json to_json(const BatchVsOnlineReport& r) {
    json online_tail = json::array();
    json frozen_tail = json::array();
    for (const auto& w : r.online_tail) online_tail.push_back(window_json(w));
    for (const auto& w : r.frozen_tail) frozen_tail.push_back(window_json(w));
    json summary = {{"split", r.split},
                    {"split_index", r.split_index},
                    {"split_seq", r.split_seq},
                    {"online_accuracy", r.online_accuracy},
                    {"frozen_accuracy", r.frozen_accuracy},
                    {"online_f1", r.online_f1},
                    {"frozen_f1", r.frozen_f1},
                    {"accuracy_gap", r.accuracy_gap},
                    {"f1_gap", r.f1_gap}};
    if (r.online_tail.size() == r.frozen_tail.size() && r.online_tail.size() >= 2) {
        summary["ttest"] = ttest_json(
            paired_t_test(accuracies(r.online_tail), accuracies(r.frozen_tail)));
    }
    return {{"summary", summary},
            {"online_windows", online_tail},
            {"frozen_windows", frozen_tail},
            {"online", to_json(r.online)},
            {"frozen", to_json(r.frozen)}};
}

}  // namespace hammer
