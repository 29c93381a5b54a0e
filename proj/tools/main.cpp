#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hammer/config.hpp"
#include "hammer/errors.hpp"
#include "hammer/runner.hpp"
#include "hammer/trace.hpp"

namespace {

enum ExitCode { kOk = 0, kIo = 1, kMalformed = 2, kInvalidConfig = 3, kUsage = 4 };

struct Options {
    std::optional<std::uint64_t> seed;
    std::string config;
    std::string report;
    std::string timeline;
    bool quiet = false;
    std::string trace;
    std::string out;
    std::string learner;
    std::vector<std::string> learners;
    double split = hammer::kBenchmarkSplit;
};

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw hammer::IoError("cannot open " + path + " for writing");
    out << text;
    if (!out) throw hammer::IoError("write failed: " + path);
}

void emit_report(const Options& opt, const nlohmann::json& doc) {
    const std::string text = doc.dump(2) + "\n";
    if (!opt.report.empty()) {
        write_file(opt.report, text);
    } else if (!opt.quiet) {
        std::cout << text;
    }
}

hammer::PipelineConfig pipeline_config(const Options& opt) {
    auto cfg = opt.config.empty() ? hammer::PipelineConfig{} : hammer::load_pipeline_config(opt.config);
    if (opt.seed) cfg.seed = *opt.seed;
    if (!opt.learner.empty()) cfg.learner = hammer::learner_from_string(opt.learner);
    hammer::validate(cfg);
    return cfg;
}

std::vector<hammer::AccessRecord> load_records(const Options& opt, const hammer::PipelineConfig& cfg) {
    if (opt.trace.empty()) throw hammer::UsageError("--trace is required");
    const auto trace = hammer::read_trace_file(opt.trace);
    return hammer::prepare_records(trace, cfg);
}

void say(const Options& opt, const std::string& line) {
    if (!opt.quiet) std::cerr << line << '\n';
}

int cmd_generate(const Options& opt) {
    auto gen = opt.config.empty() ? hammer::benchmark_generator_config(opt.seed.value_or(42))
                                  : hammer::load_generator_config(opt.config);
    if (opt.seed) gen.master_seed = *opt.seed;
    if (opt.out.empty()) throw hammer::UsageError("--out is required");
    const auto records = hammer::generate_trace(gen);
    hammer::write_trace_file(opt.out, records);
    say(opt, "wrote " + std::to_string(records.size()) + " records to " + opt.out);
    return kOk;
}

int cmd_replay(const Options& opt) {
    const auto cfg = pipeline_config(opt);
    const auto records = load_records(opt, cfg);
    const auto report = hammer::run_pipeline(records, cfg);
    emit_report(opt, hammer::to_json(report));
    if (!opt.timeline.empty()) write_file(opt.timeline, hammer::timeline_csv(report));
    if (report.scores) {
        std::ostringstream line;
        line << report.learner << " accuracy=" << report.scores->accuracy << " f1=" << report.scores->f1;
        say(opt, line.str());
    } else {
        say(opt, report.learner + ": no labeled outcomes");
    }
    return kOk;
}

int cmd_compare(const Options& opt) {
    if (opt.learners.size() < 2) throw hammer::UsageError("compare needs at least two learners");
    std::vector<hammer::LearnerKind> kinds;
    for (const auto& name : opt.learners) kinds.push_back(hammer::learner_from_string(name));
    const auto cfg = pipeline_config(opt);
    const auto records = load_records(opt, cfg);
    const auto report = hammer::compare_learners(records, cfg, kinds);
    emit_report(opt, hammer::to_json(report));
    for (const auto& run : report.runs) {
        std::ostringstream line;
        line << run.learner << " accuracy=" << (run.scores ? run.scores->accuracy : 0.0)
             << " f1=" << (run.scores ? run.scores->f1 : 0.0);
        if (run.ttest) {
            line << " vs " << run.ttest->vs << ": t=" << run.ttest->accuracy.t
                 << " p=" << run.ttest->accuracy.p_value << " n=" << run.ttest->accuracy.n;
        }
        say(opt, line.str());
    }
    return kOk;
}

int cmd_batch_vs_online(const Options& opt) {
    if (!(opt.split > 0.0 && opt.split < 1.0)) throw hammer::UsageError("--split must be in (0, 1)");
    const auto cfg = pipeline_config(opt);
    const auto records = load_records(opt, cfg);
    const auto report = hammer::batch_vs_online(records, cfg, opt.split);
    emit_report(opt, hammer::to_json(report));
    std::ostringstream line;
    line << "online=" << report.online_accuracy << " frozen=" << report.frozen_accuracy
         << " gap=" << report.accuracy_gap;
    say(opt, line.str());
    return kOk;
}

int cmd_bench(const Options& opt) {
    const auto report = hammer::run_bench(opt.seed.value_or(42));
    emit_report(opt, hammer::to_json(report));
    if (!opt.timeline.empty() && !report.comparison.runs.empty()) {
        write_file(opt.timeline, hammer::timeline_csv(report.comparison.runs.back()));
    }
    for (const auto& c : report.criteria) {
        std::cerr << (c.passed ? "PASS" : "FAIL") << " criterion " << c.id << " (" << c.name
                  << "): " << c.detail << '\n';
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hot/cold page identification and trace replay"};
    app.require_subcommand(1);
    app.fallthrough();

    Options opt;
    std::uint64_t seed = 0;
    auto* seed_opt = app.add_option("--seed", seed, "master seed");
    app.add_option("--config", opt.config, "JSON config file");
    app.add_option("--report", opt.report, "JSON report path (stdout when omitted)");
    app.add_option("--timeline", opt.timeline, "CSV timeline path");
    app.add_flag("--quiet", opt.quiet, "suppress progress output");

    auto* generate = app.add_subcommand("generate", "write a synthetic trace");
    generate->add_option("--out", opt.out, "trace output path")->required();

    auto* replay = app.add_subcommand("replay", "run one pipeline over a trace");
    replay->add_option("--trace", opt.trace, "trace CSV")->required();
    replay->add_option("--learner", opt.learner, "nb, hat, arf or lru2q");

    auto* compare = app.add_subcommand("compare", "run several learners over one trace");
    compare->add_option("--trace", opt.trace, "trace CSV")->required();
    compare->add_option("--learners", opt.learners, "learners, first is the t-test reference")
        ->delimiter(',')
        ->required();

    auto* batch = app.add_subcommand("batch-vs-online", "freeze learning after a split");
    batch->add_option("--trace", opt.trace, "trace CSV")->required();
    batch->add_option("--split", opt.split, "fraction of records learned by the frozen model");
    batch->add_option("--learner", opt.learner, "nb, hat, arf or lru2q");

    auto* bench = app.add_subcommand("bench", "run the built-in benchmark and print pass/fail");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }
    if (*seed_opt) opt.seed = seed;

    try {
        if (*generate) return cmd_generate(opt);
        if (*replay) return cmd_replay(opt);
        if (*compare) return cmd_compare(opt);
        if (*batch) return cmd_batch_vs_online(opt);
        if (*bench) return cmd_bench(opt);
    } catch (const hammer::MalformedLine& e) {
        std::cerr << "error: malformed trace: " << e.what() << '\n';
        return kMalformed;
    } catch (const hammer::IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kIo;
    } catch (const hammer::InvalidConfig& e) {
        std::cerr << "error: invalid config: " << e.what() << '\n';
        return kInvalidConfig;
    } catch (const hammer::UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const hammer::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInvalidConfig;
    }
    return kUsage;
}
