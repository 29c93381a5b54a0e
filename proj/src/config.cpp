#include "hammer/config.hpp"

#include <fstream>
#include <sstream>

#include "hammer/errors.hpp"

namespace hammer {

using nlohmann::json;

namespace {

void reject_unknown(const json& obj, std::initializer_list<std::string_view> allowed,
                    std::string_view where) {
    if (!obj.is_object()) {
        throw InvalidConfig(std::string(where) + " must be a JSON object");
    }
    for (const auto& [key, _] : obj.items()) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
            throw InvalidConfig(std::string(where) + ": unknown key '" + key + "'");
        }
    }
}

template <typename T>
void read(const json& obj, const char* key, T& out) {
    if (obj.contains(key)) {
        out = obj.at(key).get<T>();
    }
}

void read_tree(const json& t, HoeffdingTreeConfig& c, std::string_view where) {
    reject_unknown(t,
                   {"grace_period", "split_confidence", "tie_threshold", "numeric_probes",
                    "min_branch_fraction", "adaptive", "warning_delta", "drift_delta",
                    "alternate_min_instances", "alternate_confidence", "feature_subset",
                    "max_depth"},
                   where);
    read(t, "grace_period", c.grace_period);
    read(t, "split_confidence", c.split_confidence);
    read(t, "tie_threshold", c.tie_threshold);
    read(t, "numeric_probes", c.numeric_probes);
    read(t, "min_branch_fraction", c.min_branch_fraction);
    read(t, "adaptive", c.adaptive);
    read(t, "warning_delta", c.warning_delta);
    read(t, "drift_delta", c.drift_delta);
    read(t, "alternate_min_instances", c.alternate_min_instances);
    read(t, "alternate_confidence", c.alternate_confidence);
    read(t, "feature_subset", c.feature_subset);
    read(t, "max_depth", c.max_depth);
    if (!(c.split_confidence > 0.0 && c.split_confidence <= 1.0)) {
        throw InvalidConfig(std::string(where) + ": split_confidence must be in (0, 1]");
    }
    if (c.numeric_probes < 1) {
        throw InvalidConfig(std::string(where) + ": numeric_probes must be >= 1");
    }
}

json tree_to_json(const HoeffdingTreeConfig& c) {
    return {{"grace_period", c.grace_period},
            {"split_confidence", c.split_confidence},
            {"tie_threshold", c.tie_threshold},
            {"numeric_probes", c.numeric_probes},
            {"min_branch_fraction", c.min_branch_fraction},
            {"adaptive", c.adaptive},
            {"warning_delta", c.warning_delta},
            {"drift_delta", c.drift_delta},
            {"alternate_min_instances", c.alternate_min_instances},
            {"alternate_confidence", c.alternate_confidence},
            {"feature_subset", c.feature_subset},
            {"max_depth", c.max_depth}};
}

}  // namespace

PipelineConfig pipeline_config_from_json(const json& doc) {
    PipelineConfig c;
    try {
        reject_unknown(doc,
                       {"page_size_log2", "sampling_rate", "seed", "learner", "metrics_window",
                        "sketch", "queue", "threshold", "nb", "hat", "arf", "lru2q"},
                       "pipeline config");
        read(doc, "page_size_log2", c.page_size_log2);
        read(doc, "sampling_rate", c.sampling_rate);
        read(doc, "seed", c.seed);
        read(doc, "metrics_window", c.metrics_window);
        if (doc.contains("learner")) {
            c.learner = learner_from_string(doc.at("learner").get<std::string>());
        }
        if (doc.contains("sketch")) {
            const auto& s = doc.at("sketch");
            reject_unknown(s, {"depth", "width", "seed"}, "sketch");
            read(s, "depth", c.sketch.depth);
            read(s, "width", c.sketch.width);
            read(s, "seed", c.sketch.seed);
        }
        if (doc.contains("queue")) {
            const auto& q = doc.at("queue");
            reject_unknown(q, {"capacity", "exit_window", "min_fill"}, "queue");
            read(q, "capacity", c.queue.capacity);
            read(q, "exit_window", c.queue.exit_window);
            read(q, "min_fill", c.queue.min_fill);
        }
        if (doc.contains("threshold")) {
            const auto& t = doc.at("threshold");
            reject_unknown(t,
                           {"p_init", "p_min", "p_max", "alpha", "beta", "theta_max", "period",
                            "mode", "cpu_cap_raises", "hot_capacity_pages", "cold_capacity_pages",
                            "cpu_source"},
                           "threshold");
            if (t.contains("p_init") && !t.at("p_init").is_null()) {
                c.threshold.p_init = t.at("p_init").get<double>();
            }
            read(t, "p_min", c.threshold.p_min);
            read(t, "p_max", c.threshold.p_max);
            read(t, "alpha", c.threshold.alpha);
            read(t, "beta", c.threshold.beta);
            read(t, "theta_max", c.threshold.theta_max);
            read(t, "period", c.threshold.period);
            read(t, "cpu_cap_raises", c.threshold.cpu_cap_raises);
            read(t, "hot_capacity_pages", c.tier.hot_capacity_pages);
            read(t, "cold_capacity_pages", c.tier.cold_capacity_pages);
            if (t.contains("mode")) {
                const auto mode = t.at("mode").get<std::string>();
                if (mode == "as_written") {
                    c.threshold.mode = ThresholdMode::AsWritten;
                } else if (mode == "relative_change") {
                    c.threshold.mode = ThresholdMode::RelativeChange;
                } else {
                    throw InvalidConfig("threshold: unknown mode '" + mode + "'");
                }
            }
            if (t.contains("cpu_source")) {
                const auto& s = t.at("cpu_source");
                const auto kind = s.at("kind").get<std::string>();
                if (kind == "constant") {
                    reject_unknown(s, {"kind", "value"}, "cpu_source");
                    c.cpu.kind = CpuSource::Kind::Constant;
                    read(s, "value", c.cpu.value);
                } else if (kind == "schedule") {
                    reject_unknown(s, {"kind", "values"}, "cpu_source");
                    c.cpu.kind = CpuSource::Kind::Schedule;
                    c.cpu.values = s.at("values").get<std::vector<double>>();
                } else if (kind == "proxy") {
                    reject_unknown(s, {"kind", "cost_factor"}, "cpu_source");
                    c.cpu.kind = CpuSource::Kind::Proxy;
                    read(s, "cost_factor", c.cpu.cost_factor);
                } else {
                    throw InvalidConfig("cpu_source: unknown kind '" + kind + "'");
                }
            }
        }
        if (doc.contains("nb")) {
            reject_unknown(doc.at("nb"), {}, "nb");
        }
        if (doc.contains("hat")) {
            read_tree(doc.at("hat"), c.hat, "hat");
        }
        if (doc.contains("arf")) {
            const auto& a = doc.at("arf");
            reject_unknown(a,
                           {"trees", "lambda", "bagging", "feature_subset", "warning_delta",
                            "drift_delta", "drift_detection", "accuracy_window", "weight_floor",
                            "tree"},
                           "arf");
            read(a, "trees", c.arf.trees);
            read(a, "lambda", c.arf.lambda);
            read(a, "bagging", c.arf.bagging);
            read(a, "feature_subset", c.arf.feature_subset);
            read(a, "warning_delta", c.arf.warning_delta);
            read(a, "drift_delta", c.arf.drift_delta);
            read(a, "drift_detection", c.arf.drift_detection);
            read(a, "accuracy_window", c.arf.accuracy_window);
            read(a, "weight_floor", c.arf.weight_floor);
            if (a.contains("tree")) {
                read_tree(a.at("tree"), c.arf.tree, "arf.tree");
            }
        }
        if (doc.contains("lru2q")) {
            const auto& l = doc.at("lru2q");
            reject_unknown(l, {"a1in_counts_hot", "a1in_capacity", "am_capacity", "a1out_capacity"},
                           "lru2q");
            read(l, "a1in_counts_hot", c.a1in_counts_hot);
            if (l.contains("a1in_capacity") || l.contains("am_capacity") ||
                l.contains("a1out_capacity")) {
                TwoQConfig q = TwoQConfig::scaled_to(c.queue.capacity);
                read(l, "a1in_capacity", q.a1in_capacity);
                read(l, "am_capacity", q.am_capacity);
                read(l, "a1out_capacity", q.a1out_capacity);
                c.lru2q = q;
            }
        }
    } catch (const json::exception& e) {
        throw InvalidConfig(std::string("pipeline config: ") + e.what());
    }
    validate(c);
    return c;
}

PipelineConfig parse_pipeline_config(std::string_view json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw InvalidConfig(std::string("pipeline config: ") + e.what());
    }
    return pipeline_config_from_json(doc);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open '" + path + "'");
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

PipelineConfig load_pipeline_config(const std::string& path) {
    return parse_pipeline_config(read_text_file(path));
}

json to_json(const PipelineConfig& c) {
    json cpu;
    switch (c.cpu.kind) {
        case CpuSource::Kind::Constant: cpu = {{"kind", "constant"}, {"value", c.cpu.value}}; break;
        case CpuSource::Kind::Schedule: cpu = {{"kind", "schedule"}, {"values", c.cpu.values}}; break;
        case CpuSource::Kind::Proxy: cpu = {{"kind", "proxy"}, {"cost_factor", c.cpu.cost_factor}}; break;
    }
    json threshold = {{"p_min", c.threshold.p_min},
                      {"p_max", c.threshold.p_max},
                      {"alpha", c.threshold.alpha},
                      {"beta", c.threshold.beta},
                      {"theta_max", c.threshold.theta_max},
                      {"period", c.threshold.period},
                      {"mode", c.threshold.mode == ThresholdMode::AsWritten ? "as_written"
                                                                            : "relative_change"},
                      {"cpu_cap_raises", c.threshold.cpu_cap_raises},
                      {"hot_capacity_pages", c.tier.hot_capacity_pages},
                      {"cold_capacity_pages", c.tier.cold_capacity_pages},
                      {"cpu_source", cpu}};
    threshold["p_init"] = c.threshold.p_init ? json(*c.threshold.p_init) : json(nullptr);
    json lru2q = {{"a1in_counts_hot", c.a1in_counts_hot}};
    if (c.lru2q) {
        lru2q["a1in_capacity"] = c.lru2q->a1in_capacity;
        lru2q["am_capacity"] = c.lru2q->am_capacity;
        lru2q["a1out_capacity"] = c.lru2q->a1out_capacity;
    }
    return {{"page_size_log2", c.page_size_log2},
            {"sampling_rate", c.sampling_rate},
            {"seed", c.seed},
            {"learner", std::string(to_string(c.learner))},
            {"metrics_window", c.metrics_window},
            {"sketch", {{"depth", c.sketch.depth}, {"width", c.sketch.width}, {"seed", c.sketch.seed}}},
            {"queue",
             {{"capacity", c.queue.capacity},
              {"exit_window", c.queue.exit_window},
              {"min_fill", c.queue.min_fill}}},
            {"threshold", threshold},
            {"hat", tree_to_json(c.hat)},
            {"arf",
             {{"trees", c.arf.trees},
              {"lambda", c.arf.lambda},
              {"bagging", c.arf.bagging},
              {"feature_subset", c.arf.feature_subset},
              {"warning_delta", c.arf.warning_delta},
              {"drift_delta", c.arf.drift_delta},
              {"drift_detection", c.arf.drift_detection},
              {"accuracy_window", c.arf.accuracy_window},
              {"weight_floor", c.arf.weight_floor},
              {"tree", tree_to_json(c.arf.tree)}}},
            {"lru2q", lru2q}};
}

}  // namespace hammer
