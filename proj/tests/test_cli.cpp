#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

const std::string kCli = HAMMER_CLI;

struct Workdir {
    fs::path root;
    Workdir() {
        root = fs::temp_directory_path() / ("hammer_cli_" + std::to_string(::getpid()));
        fs::create_directories(root);
    }
    ~Workdir() { fs::remove_all(root); }
    std::string operator/(const std::string& name) const { return (root / name).string(); }
};

int run(const std::string& args) {
    const std::string cmd = kCli + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void spit(const std::string& path, const std::string& text) {
    std::ofstream(path, std::ios::binary) << text;
}

std::size_t line_count(const std::string& text) {
    return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
}

const char* kTwoPhases = R"({"master_seed": 1, "phases": [
    {"pattern": "zipf_hotspot", "length": 1000, "working_set_pages": 50},
    {"pattern": "sequential", "length": 1000, "working_set_pages": 8}]})";

const char* kSmallPipeline = R"({"queue": {"capacity": 256, "min_fill": 16},
    "threshold": {"period": 500}, "metrics_window": 100})";

}  // namespace

TEST_CASE("generate writes every record and is repeatable") {
    Workdir w;
    spit(w / "gen.json", kTwoPhases);
    REQUIRE(run("--config " + w / "gen.json" + " generate --out " + w / "a.csv") == 0);
    REQUIRE(run("--config " + w / "gen.json" + " generate --out " + w / "b.csv") == 0);
    const auto a = slurp(w / "a.csv");
    CHECK(line_count(a) == 2001);
    CHECK(a.rfind("seq,tid,pc,addr,size,op\n", 0) == 0);
    CHECK(a == slurp(w / "b.csv"));
    REQUIRE(run("--seed 2 --config " + w / "gen.json" + " generate --out " + w / "c.csv") == 0);
    CHECK(a != slurp(w / "c.csv"));
}

TEST_CASE("exit codes") {
    Workdir w;
    spit(w / "gen.json", kTwoPhases);
    spit(w / "bad.json", "{\"phases\": [");
    spit(w / "pipe.json", kSmallPipeline);
    spit(w / "bad_pipe.json", R"({"queue": {"size": 3}})");
    spit(w / "bad.csv", "seq,tid,pc,addr,size,op\n0,0,0x1,0x2,8,R\n1,0,0x1,0x2,8,Z\n");
    REQUIRE(run("--config " + w / "gen.json" + " generate --out " + w / "t.csv") == 0);

    CHECK(run("--config " + w / "bad.json" + " generate --out " + w / "x.csv") == 3);
    CHECK(run("replay --trace " + w / "missing.csv") == 1);
    CHECK(run("replay --trace " + w / "bad.csv") == 2);
    CHECK(run("--config " + w / "bad_pipe.json" + " replay --trace " + w / "t.csv") == 3);
    CHECK(run("compare --trace " + w / "t.csv" + " --learners nb") == 4);
    CHECK(run("compare --trace " + w / "t.csv" + " --learners nb,svm") == 3);
    CHECK(run("batch-vs-online --trace " + w / "t.csv" + " --split 1.0") == 4);
    CHECK(run("frobnicate") == 4);
    CHECK(run("") == 4);
}

TEST_CASE("replay of a trace shorter than the queue labels nothing") {
    Workdir w;
    spit(w / "gen.json", kTwoPhases);
    REQUIRE(run("--config " + w / "gen.json" + " generate --out " + w / "t.csv") == 0);
    REQUIRE(run("--report " + w / "r.json" + " replay --trace " + w / "t.csv") == 0);
    const auto doc = nlohmann::json::parse(slurp(w / "r.json"));
    CHECK(doc.at("labeled") == 0);
    CHECK(doc.at("records") == 2000);
    CHECK(doc.at("accuracy").is_null());
    CHECK(doc.contains("note"));
}

TEST_CASE("replay is byte-for-byte repeatable and writes a timeline") {
    Workdir w;
    spit(w / "gen.json", kTwoPhases);
    spit(w / "pipe.json", kSmallPipeline);
    REQUIRE(run("--config " + w / "gen.json" + " generate --out " + w / "t.csv") == 0);
    const auto args = " replay --trace " + w / "t.csv" + " --learner arf";
    REQUIRE(run("--seed 7 --config " + w / "pipe.json" + " --report " + w / "a.json" +
                " --timeline " + w / "a.csv" + args) == 0);
    REQUIRE(run("--seed 7 --config " + w / "pipe.json" + " --report " + w / "b.json" + args) == 0);
    CHECK(slurp(w / "a.json") == slurp(w / "b.json"));
    const auto doc = nlohmann::json::parse(slurp(w / "a.json"));
    CHECK(doc.at("learner") == "arf");
    CHECK(doc.at("labeled") == 2000 - 256);
    const auto timeline = slurp(w / "a.csv");
    CHECK(timeline.rfind("start_seq,accuracy,f1,p,slow_band_rate,pingpong\n", 0) == 0);
    CHECK(line_count(timeline) == 1 + doc.at("windows").size());
}

TEST_CASE("self-comparison gives t = 0 and p = 1") {
    Workdir w;
    spit(w / "gen.json", kTwoPhases);
    spit(w / "pipe.json", kSmallPipeline);
    REQUIRE(run("--config " + w / "gen.json" + " generate --out " + w / "t.csv") == 0);
    REQUIRE(run("--config " + w / "pipe.json" + " --report " + w / "c.json" + " compare --trace " +
                w / "t.csv" + " --learners nb,nb") == 0);
    const auto doc = nlohmann::json::parse(slurp(w / "c.json"));
    const auto& runs = doc.at("runs");
    REQUIRE(runs.size() == 2);
    auto first = runs[0];
    auto second = runs[1];
    const auto tt = second.at("ttest");
    CHECK(tt.at("vs") == "nb");
    CHECK(tt.at("accuracy").at("t") == 0.0);
    CHECK(tt.at("accuracy").at("p_value") == 1.0);
    second.erase("ttest");
    first.erase("ttest");
    CHECK(first == second);
}

TEST_CASE("batch-vs-online on a stationary trace shows no gap") {
    Workdir w;
    spit(w / "gen.json", R"({"master_seed": 3, "phases": [
        {"pattern": "zipf_hotspot", "length": 400000, "working_set_pages": 1000,
         "zipf_s": 1.0, "pc_pool": 16, "write_ratio": 0.1}]})");
    REQUIRE(run("--config " + w / "gen.json" + " generate --out " + w / "t.csv") == 0);
    REQUIRE(run("--report " + w / "b.json" + " batch-vs-online --trace " + w / "t.csv" +
                " --split 0.8 --learner arf") == 0);
    const auto doc = nlohmann::json::parse(slurp(w / "b.json"));
    const auto& s = doc.at("summary");
    CHECK(s.at("split") == 0.8);
    const double gap = s.at("accuracy_gap").get<double>();
    CHECK(std::abs(gap) <= 0.03);
}
