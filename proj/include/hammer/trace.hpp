#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hammer {

enum class AccessOp : std::uint8_t { Read, Write };

// One memory-access event.
struct AccessRecord {
    std::uint64_t seq = 0;
    std::uint32_t tid = 0;
    std::uint64_t pc = 0;
    std::uint64_t addr = 0;
    std::uint32_t size = 1;
    AccessOp op = AccessOp::Read;

    friend bool operator==(const AccessRecord&, const AccessRecord&) = default;
};

inline constexpr std::uint32_t kMaxAccessSize = 4096;
inline constexpr std::string_view kTraceHeader = "seq,tid,pc,addr,size,op";

constexpr std::uint64_t page_of(std::uint64_t addr, unsigned page_size_log2) noexcept {
    return addr >> page_size_log2;
}

// Decodes one CSV data line. `line_number` is carried by MalformedLine.
AccessRecord parse_trace_line(std::string_view line, std::size_t line_number = 0);

// Canonical CSV rendering: decimal seq/tid/size, lowercase 0x-hex pc/addr.
std::string format_trace_line(const AccessRecord& record);

// Reads a full trace (header line first). Throws MalformedLine with the
// 1-based file line number on any bad line, including a missing header.
std::vector<AccessRecord> read_trace(std::istream& in);
std::vector<AccessRecord> read_trace_file(const std::string& path);

void write_trace(std::ostream& out, std::span<const AccessRecord> records);
void write_trace_file(const std::string& path, std::span<const AccessRecord> records);

// ---------------------------------------------------------------------------
// Synthetic workload generation

enum class AccessPattern { Sequential, Strided, ZipfHotspot, UniformRandom };

struct PhaseSpec {
    AccessPattern pattern = AccessPattern::Sequential;
    std::uint64_t length = 1;
    std::uint64_t working_set_pages = 1;
    std::uint64_t stride_bytes = 64;    // Strided only
    double zipf_s = 1.0;                // ZipfHotspot only
    std::uint32_t pc_pool = 16;
    double write_ratio = 0.0;
    std::uint32_t access_size = 64;
    std::optional<std::uint64_t> base_addr;  // defaults to a per-phase region
    std::optional<std::uint32_t> tid;        // defaults to the phase index
};

struct GeneratorConfig {
    std::vector<PhaseSpec> phases;
    std::uint64_t master_seed = 0;
    unsigned page_size_log2 = 12;
};

// Throws InvalidConfig describing the first violated constraint.
void validate(const GeneratorConfig& config);

std::uint64_t total_length(const GeneratorConfig& config);

// Pull-based generator. Phases are emitted back to back with a continuous seq.
class TraceGenerator {
public:
    explicit TraceGenerator(GeneratorConfig config);

    std::optional<AccessRecord> next();

private:
    void start_phase(std::size_t index);

    GeneratorConfig config_;
    std::size_t phase_ = 0;
    std::uint64_t emitted_in_phase_ = 0;
    std::uint64_t seq_ = 0;

    std::mt19937_64 rng_;
    std::uint64_t base_ = 0;
    std::uint64_t span_bytes_ = 0;
    std::uint64_t cursor_ = 0;
    std::uint32_t tid_ = 0;
    std::vector<std::uint64_t> pcs_;
    std::size_t pc_index_ = 0;
    std::vector<double> zipf_cdf_;
};

std::vector<AccessRecord> generate_trace(const GeneratorConfig& config);

// Loop-like pc repetition probability of the synthetic control flow.
inline constexpr double kPcRepeatProbability = 0.9;

// ---------------------------------------------------------------------------
// Sampling

// Bernoulli sampler: each record is kept independently with probability `rate`.
class TraceSampler {
public:
    TraceSampler(double rate, std::uint64_t seed);

    bool keep();

private:
    double rate_;
    std::mt19937_64 rng_;
};

std::vector<AccessRecord> sample_trace(std::span<const AccessRecord> records, double rate,
                                       std::uint64_t seed);

// JSON (snake_case field names mirroring GeneratorConfig).
GeneratorConfig parse_generator_config(std::string_view json_text);
GeneratorConfig load_generator_config(const std::string& path);
std::string generator_config_to_json(const GeneratorConfig& config);

std::string_view to_string(AccessPattern pattern);

}  // namespace hammer
