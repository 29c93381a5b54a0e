#include "hammer/trace.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "hammer/errors.hpp"
#include "hammer/random.hpp"

namespace hammer {

namespace {

template <typename T>
T parse_decimal(std::string_view field, std::size_t line_number, const char* name) {
    T value{};
    const auto* end = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(field.data(), end, value, 10);
    if (field.empty() || ec != std::errc{} || ptr != end) {
        throw MalformedLine(line_number, std::string("bad ") + name + " field '" +
                                             std::string(field) + "'");
    }
    return value;
}

std::uint64_t parse_hex(std::string_view field, std::size_t line_number, const char* name) {
    if (field.size() < 3 || field[0] != '0' || (field[1] != 'x' && field[1] != 'X')) {
        throw MalformedLine(line_number, std::string("bad ") + name + " field '" +
                                             std::string(field) + "' (expected 0x-prefixed hex)");
    }
    field.remove_prefix(2);
    std::uint64_t value = 0;
    const auto* end = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(field.data(), end, value, 16);
    if (ec != std::errc{} || ptr != end) {
        throw MalformedLine(line_number, std::string("bad ") + name + " field '0x" +
                                             std::string(field) + "'");
    }
    return value;
}

}  // namespace

AccessRecord parse_trace_line(std::string_view line, std::size_t line_number) {
    if (!line.empty() && line.back() == '\r') {
        line.remove_suffix(1);
    }
    std::string_view fields[6];
    std::size_t count = 0;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        if (count == 6) {
            throw MalformedLine(line_number, "expected 6 fields, got more");
        }
        if (comma == std::string_view::npos) {
            fields[count++] = line.substr(start);
            break;
        }
        fields[count++] = line.substr(start, comma - start);
        start = comma + 1;
    }
    if (count != 6) {
        throw MalformedLine(line_number, "expected 6 fields, got " + std::to_string(count));
    }

    AccessRecord rec;
    rec.seq = parse_decimal<std::uint64_t>(fields[0], line_number, "seq");
    rec.tid = parse_decimal<std::uint32_t>(fields[1], line_number, "tid");
    rec.pc = parse_hex(fields[2], line_number, "pc");
    rec.addr = parse_hex(fields[3], line_number, "addr");
    rec.size = parse_decimal<std::uint32_t>(fields[4], line_number, "size");
    if (rec.size < 1 || rec.size > kMaxAccessSize) {
        throw MalformedLine(line_number, "size out of range [1, 4096]");
    }
    if (fields[5] == "R") {
        rec.op = AccessOp::Read;
    } else if (fields[5] == "W") {
        rec.op = AccessOp::Write;
    } else {
        throw MalformedLine(line_number, "unknown op '" + std::string(fields[5]) + "'");
    }
    return rec;
}

std::string format_trace_line(const AccessRecord& r) {
    std::string line;
    line.reserve(64);
    char buf[24];
    auto put_dec = [&](std::uint64_t v) {
        line.append(buf, std::to_chars(buf, buf + sizeof buf, v).ptr);
    };
    auto put_hex = [&](std::uint64_t v) {
        line += "0x";
        line.append(buf, std::to_chars(buf, buf + sizeof buf, v, 16).ptr);
    };
    put_dec(r.seq);
    line += ',';
    put_dec(r.tid);
    line += ',';
    put_hex(r.pc);
    line += ',';
    put_hex(r.addr);
    line += ',';
    put_dec(r.size);
    line += ',';
    line += r.op == AccessOp::Read ? 'R' : 'W';
    return line;
}

std::vector<AccessRecord> read_trace(std::istream& in) {
    std::vector<AccessRecord> records;
    std::string line;
    std::size_t line_number = 0;
    if (!std::getline(in, line)) {
        throw MalformedLine(1, "missing header");
    }
    ++line_number;
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
    if (line != kTraceHeader) {
        throw MalformedLine(1, "bad header '" + line + "'");
    }
    while (std::getline(in, line)) {
        ++line_number;
        if (line.empty()) {
            continue;
        }
        records.push_back(parse_trace_line(line, line_number));
        if (records.size() > 1 && records.back().seq <= records[records.size() - 2].seq) {
            throw MalformedLine(line_number, "seq not strictly increasing");
        }
    }
    return records;
}

std::vector<AccessRecord> read_trace_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open trace '" + path + "'");
    }
    return read_trace(in);
}

void write_trace(std::ostream& out, std::span<const AccessRecord> records) {
    std::string buffer;
    buffer.reserve(1 << 20);
    buffer.append(kTraceHeader);
    buffer.push_back('\n');
    for (const auto& r : records) {
        buffer += format_trace_line(r);
        buffer.push_back('\n');
        if (buffer.size() > (1 << 20) - 128) {
            out.write(buffer.data(), static_cast<std::streamsize>(buffer.size()));
            buffer.clear();
        }
    }
    out.write(buffer.data(), static_cast<std::streamsize>(buffer.size()));
}

void write_trace_file(const std::string& path, std::span<const AccessRecord> records) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot open '" + path + "' for writing");
    }
    write_trace(out, records);
    if (!out) {
        throw IoError("write failed for '" + path + "'");
    }
}

// ---------------------------------------------------------------------------

std::string_view to_string(AccessPattern pattern) {
    switch (pattern) {
        case AccessPattern::Sequential: return "sequential";
        case AccessPattern::Strided: return "strided";
        case AccessPattern::ZipfHotspot: return "zipf_hotspot";
        case AccessPattern::UniformRandom: return "uniform_random";
    }
    return "?";
}

void validate(const GeneratorConfig& config) {
    if (config.phases.empty()) {
        throw InvalidConfig("generator config needs at least one phase");
    }
    if (config.page_size_log2 < 6 || config.page_size_log2 > 30) {
        throw InvalidConfig("page_size_log2 must be in [6, 30]");
    }
    for (std::size_t i = 0; i < config.phases.size(); ++i) {
        const auto& ph = config.phases[i];
        const std::string where = "phase " + std::to_string(i) + ": ";
        if (ph.length < 1) throw InvalidConfig(where + "length must be >= 1");
        if (ph.working_set_pages < 1) throw InvalidConfig(where + "working_set_pages must be >= 1");
        if (ph.pc_pool < 1) throw InvalidConfig(where + "pc_pool must be >= 1");
        if (!(ph.write_ratio >= 0.0 && ph.write_ratio <= 1.0)) {
            throw InvalidConfig(where + "write_ratio must be in [0, 1]");
        }
        if (ph.access_size < 1 || ph.access_size > kMaxAccessSize) {
            throw InvalidConfig(where + "access_size must be in [1, 4096]");
        }
        if (ph.pattern == AccessPattern::ZipfHotspot && !(ph.zipf_s > 0.0)) {
            throw InvalidConfig(where + "zipf_s must be > 0");
        }
        if (ph.pattern == AccessPattern::Strided && ph.stride_bytes < 1) {
            throw InvalidConfig(where + "stride_bytes must be >= 1");
        }
        if (ph.working_set_pages > (std::uint64_t{1} << 40 >> config.page_size_log2)) {
            throw InvalidConfig(where + "working set exceeds 1 TiB");
        }
    }
}

std::uint64_t total_length(const GeneratorConfig& config) {
    std::uint64_t total = 0;
    for (const auto& ph : config.phases) total += ph.length;
    return total;
}

TraceGenerator::TraceGenerator(GeneratorConfig config) : config_(std::move(config)) {
    validate(config_);
    start_phase(0);
}

void TraceGenerator::start_phase(std::size_t index) {
    phase_ = index;
    emitted_in_phase_ = 0;
    if (index >= config_.phases.size()) {
        return;
    }
    const auto& ph = config_.phases[index];
    rng_.seed(derive_seed(config_.master_seed, index));
    base_ = ph.base_addr.value_or((static_cast<std::uint64_t>(index) + 1) << 40);
    span_bytes_ = ph.working_set_pages << config_.page_size_log2;
    cursor_ = 0;
    tid_ = ph.tid.value_or(static_cast<std::uint32_t>(index));

    pcs_.resize(ph.pc_pool);
    const std::uint64_t pc_base = 0x400000 + (static_cast<std::uint64_t>(index) << 20);
    for (std::uint32_t k = 0; k < ph.pc_pool; ++k) {
        // irregular spacing so pc deltas differ between pool members
        pcs_[k] = pc_base + 4 * (static_cast<std::uint64_t>(k) * k + 3 * k);
    }
    pc_index_ = 0;

    zipf_cdf_.clear();
    if (ph.pattern == AccessPattern::ZipfHotspot) {
        const auto n = ph.working_set_pages;
        zipf_cdf_.resize(n);
        double acc = 0.0;
        for (std::uint64_t k = 0; k < n; ++k) {
            acc += std::pow(static_cast<double>(k + 1), -ph.zipf_s);
            zipf_cdf_[k] = acc;
        }
        for (auto& c : zipf_cdf_) c /= acc;
        zipf_cdf_.back() = 1.0;
    }
}

std::optional<AccessRecord> TraceGenerator::next() {
    while (phase_ < config_.phases.size() && emitted_in_phase_ >= config_.phases[phase_].length) {
        start_phase(phase_ + 1);
    }
    if (phase_ >= config_.phases.size()) {
        return std::nullopt;
    }
    const auto& ph = config_.phases[phase_];
    const unsigned page_log2 = config_.page_size_log2;
    const std::uint64_t page_size = std::uint64_t{1} << page_log2;

    AccessRecord rec;
    rec.seq = seq_++;
    rec.tid = tid_;
    rec.size = ph.access_size;

    if (uniform01(rng_) >= kPcRepeatProbability) {
        pc_index_ = static_cast<std::size_t>(rng_() % pcs_.size());
    }
    rec.pc = pcs_[pc_index_];

    auto random_offset = [&]() -> std::uint64_t {
        const std::uint64_t slots = ph.access_size >= page_size ? 1 : page_size / ph.access_size;
        return (rng_() % slots) * ph.access_size;
    };

    switch (ph.pattern) {
        case AccessPattern::Sequential:
            rec.addr = base_ + cursor_ % span_bytes_;
            cursor_ += ph.access_size;
            break;
        case AccessPattern::Strided:
            rec.addr = base_ + cursor_ % span_bytes_;
            cursor_ += ph.stride_bytes;
            break;
        case AccessPattern::ZipfHotspot: {
            const double u = uniform01(rng_);
            const auto it = std::upper_bound(zipf_cdf_.begin(), zipf_cdf_.end(), u);
            const auto rank = static_cast<std::size_t>(
                std::min<std::ptrdiff_t>(it - zipf_cdf_.begin(),
                                         static_cast<std::ptrdiff_t>(zipf_cdf_.size()) - 1));
            // the hotspot sits at the base of the working set
            rec.addr = base_ + (static_cast<std::uint64_t>(rank) << page_log2) + random_offset();
            break;
        }
        case AccessPattern::UniformRandom:
            rec.addr = base_ + ((rng_() % ph.working_set_pages) << page_log2) + random_offset();
            break;
    }
    rec.op = uniform01(rng_) < ph.write_ratio ? AccessOp::Write : AccessOp::Read;
    ++emitted_in_phase_;
    return rec;
}

std::vector<AccessRecord> generate_trace(const GeneratorConfig& config) {
    TraceGenerator gen(config);
    std::vector<AccessRecord> out;
    out.reserve(total_length(config));
    while (auto rec = gen.next()) {
        out.push_back(*rec);
    }
    return out;
}

// ---------------------------------------------------------------------------

TraceSampler::TraceSampler(double rate, std::uint64_t seed) : rate_(rate), rng_(seed) {
    if (!(rate > 0.0 && rate <= 1.0)) {
        throw InvalidRate("sampling rate must be in (0, 1], got " + std::to_string(rate));
    }
}

bool TraceSampler::keep() {
    return uniform01(rng_) < rate_;
}

std::vector<AccessRecord> sample_trace(std::span<const AccessRecord> records, double rate,
                                       std::uint64_t seed) {
    TraceSampler sampler(rate, seed);
    std::vector<AccessRecord> out;
    if (rate == 1.0) {
        out.assign(records.begin(), records.end());
        return out;
    }
    out.reserve(static_cast<std::size_t>(static_cast<double>(records.size()) * rate * 1.1) + 16);
    for (const auto& r : records) {
        if (sampler.keep()) out.push_back(r);
    }
    return out;
}

// ---------------------------------------------------------------------------

namespace {

using nlohmann::json;

AccessPattern pattern_from_string(const std::string& s) {
    if (s == "sequential") return AccessPattern::Sequential;
    if (s == "strided") return AccessPattern::Strided;
    if (s == "zipf_hotspot") return AccessPattern::ZipfHotspot;
    if (s == "uniform_random") return AccessPattern::UniformRandom;
    throw InvalidConfig("unknown pattern '" + s + "'");
}

void reject_unknown(const json& obj, std::initializer_list<std::string_view> allowed,
                    const std::string& where) {
    for (const auto& [key, _] : obj.items()) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
            throw InvalidConfig(where + ": unknown key '" + key + "'");
        }
    }
}

}  // namespace

GeneratorConfig parse_generator_config(std::string_view json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw InvalidConfig(std::string("generator config: ") + e.what());
    }
    GeneratorConfig cfg;
    try {
        if (!doc.is_object()) throw InvalidConfig("generator config must be a JSON object");
        reject_unknown(doc, {"phases", "master_seed", "page_size_log2"}, "generator config");
        cfg.master_seed = doc.value("master_seed", std::uint64_t{0});
        cfg.page_size_log2 = doc.value("page_size_log2", 12u);
        for (const auto& p : doc.at("phases")) {
            reject_unknown(p,
                           {"pattern", "length", "working_set_pages", "stride_bytes", "zipf_s",
                            "pc_pool", "write_ratio", "access_size", "base_addr", "tid"},
                           "phase");
            PhaseSpec ph;
            ph.pattern = pattern_from_string(p.at("pattern").get<std::string>());
            ph.length = p.at("length").get<std::uint64_t>();
            ph.working_set_pages = p.at("working_set_pages").get<std::uint64_t>();
            ph.stride_bytes = p.value("stride_bytes", ph.stride_bytes);
            ph.zipf_s = p.value("zipf_s", ph.zipf_s);
            ph.pc_pool = p.value("pc_pool", ph.pc_pool);
            ph.write_ratio = p.value("write_ratio", ph.write_ratio);
            ph.access_size = p.value("access_size", ph.access_size);
            if (p.contains("base_addr")) ph.base_addr = p.at("base_addr").get<std::uint64_t>();
            if (p.contains("tid")) ph.tid = p.at("tid").get<std::uint32_t>();
            cfg.phases.push_back(ph);
        }
    } catch (const json::exception& e) {
        throw InvalidConfig(std::string("generator config: ") + e.what());
    }
    validate(cfg);
    return cfg;
}

GeneratorConfig load_generator_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open config '" + path + "'");
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_generator_config(ss.str());
}

std::string generator_config_to_json(const GeneratorConfig& cfg) {
    json doc;
    doc["master_seed"] = cfg.master_seed;
    doc["page_size_log2"] = cfg.page_size_log2;
    doc["phases"] = json::array();
    for (const auto& ph : cfg.phases) {
        json p;
        p["pattern"] = std::string(to_string(ph.pattern));
        p["length"] = ph.length;
        p["working_set_pages"] = ph.working_set_pages;
        p["stride_bytes"] = ph.stride_bytes;
        p["zipf_s"] = ph.zipf_s;
        p["pc_pool"] = ph.pc_pool;
        p["write_ratio"] = ph.write_ratio;
        p["access_size"] = ph.access_size;
        if (ph.base_addr) p["base_addr"] = *ph.base_addr;
        if (ph.tid) p["tid"] = *ph.tid;
        doc["phases"].push_back(p);
    }
    return doc.dump(2);
}

}  // namespace hammer
