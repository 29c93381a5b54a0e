#include "hammer/features.hpp"

#include <cmath>

namespace hammer {

const FeatureSchema& hammer_schema() {
    static const FeatureSchema schema{FeatureVector::kNumeric, {2, 256}};
    return schema;
}

double signed_log_delta(std::uint64_t from, std::uint64_t to) {
    if (to >= from) {
        return std::log2(1.0 + static_cast<double>(to - from));
    }
    return -std::log2(1.0 + static_cast<double>(from - to));
}

FeatureVector::Encoded FeatureVector::encode() const {
    Encoded e;
    e.numeric = {addr_delta_log, pc_delta_log, size_log, slow_band_rate, pingpong_rate, cpu_rate};
    e.categorical = {op_type == AccessOp::Write ? 1u : 0u, page_bucket};
    return e;
}

FeatureVector FeatureExtractor::extract(const AccessRecord& record, const SystemSnapshot& sys) {
    FeatureVector fv;
    auto [it, first] = threads_.try_emplace(record.tid);
    auto& st = it->second;
    if (!first) {
        fv.addr_delta_log = signed_log_delta(st.last_addr, record.addr);
        fv.pc_delta_log = signed_log_delta(st.last_pc, record.pc);
    }
    st.last_addr = record.addr;
    st.last_pc = record.pc;

    fv.size_log = std::log2(1.0 + static_cast<double>(record.size));
    fv.op_type = record.op;
    fv.page_bucket = page_bucket(page_of(record.addr, page_size_log2_));
    fv.slow_band_rate = sys.slow_band_rate;
    fv.pingpong_rate = sys.pingpong_dis;
    fv.cpu_rate = sys.cpu_rate;
    return fv;
}

}  // namespace hammer
