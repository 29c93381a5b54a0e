#pragma once

namespace hammer {

// Per-period view of the tier model consumed by feature extraction and by the
// threshold tuner.
struct SystemSnapshot {
    double slow_band_rate = 0.0;  // fraction of bytes served by the cold tier
    double pingpong_dis = 0.0;    // ping-pong migrations in the window
    double cpu_rate = 0.0;        // migration-process CPU occupancy
    double error_bound = 0.0;     // captured but unused by the tuner
};

}  // namespace hammer
