#pragma once

#include <cstdint>
#include <vector>

#include "polar/code.hpp"
#include "polar/decoders.hpp"
#include "polar/prune_tree.hpp"

namespace polar {

enum class Precision { q8, q16, f32 };

struct SimConfig {
    PolarCode code;
    DecoderKind decoder = DecoderKind::ssc;
    int list_size = 8;
    Precision precision = Precision::f32;
    float quant_scale = 0; // 0 = per-precision default
    PruningConfig pruning;
    PsumLayout psum = PsumLayout::copy;
    double ebn0_min = 0, ebn0_max = 4, ebn0_step = 1;
    std::uint64_t max_frames = 10000; // 0 = unbounded (needs max_fe)
    std::uint64_t max_fe = 100;       // 0 = run to max_frames
    std::uint64_t seed = 42;
    int workers = 1;
    bool timing = true;
};

struct PointStats {
    double ebn0_db = 0;
    std::uint64_t frames = 0;
    std::uint64_t bit_errors = 0;
    std::uint64_t frame_errors = 0;
    double ber = 0;
    double fer = 0;
    double ti_mbps = 0;     // info bits over summed decode time
    double lat_avg_us = 0;  // mean decode latency
    double lat_worst_us = 0;
    double esc_mean = 0;    // mean list size that produced the answer
};

struct SimStats {
    std::vector<PointStats> points;
};

// Monte-Carlo sweep over the configured Eb/N0 range.  Frame i is fully
// determined by (seed, i): error counters are identical for any worker
// count; only the timing columns depend on the machine.  Frames are claimed
// in fixed batches and the stop rule is evaluated at batch boundaries, so
// scheduling cannot change which frames contribute.
SimStats run_montecarlo(const SimConfig& cfg);

// 95% binomial confidence interval (normal approximation, clamped at zero)
// for an observed error count over a frame count.
std::pair<double, double> binomial_ci95(std::uint64_t errors,
                                        std::uint64_t frames);

} // namespace polar
