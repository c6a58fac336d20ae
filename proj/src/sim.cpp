#include "polar/sim.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <memory>
#include <thread>

#include "polar/channel.hpp"
#include "polar/errors.hpp"

namespace polar {

namespace {

constexpr std::uint64_t batch_size = 1024;

struct Acc {
    std::uint64_t bit_errors = 0;
    std::uint64_t frame_errors = 0;
    std::uint64_t esc_sum = 0;
    double lat_sum = 0;
    double lat_worst = 0;

    void merge(const Acc& o) {
        bit_errors += o.bit_errors;
        frame_errors += o.frame_errors;
        esc_sum += o.esc_sum;
        lat_sum += o.lat_sum;
        lat_worst = std::max(lat_worst, o.lat_worst);
    }
};

template <class R>
struct WorkerState {
    FrameDecoder<R> dec;
    std::vector<R> llr;
    Acc acc;

    WorkerState(const SimConfig& cfg, const PruneTree& tree)
        : dec(cfg.code, tree, cfg.decoder, cfg.list_size, cfg.psum),
          llr(std::size_t(cfg.code.n)) {}
};

template <class R>
void run_frame(const SimConfig& cfg, double sigma2, float scale,
               std::uint64_t frame, WorkerState<R>& w) {
    FrameRng rng(cfg.seed, frame);
    const BitVector info = random_payload(rng, std::size_t(cfg.code.k));
    const BitVector x = encode_systematic(cfg.code, info);
    transmit<R>(cfg.code, x, sigma2, rng, scale, w.llr.data());

    DecodeResult res;
    if (cfg.timing) {
        const auto t0 = std::chrono::steady_clock::now();
        res = w.dec.decode(w.llr.data());
        const auto t1 = std::chrono::steady_clock::now();
        const double us =
            std::chrono::duration<double, std::micro>(t1 - t0).count();
        w.acc.lat_sum += us;
        w.acc.lat_worst = std::max(w.acc.lat_worst, us);
    } else {
        res = w.dec.decode(w.llr.data());
    }

    std::uint64_t be = 0;
    for (int i = 0; i < cfg.code.k; ++i)
        be += res.payload.get(std::size_t(i)) != info.get(std::size_t(i));
    w.acc.bit_errors += be;
    w.acc.frame_errors += be > 0;
    w.acc.esc_sum += std::uint64_t(res.escalation_level);
}

template <class R>
PointStats run_point(const SimConfig& cfg, const PruneTree& tree,
                     double ebn0_db) {
    const double sigma2 = awgn_sigma2(cfg.code, ebn0_db);
    const float scale =
        cfg.quant_scale > 0 ? cfg.quant_scale : default_quant_scale<R>();
    const std::uint64_t max_frames =
        cfg.max_frames ? cfg.max_frames : std::uint64_t(-1);
    const int workers = std::max(1, cfg.workers);

    const std::size_t nworkers = std::size_t(workers);
    std::vector<std::unique_ptr<WorkerState<R>>> states(nworkers);
    Acc total;
    std::uint64_t done = 0;
    while (done < max_frames) {
        const std::uint64_t batch = std::min(batch_size, max_frames - done);
        const std::uint64_t end = done + batch;
        std::atomic<std::uint64_t> next{done};
        auto drain = [&](int wi) {
            auto& slot = states[std::size_t(wi)];
            if (!slot) slot = std::make_unique<WorkerState<R>>(cfg, tree);
            for (;;) {
                const std::uint64_t f = next.fetch_add(1);
                if (f >= end) break;
                run_frame<R>(cfg, sigma2, scale, f, *slot);
            }
        };
        if (workers == 1) {
            drain(0);
        } else {
            std::vector<std::thread> pool;
            pool.reserve(std::size_t(workers));
            for (int wi = 0; wi < workers; ++wi)
                pool.emplace_back(drain, wi);
            for (auto& t : pool) t.join();
        }
        done = end;
        std::uint64_t fe = 0;
        for (const auto& s : states)
            if (s) fe += s->acc.frame_errors;
        if (cfg.max_fe && fe >= cfg.max_fe) break;
    }

    for (const auto& s : states)
        if (s) total.merge(s->acc);

    PointStats p;
    p.ebn0_db = ebn0_db;
    p.frames = done;
    p.bit_errors = total.bit_errors;
    p.frame_errors = total.frame_errors;
    const double kf = double(cfg.code.k) * double(done);
    p.ber = done ? double(total.bit_errors) / kf : 0;
    p.fer = done ? double(total.frame_errors) / double(done) : 0;
    p.esc_mean = done ? double(total.esc_sum) / double(done) : 0;
    if (cfg.timing && total.lat_sum > 0) {
        p.ti_mbps = kf / total.lat_sum; // bits per µs = Mb/s
        p.lat_avg_us = total.lat_sum / double(done);
        p.lat_worst_us = total.lat_worst;
    }
    return p;
}

template <class R>
SimStats run_all(const SimConfig& cfg, const PruneTree& tree) {
    SimStats out;
    for (int i = 0;; ++i) {
        const double ebn0 = cfg.ebn0_min + double(i) * cfg.ebn0_step;
        if (ebn0 > cfg.ebn0_max + cfg.ebn0_step * 1e-9) break;
        out.points.push_back(run_point<R>(cfg, tree, ebn0));
    }
    return out;
}

} // namespace

SimStats run_montecarlo(const SimConfig& cfg) {
    if (cfg.ebn0_step <= 0)
        throw ConfigError("Eb/N0 step must be positive");
    if (cfg.ebn0_max < cfg.ebn0_min)
        throw ConfigError("Eb/N0 range is empty");
    if (cfg.max_frames == 0 && cfg.max_fe == 0)
        throw ConfigError("stop rule is empty: set max frames or target "
                          "frame errors");
    if (cfg.workers < 1)
        throw ConfigError("worker count must be at least 1");

    const PruneTree tree(cfg.code.frozen,
                         decoder_uses_pruning(cfg.decoder)
                             ? cfg.pruning
                             : PruningConfig::none());
    switch (cfg.precision) {
    case Precision::q8:
        return run_all<std::int8_t>(cfg, tree);
    case Precision::q16:
        return run_all<std::int16_t>(cfg, tree);
    case Precision::f32:
        return run_all<float>(cfg, tree);
    }
    throw ConfigError("unhandled precision");
}

std::pair<double, double> binomial_ci95(std::uint64_t errors,
                                        std::uint64_t frames) {
    if (frames == 0) return {0.0, 1.0};
    const double p = double(errors) / double(frames);
    const double half = 1.96 * std::sqrt(std::max(p * (1 - p), 0.0) /
                                         double(frames));
    return {std::max(0.0, p - half), std::min(1.0, p + half)};
}

} // namespace polar
