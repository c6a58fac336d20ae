#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "polar/channel.hpp"
#include "polar/code.hpp"
#include "polar/decoders.hpp"
#include "polar/errors.hpp"
#include "polar/parse.hpp"
#include "polar/report.hpp"
#include "polar/sim.hpp"
#include "polar/version.hpp"

namespace {

using namespace polar;

struct Opts {
    int n = 1024;
    int k = 512;
    std::string frozen_file;
    std::string puncture_file;
    std::string crc;
    std::string dec = "SSC";
    int list_size = 8;
    std::string prec = "32";
    double quant_scale = 0;
    std::string nodes;
    std::string psum = "copy";
    std::string snr = "0:4:1";
    std::uint64_t max_frames = 10000;
    std::uint64_t max_fe = 100;
    std::uint64_t seed = 42;
    int workers = 1;
    std::string out;
    std::string format = "csv";
    bool no_timing = false;
    std::string llr_file;
    double design = 0.5;
};

void add_code_flags(CLI::App* c, Opts& o) {
    c->add_option("--N", o.n, "block length, a power of two")
        ->capture_default_str();
    c->add_option("--K", o.k, "information bits, CRC excluded")
        ->capture_default_str();
    c->add_option("--frozen-file", o.frozen_file,
                  "frozen-mask file: 'N K' header line, then N chars of 0/1 "
                  "(1 = frozen); overrides --N and the built-in construction");
    c->add_option("--puncture-file", o.puncture_file,
                  "channel-use file: 'N' header line, then N chars of T/P/S "
                  "(transmitted / punctured / shortened)");
    c->add_option("--crc", o.crc,
                  "CRC preset (32-GZIP, 16-CCITT, 8) or raw "
                  "'width:poly:reflect:init:xorout' with hex fields");
    c->add_option("--design", o.design,
                  "erasure probability for the built-in reliability ranking")
        ->capture_default_str();
}

void add_decoder_flags(CLI::App* c, Opts& o) {
    c->add_option("--dec", o.dec,
                  "decoder: SC, SSC, SCL, SSCL, CA-SSCL, PA-SSCL, FA-SSCL")
        ->capture_default_str();
    c->add_option("--L", o.list_size, "list size limit, a power of two")
        ->capture_default_str();
    c->add_option("--prec", o.prec, "LLR precision: 8, 16 or 32 (float)")
        ->capture_default_str();
    c->add_option("--quant-scale", o.quant_scale,
                  "channel LLR multiplier before rounding, fixed point only "
                  "(0 = per-precision default: 8-bit -> 8, 16-bit -> 64)");
    c->add_option("--nodes", o.nodes,
                  "subtree families to prune, e.g. R0,R1,REP_8-,SPC4+ or "
                  "'none' (default R0,R1,REP,SPC4; 8-bit caps REP at 8)");
    c->add_option("--psum", o.psum,
                  "list partial-sum layout: copy or shared")
        ->capture_default_str();
}

void add_run_flags(CLI::App* c, Opts& o) {
    c->add_option("--snr", o.snr,
                  "Eb/N0 sweep in dB: min:max:step, min:max (step 1) or a "
                  "single value")
        ->capture_default_str();
    c->add_option("--max-frames", o.max_frames,
                  "frame budget per point (0 = run until --max-fe)")
        ->capture_default_str();
    c->add_option("--max-fe", o.max_fe,
                  "stop a point once it has this many frame errors (0 = off)")
        ->capture_default_str();
    c->add_option("--seed", o.seed,
                  "base RNG seed; frame i draws from seed XOR i")
        ->capture_default_str();
    c->add_option("--workers", o.workers,
                  "decoder threads; error counters do not depend on this")
        ->capture_default_str();
    c->add_option("--out", o.out, "write the report here instead of stdout");
    c->add_option("--format", o.format, "report format: csv or table")
        ->capture_default_str();
    c->add_flag("--no-timing", o.no_timing,
                "skip latency measurement; timing columns read 0");
}

void require_pow2_n(int n) {
    if (n < 2 || (n & (n - 1)) != 0)
        throw ParseError("--N " + std::to_string(n) +
                         " is not a power of two; use the next power of two "
                         "as the mother code and shorten or puncture it with "
                         "--puncture-file");
}

// Resolve the code from flags: an explicit frozen file wins over the
// erasure-probability construction and is cross-checked against any flags
// given alongside it.
PolarCode build_code(const CLI::App* cmd, const Opts& o) {
    std::optional<CrcSpec> crc;
    if (!o.crc.empty()) crc = CrcSpec::parse(o.crc);
    const int cw = crc ? crc->width : 0;

    int n = o.n;
    int k = o.k;
    BitVector mask;
    if (!o.frozen_file.empty()) {
        FrozenFile ff = load_frozen_file(o.frozen_file);
        const int open = ff.n - int(ff.mask.count());
        if (ff.k != open)
            throw ParseError(o.frozen_file + ": header claims " +
                             std::to_string(ff.k) +
                             " open positions but the mask leaves " +
                             std::to_string(open));
        if (cmd->count("--N") && o.n != ff.n)
            throw ParseError("--N " + std::to_string(o.n) +
                             " disagrees with " + o.frozen_file + " (N=" +
                             std::to_string(ff.n) + ")");
        if (cmd->count("--K") && o.k + cw != open)
            throw ParseError("--K " + std::to_string(o.k) + " plus CRC width " +
                             std::to_string(cw) + " needs " +
                             std::to_string(o.k + cw) + " open positions; " +
                             o.frozen_file + " has " + std::to_string(open));
        if (open <= cw)
            throw ParseError(o.frozen_file + ": only " + std::to_string(open) +
                             " open positions, not enough for a " +
                             std::to_string(cw) + "-bit CRC");
        n = ff.n;
        k = open - cw;
        mask = std::move(ff.mask);
    } else {
        require_pow2_n(n);
        mask = construct_frozen(n, k + cw, o.design);
    }
    std::optional<PuncturePattern> punct;
    if (!o.puncture_file.empty()) punct = load_puncture_file(o.puncture_file);
    return make_code(n, k, std::move(mask), crc, std::move(punct));
}

DecoderKind resolve_decoder(const Opts& o) {
    const DecoderKind kind = parse_decoder(o.dec);
    if (decoder_uses_crc(kind) && o.crc.empty())
        throw ParseError(std::string("--dec ") + to_string(kind) +
                         " selects by CRC and needs --crc");
    if (!decoder_uses_crc(kind) && !o.crc.empty())
        throw ParseError(std::string("--dec ") + to_string(kind) +
                         " never consults the CRC; drop --crc or pick "
                         "CA-SSCL, PA-SSCL or FA-SSCL");
    return kind;
}

PruningConfig resolve_nodes(const CLI::App* cmd, const Opts& o,
                            Precision prec) {
    if (cmd->count("--nodes")) return parse_nodes(o.nodes);
    PruningConfig cfg; // R0,R1,REP,SPC4
    if (prec == Precision::q8) cfg.rep_max = 8;
    return cfg;
}

float resolved_scale(Precision prec, float quant_scale) {
    if (quant_scale != 0) return quant_scale;
    switch (prec) {
    case Precision::q8: return default_quant_scale<std::int8_t>();
    case Precision::q16: return default_quant_scale<std::int16_t>();
    case Precision::f32: break;
    }
    return default_quant_scale<float>();
}

std::string nodes_desc(DecoderKind kind, const PruningConfig& cfg) {
    return decoder_uses_pruning(kind) ? nodes_to_string(cfg)
                                      : "none (full tree)";
}

std::string code_desc(const PolarCode& code, const Opts& o) {
    std::ostringstream s;
    s << "code: N=" << code.n << " K=" << code.k << " crc="
      << (o.crc.empty() ? "none" : o.crc) << " payload="
      << code.payload_size() << " transmitted=" << code.punct.transmitted
      << " rate=" << code.rate();
    return s.str();
}

std::vector<std::string> meta_lines(const Opts& o, const SimConfig& cfg,
                                    const SnrRange& r) {
    std::vector<std::string> meta;
    meta.push_back(std::string("polar ") + version);
    meta.push_back(code_desc(cfg.code, o));
    {
        std::ostringstream s;
        s << "decoder: " << to_string(cfg.decoder);
        if (decoder_uses_list(cfg.decoder)) s << " L=" << cfg.list_size;
        s << " prec=" << to_string(cfg.precision) << " quant-scale="
          << resolved_scale(cfg.precision, cfg.quant_scale) << " psum="
          << to_string(cfg.psum) << " nodes="
          << nodes_desc(cfg.decoder, cfg.pruning);
        meta.push_back(s.str());
    }
    {
        std::ostringstream s;
        s << "run: awgn-bpsk snr-db=" << r.min << ':' << r.max << ':' << r.step
          << " seed=" << cfg.seed << " workers=" << cfg.workers
          << " max-frames=" << cfg.max_frames << " max-fe=" << cfg.max_fe
          << " timing=" << (cfg.timing ? "on" : "off");
        meta.push_back(s.str());
    }
    return meta;
}

int cmd_sim(const CLI::App* cmd, const Opts& o) {
    SimConfig cfg;
    cfg.decoder = resolve_decoder(o);
    cfg.code = build_code(cmd, o);
    cfg.list_size = o.list_size;
    cfg.precision = parse_precision(o.prec);
    cfg.quant_scale = float(o.quant_scale);
    cfg.pruning = resolve_nodes(cmd, o, cfg.precision);
    cfg.psum = parse_psum(o.psum);
    const SnrRange r = parse_snr(o.snr);
    cfg.ebn0_min = r.min;
    cfg.ebn0_max = r.max;
    cfg.ebn0_step = r.step;
    cfg.max_frames = o.max_frames;
    cfg.max_fe = o.max_fe;
    cfg.seed = o.seed;
    cfg.workers = o.workers;
    cfg.timing = !o.no_timing;
    const ReportFormat fmt = parse_format(o.format);

    const SimStats stats = run_montecarlo(cfg);
    const std::vector<std::string> meta = meta_lines(o, cfg, r);
    if (o.out.empty()) {
        write_report(std::cout, fmt, meta, stats);
    } else {
        std::ofstream os(o.out);
        if (!os) throw IoError("cannot open " + o.out + " for writing");
        write_report(os, fmt, meta, stats);
        std::cout << "wrote " << o.out << " (" << stats.points.size()
                  << " points)\n";
    }
    return 0;
}

std::string bit_string(const BitVector& v, int len) {
    std::string s(std::size_t(len), '0');
    for (int i = 0; i < len; ++i)
        if (v.get(std::size_t(i))) s[std::size_t(i)] = '1';
    return s;
}

template <class R>
int decode_frame(const Opts& o, const PolarCode& code, DecoderKind kind,
                 Precision prec, const PruningConfig& pruning,
                 const std::vector<float>& raw) {
    const PruneTree tree(code.frozen, decoder_uses_pruning(kind)
                                          ? pruning
                                          : PruningConfig::none());
    FrameDecoder<R> dec(code, tree, kind, o.list_size, parse_psum(o.psum));
    const float scale = resolved_scale(prec, float(o.quant_scale));
    std::vector<R> llr(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i)
        llr[i] = quantize<R>(raw[i], scale);
    const DecodeResult res = dec.decode(llr.data());
    std::cout << "crc: "
              << (code.crc ? (res.crc_ok ? "ok" : "fail") : "none") << '\n'
              << "metric: " << res.metric << '\n'
              << "escalation: " << res.escalation_level << '\n'
              << "message: " << bit_string(res.payload, code.k) << '\n'
              << "payload: " << bit_string(res.payload, code.payload_size())
              << '\n'
              << "codeword: " << bit_string(res.codeword, code.n) << '\n';
    return 0;
}

int cmd_decode(const CLI::App* cmd, const Opts& o) {
    const DecoderKind kind = resolve_decoder(o);
    const PolarCode code = build_code(cmd, o);
    const Precision prec = parse_precision(o.prec);
    const PruningConfig pruning = resolve_nodes(cmd, o, prec);
    const std::vector<float> raw = load_llr_file(o.llr_file);
    if (int(raw.size()) != code.n)
        throw ParseError(o.llr_file + " holds " +
                         std::to_string(raw.size()) +
                         " LLR values, need exactly N=" +
                         std::to_string(code.n));
    switch (prec) {
    case Precision::q8:
        return decode_frame<std::int8_t>(o, code, kind, prec, pruning, raw);
    case Precision::q16:
        return decode_frame<std::int16_t>(o, code, kind, prec, pruning, raw);
    case Precision::f32: break;
    }
    return decode_frame<float>(o, code, kind, prec, pruning, raw);
}

int cmd_construct(const Opts& o) {
    std::optional<CrcSpec> crc;
    if (!o.crc.empty()) crc = CrcSpec::parse(o.crc);
    const int cw = crc ? crc->width : 0;
    require_pow2_n(o.n);
    const int open = o.k + cw;
    if (o.k < 1 || open >= o.n)
        throw ParseError("need 1 <= K and K + CRC width < N; got K=" +
                         std::to_string(o.k) + ", width " +
                         std::to_string(cw) + ", N=" + std::to_string(o.n));
    const BitVector mask = construct_frozen(o.n, open, o.design);
    save_frozen_file(o.out, o.n, open, mask);
    std::cout << "wrote " << o.out << ": N=" << o.n << " open=" << open
              << " (K=" << o.k << " + " << cw << " CRC bits), design erasure "
              << o.design << '\n';
    return 0;
}

int cmd_info(const CLI::App* cmd, const Opts& o) {
    const DecoderKind kind = resolve_decoder(o);
    const PolarCode code = build_code(cmd, o);
    const Precision prec = parse_precision(o.prec);
    const PruningConfig pruning = resolve_nodes(cmd, o, prec);
    const PruningConfig used =
        decoder_uses_pruning(kind) ? pruning : PruningConfig::none();
    const PruneTree tree(code.frozen, used);

    std::cout << code_desc(code, o) << '\n';
    std::cout << "decoder: " << to_string(kind);
    if (decoder_uses_list(kind)) std::cout << " L=" << o.list_size;
    std::cout << " prec=" << to_string(prec) << " psum="
              << to_string(parse_psum(o.psum)) << " nodes="
              << nodes_desc(kind, used) << '\n';
    std::cout << "tree: " << tree.node_count() << " nodes, "
              << tree.stages() << " stages\n";
    std::cout << "  " << std::left << std::setw(14) << "kind" << std::right
              << std::setw(6) << "size" << std::setw(7) << "count" << '\n';
    for (const auto& row : tree.histogram())
        std::cout << "  " << std::left << std::setw(14)
                  << node_kind_name(row.kind) << std::right << std::setw(6)
                  << row.size << std::setw(7) << row.count << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"polar: runtime-configurable polar code toolkit — "
                 "Monte-Carlo BER/FER/throughput sweeps, single-frame "
                 "decoding, code construction"};
    app.set_version_flag("--version", std::string("polar ") + polar::version);
    app.require_subcommand(0, 1);

    Opts o;
    CLI::App* sim_cmd = app.add_subcommand(
        "sim", "Monte-Carlo BER/FER/throughput sweep over an Eb/N0 range");
    add_code_flags(sim_cmd, o);
    add_decoder_flags(sim_cmd, o);
    add_run_flags(sim_cmd, o);

    CLI::App* decode_cmd = app.add_subcommand(
        "decode", "decode one frame from a file of channel LLRs");
    add_code_flags(decode_cmd, o);
    add_decoder_flags(decode_cmd, o);
    decode_cmd
        ->add_option("--llr-file", o.llr_file,
                     "whitespace-separated decimal LLRs, one per code "
                     "position (positive favors bit 0)")
        ->required();

    CLI::App* construct_cmd = app.add_subcommand(
        "construct", "generate a frozen-position file for N, K and CRC");
    construct_cmd->add_option("--N", o.n, "block length, a power of two")
        ->capture_default_str();
    construct_cmd->add_option("--K", o.k, "information bits, CRC excluded")
        ->capture_default_str();
    construct_cmd->add_option("--crc", o.crc,
                              "CRC preset or raw spec; its bits claim open "
                              "positions on top of --K");
    construct_cmd
        ->add_option("--design", o.design,
                     "erasure probability for the reliability ranking")
        ->capture_default_str();
    construct_cmd->add_option("--out", o.out, "destination path")->required();

    CLI::App* info_cmd = app.add_subcommand(
        "info", "print the resolved code and its decode-tree histogram");
    add_code_flags(info_cmd, o);
    add_decoder_flags(info_cmd, o);

    if (argc <= 1) {
        std::cout << app.help();
        return 0;
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }
    try {
        if (sim_cmd->parsed()) return cmd_sim(sim_cmd, o);
        if (decode_cmd->parsed()) return cmd_decode(decode_cmd, o);
        if (construct_cmd->parsed()) return cmd_construct(o);
        if (info_cmd->parsed()) return cmd_info(info_cmd, o);
        std::cout << app.help();
        return 0;
    } catch (const polar::ParseError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const polar::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const polar::IoError& e) {
        std::cerr << "io error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
