#include "polar/parse.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <string_view>

#include "polar/errors.hpp"

namespace polar {

namespace {

std::string lower(const std::string& s) {
    std::string out = s;
    for (auto& c : out) c = char(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = s.find(sep, start);
        parts.push_back(s.substr(start, pos - start));
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    return parts;
}

double parse_number(const std::string& s, const std::string& what) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size())
        throw ParseError(what + ": '" + s + "' is not a number");
    return v;
}

} // namespace

const char* to_string(DecoderKind k) {
    switch (k) {
    case DecoderKind::sc: return "SC";
    case DecoderKind::ssc: return "SSC";
    case DecoderKind::scl: return "SCL";
    case DecoderKind::sscl: return "SSCL";
    case DecoderKind::ca_sscl: return "CA-SSCL";
    case DecoderKind::pa_sscl: return "PA-SSCL";
    case DecoderKind::fa_sscl: return "FA-SSCL";
    }
    return "?";
}

const char* to_string(Precision p) {
    switch (p) {
    case Precision::q8: return "8";
    case Precision::q16: return "16";
    case Precision::f32: return "32";
    }
    return "?";
}

const char* to_string(PsumLayout l) {
    return l == PsumLayout::copy ? "copy" : "shared";
}

const char* to_string(ReportFormat f) {
    return f == ReportFormat::csv ? "csv" : "table";
}

DecoderKind parse_decoder(const std::string& s) {
    const std::string v = lower(s);
    if (v == "sc") return DecoderKind::sc;
    if (v == "ssc") return DecoderKind::ssc;
    if (v == "scl") return DecoderKind::scl;
    if (v == "sscl") return DecoderKind::sscl;
    if (v == "ca-sscl") return DecoderKind::ca_sscl;
    if (v == "pa-sscl") return DecoderKind::pa_sscl;
    if (v == "fa-sscl") return DecoderKind::fa_sscl;
    throw ParseError("unknown decoder '" + s +
                     "' (expected SC, SSC, SCL, SSCL, CA-SSCL, PA-SSCL or "
                     "FA-SSCL)");
}

Precision parse_precision(const std::string& s) {
    if (s == "8") return Precision::q8;
    if (s == "16") return Precision::q16;
    if (s == "32") return Precision::f32;
    throw ParseError("unknown precision '" + s + "' (expected 8, 16 or 32)");
}

PsumLayout parse_psum(const std::string& s) {
    const std::string v = lower(s);
    if (v == "copy") return PsumLayout::copy;
    if (v == "shared") return PsumLayout::shared;
    throw ParseError("unknown partial-sum layout '" + s +
                     "' (expected copy or shared)");
}

ReportFormat parse_format(const std::string& s) {
    const std::string v = lower(s);
    if (v == "csv") return ReportFormat::csv;
    if (v == "table") return ReportFormat::table;
    throw ParseError("unknown format '" + s + "' (expected csv or table)");
}

SnrRange parse_snr(const std::string& s) {
    const auto parts = split(s, ':');
    if (parts.empty() || parts.size() > 3)
        throw ParseError("SNR range '" + s + "': expected min:max:step");
    SnrRange r;
    r.min = parse_number(parts[0], "SNR range");
    r.max = parts.size() > 1 ? parse_number(parts[1], "SNR range") : r.min;
    r.step = parts.size() > 2 ? parse_number(parts[2], "SNR range") : 1.0;
    if (r.step <= 0)
        throw ParseError("SNR range '" + s + "': step must be positive");
    if (r.max < r.min)
        throw ParseError("SNR range '" + s + "': max is below min");
    return r;
}

PruningConfig parse_nodes(const std::string& s) {
    PruningConfig cfg = PruningConfig::none();
    const std::string v = lower(s);
    if (v == "none") return cfg;
    for (const auto& raw : split(v, ',')) {
        if (raw.empty())
            throw ParseError("pruning list '" + s + "': empty entry");
        std::string_view t(raw);
        bool* enable = nullptr;
        int* cap = nullptr;
        if (t.substr(0, 2) == "r0") {
            enable = &cfg.rate_zero;
            t.remove_prefix(2);
        } else if (t.substr(0, 2) == "r1") {
            enable = &cfg.rate_one;
            t.remove_prefix(2);
        } else if (t.substr(0, 3) == "rep") {
            enable = &cfg.repetition;
            cap = &cfg.rep_max;
            t.remove_prefix(3);
        } else if (t.substr(0, 3) == "spc") {
            enable = &cfg.single_parity;
            cap = &cfg.spc_max;
            t.remove_prefix(3);
        } else {
            throw ParseError("pruning list '" + s + "': unknown node family '" +
                             raw + "'");
        }
        *enable = true;
        if (!t.empty() && t.front() == '_') t.remove_prefix(1);
        int size = 0;
        bool have_size = false;
        while (!t.empty() && std::isdigit(static_cast<unsigned char>(t.front()))) {
            size = size * 10 + (t.front() - '0');
            have_size = true;
            t.remove_prefix(1);
        }
        bool unlimited = !have_size;
        if (!t.empty() && (t.front() == '+' || t.front() == '-')) {
            unlimited = t.front() == '+';
            t.remove_prefix(1);
        }
        if (!t.empty())
            throw ParseError("pruning list '" + s + "': malformed entry '" +
                             raw + "'");
        if (cap == nullptr) {
            if (have_size)
                throw ParseError("pruning list '" + s + "': '" + raw +
                                 "' does not take a size cap");
            continue;
        }
        *cap = unlimited ? 0 : size;
        if (*cap != 0 && cap == &cfg.rep_max && *cap < 2)
            throw ParseError("pruning list '" + s +
                             "': repetition cap must be at least 2");
        if (*cap != 0 && cap == &cfg.spc_max && *cap < 4)
            throw ParseError("pruning list '" + s +
                             "': single-parity cap must be at least 4");
    }
    return cfg;
}

std::string nodes_to_string(const PruningConfig& cfg) {
    std::string out;
    auto add = [&](const std::string& t) {
        if (!out.empty()) out += ',';
        out += t;
    };
    if (cfg.rate_zero) add("R0");
    if (cfg.rate_one) add("R1");
    if (cfg.repetition)
        add(cfg.rep_max ? "REP_" + std::to_string(cfg.rep_max) + "-" : "REP");
    if (cfg.single_parity)
        add(cfg.spc_max ? "SPC" + std::to_string(cfg.spc_max) : "SPC4+");
    return out.empty() ? "none" : out;
}

std::vector<float> load_llr_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open LLR file '" + path + "'");
    std::vector<float> out;
    std::string tok;
    while (in >> tok) {
        char* end = nullptr;
        const float v = std::strtof(tok.c_str(), &end);
        if (end != tok.c_str() + tok.size())
            throw ParseError("LLR file '" + path + "': bad value '" + tok +
                             "'");
        out.push_back(v);
    }
    if (out.empty())
        throw ParseError("LLR file '" + path + "' contains no values");
    return out;
}

} // namespace polar
