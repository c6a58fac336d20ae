#pragma once

#include <string>
#include <vector>

#include "polar/decoders.hpp"
#include "polar/prune_tree.hpp"
#include "polar/report.hpp"
#include "polar/sim.hpp"

namespace polar {

const char* to_string(DecoderKind k);
const char* to_string(Precision p);
const char* to_string(PsumLayout l);
const char* to_string(ReportFormat f);

// All name parsers are case-insensitive and throw ParseError naming the
// offending value.
DecoderKind parse_decoder(const std::string& s);
Precision parse_precision(const std::string& s);
PsumLayout parse_psum(const std::string& s);
ReportFormat parse_format(const std::string& s);

struct SnrRange {
    double min = 0;
    double max = 0;
    double step = 1;
};

// "min:max:step" in dB; step may be omitted ("min:max" steps by 1, a bare
// value is a single point).
SnrRange parse_snr(const std::string& s);

// Comma list of node families to prune, e.g. "R0,R1,REP,SPC4" or
// "R0,R1,REP_8-,SPC4+".  A family name enables the rule; an attached size
// caps it ("REP_8-", "SPC4") and a trailing '+' lifts the cap ("SPC4+").
// "none" disables pruning entirely.
PruningConfig parse_nodes(const std::string& s);
std::string nodes_to_string(const PruningConfig& cfg);

// Whitespace-separated decimal LLR values.
std::vector<float> load_llr_file(const std::string& path);

} // namespace polar
