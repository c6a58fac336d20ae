#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "polar/bit_vector.hpp"
#include "polar/crc.hpp"

namespace polar {

enum class ChannelUse : std::uint8_t { transmitted, punctured, shortened };

struct PuncturePattern {
    std::vector<ChannelUse> use; // one entry per code bit
    int transmitted = 0;

    static PuncturePattern none(int n) {
        PuncturePattern p;
        p.use.assign(std::size_t(n), ChannelUse::transmitted);
        p.transmitted = n;
        return p;
    }
};

// A fully resolved code instance: everything the encoder, the decoders and
// the simulator need, validated once at construction.
struct PolarCode {
    int n = 0; // block length, power of two
    int k = 0; // information bits (CRC excluded)
    BitVector frozen;                   // size n, true = frozen
    BitVector a_mask;                   // complement of frozen
    std::vector<std::int32_t> info_pos; // non-frozen indices, ascending
    std::optional<CrcEngine> crc;
    PuncturePattern punct;

    int crc_width() const { return crc ? crc->width() : 0; }
    int payload_size() const { return k + crc_width(); }
    double rate() const { return double(k) / punct.transmitted; }
};

PolarCode make_code(int n, int k, BitVector frozen,
                    std::optional<CrcSpec> crc = std::nullopt,
                    std::optional<PuncturePattern> punct = std::nullopt);

// In-place multiplication by the n-fold butterfly (its own inverse).
void polar_transform(BitVector& u);

// Erasure-channel reliability figure per synthetic channel, natural order.
std::vector<double> bhattacharyya_profile(int n, double design_erasure);

// Frozen mask with exactly n - reliable ones: positions with the largest
// erasure figure are frozen first, ties broken toward the lower index.
BitVector construct_frozen(int n, int reliable, double design_erasure);

// info (k bits) -> info followed by its CRC (payload_size() bits).
BitVector append_crc(const PolarCode& code, const BitVector& info);

// Systematic encoding: the codeword carries the payload verbatim on the
// non-frozen positions, in ascending index order.
BitVector encode_systematic(const PolarCode& code, const BitVector& info);

struct FrozenFile {
    int n = 0;
    int k = 0;
    BitVector mask;
};

FrozenFile load_frozen_file(const std::string& path);
void save_frozen_file(const std::string& path, int n, int k,
                      const BitVector& mask);

PuncturePattern load_puncture_file(const std::string& path);

} // namespace polar
