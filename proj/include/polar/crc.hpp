#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "polar/bit_vector.hpp"

namespace polar {

// Generic CRC parameterisation.  `poly` is in normal (MSB-first) form without
// the implicit top bit; `reflect` applies to both input bits and the final
// value, matching the usual reflected-CRC conventions.
struct CrcSpec {
    int width = 32;
    std::uint64_t poly = 0x04C11DB7;
    bool reflect = true;
    std::uint64_t init = 0xFFFFFFFF;
    std::uint64_t xorout = 0xFFFFFFFF;

    // Accepts a preset name ("32-GZIP", "16-CCITT", "8") or the raw form
    // "width:poly:reflect:init:xorout" with hex fields.
    static CrcSpec parse(const std::string& text);
};

class CrcEngine {
public:
    explicit CrcEngine(const CrcSpec& spec);

    int width() const { return spec_.width; }
    const CrcSpec& spec() const { return spec_; }

    // CRC over the first `len` bits of `bits`, in index order.  Whole bytes
    // go through the table; a trailing partial byte is folded bit-serially.
    std::uint64_t compute(const BitVector& bits, std::size_t len) const;
    std::uint64_t compute(const BitVector& bits) const {
        return compute(bits, bits.size());
    }

    // True when the last width() bits (value packed MSB-first) equal the CRC
    // of the preceding message bits.
    bool check(const BitVector& payload) const;

    std::uint64_t table_entry(int i) const { return table_[std::size_t(i)]; }

private:
    CrcSpec spec_;
    std::array<std::uint64_t, 256> table_{};
    std::uint64_t rpoly_ = 0;    // reflected form
    std::uint64_t poly_top_ = 0; // normal form, aligned to bit 63
    std::uint64_t init_reg_ = 0;
};

// Index of the best candidate that passes the CRC: candidates are visited in
// ascending metric order (ties by index) and checking stops at the first hit,
// so no more CRCs are evaluated than a filter-everything-then-argmin pass.
std::optional<std::size_t> pick_crc_passing(
    const CrcEngine& crc, const std::vector<BitVector>& candidates,
    const std::vector<double>& metrics, std::size_t* checks = nullptr);

} // namespace polar
