#include "polar/crc.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "polar/errors.hpp"

namespace polar {
namespace {

std::uint64_t bit_reverse(std::uint64_t v, int width) {
    std::uint64_t r = 0;
    for (int i = 0; i < width; ++i) {
        r = (r << 1) | (v & 1);
        v >>= 1;
    }
    return r;
}

std::uint64_t width_mask(int width) {
    return width == 64 ? ~std::uint64_t(0)
                       : (std::uint64_t(1) << width) - 1;
}

std::uint64_t parse_hex_field(const std::string& s, const std::string& what) {
    if (s.empty()) throw ParseError("CRC spec: empty " + what + " field");
    std::size_t pos = 0;
    std::uint64_t v = 0;
    try {
        v = std::stoull(s, &pos, 16);
    } catch (const std::exception&) {
        throw ParseError("CRC spec: bad hex value '" + s + "' for " + what);
    }
    if (pos != s.size())
        throw ParseError("CRC spec: bad hex value '" + s + "' for " + what);
    return v;
}

} // namespace

CrcSpec CrcSpec::parse(const std::string& text) {
    if (text == "32-GZIP")
        return {32, 0x04C11DB7, true, 0xFFFFFFFF, 0xFFFFFFFF};
    if (text == "16-CCITT")
        return {16, 0x1021, false, 0xFFFF, 0x0000};
    if (text == "8")
        return {8, 0x07, false, 0x00, 0x00};

    std::vector<std::string> fields;
    std::string cur;
    for (char c : text) {
        if (c == ':') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    fields.push_back(cur);
    if (fields.size() != 5)
        throw ParseError("CRC spec '" + text +
                         "': expected a preset name or width:poly:reflect:init:xorout");

    CrcSpec s;
    try {
        std::size_t pos = 0;
        s.width = std::stoi(fields[0], &pos, 10);
        if (pos != fields[0].size()) throw std::invalid_argument("");
    } catch (const std::exception&) {
        throw ParseError("CRC spec: bad width '" + fields[0] + "'");
    }
    s.poly = parse_hex_field(fields[1], "poly");
    if (fields[2] == "0")
        s.reflect = false;
    else if (fields[2] == "1")
        s.reflect = true;
    else
        throw ParseError("CRC spec: reflect field must be 0 or 1, got '" +
                         fields[2] + "'");
    s.init = parse_hex_field(fields[3], "init");
    s.xorout = parse_hex_field(fields[4], "xorout");
    return s;
}

CrcEngine::CrcEngine(const CrcSpec& spec) : spec_(spec) {
    if (spec_.width < 1 || spec_.width > 64)
        throw ConfigError("CRC width must be in [1, 64], got " +
                          std::to_string(spec_.width));
    const std::uint64_t mask = width_mask(spec_.width);
    if ((spec_.poly & ~mask) || (spec_.init & ~mask) || (spec_.xorout & ~mask))
        throw ConfigError("CRC poly/init/xorout do not fit in " +
                          std::to_string(spec_.width) + " bits");
    if ((spec_.poly & 1) == 0)
        throw ConfigError("CRC poly must have its x^0 term set");

    if (spec_.reflect) {
        rpoly_ = bit_reverse(spec_.poly, spec_.width);
        init_reg_ = bit_reverse(spec_.init, spec_.width);
        for (int b = 0; b < 256; ++b) {
            std::uint64_t r = std::uint64_t(b);
            for (int i = 0; i < 8; ++i)
                r = (r >> 1) ^ ((r & 1) ? rpoly_ : 0);
            table_[std::size_t(b)] = r;
        }
    } else {
        poly_top_ = spec_.poly << (64 - spec_.width);
        init_reg_ = spec_.init << (64 - spec_.width);
        for (int b = 0; b < 256; ++b) {
            std::uint64_t r = std::uint64_t(b) << 56;
            for (int i = 0; i < 8; ++i) {
                const bool top = r >> 63;
                r <<= 1;
                if (top) r ^= poly_top_;
            }
            table_[std::size_t(b)] = r;
        }
    }
}

std::uint64_t CrcEngine::compute(const BitVector& bits, std::size_t len) const {
    std::uint64_t reg = init_reg_;
    const std::size_t nbytes = len / 8;
    if (spec_.reflect) {
        for (std::size_t k = 0; k < nbytes; ++k)
            reg = (reg >> 8) ^ table_[(reg ^ bits.byte(k)) & 0xFF];
        for (std::size_t i = nbytes * 8; i < len; ++i) {
            reg ^= std::uint64_t(bits.get(i));
            const bool lo = reg & 1;
            reg >>= 1;
            if (lo) reg ^= rpoly_;
        }
        return reg ^ spec_.xorout;
    }
    for (std::size_t k = 0; k < nbytes; ++k)
        reg = (reg << 8) ^ table_[((reg >> 56) ^ bits.byte(k)) & 0xFF];
    for (std::size_t i = nbytes * 8; i < len; ++i) {
        reg ^= std::uint64_t(bits.get(i)) << 63;
        const bool top = reg >> 63;
        reg <<= 1;
        if (top) reg ^= poly_top_;
    }
    return (reg >> (64 - spec_.width)) ^ spec_.xorout;
}

bool CrcEngine::check(const BitVector& payload) const {
    const std::size_t w = std::size_t(spec_.width);
    if (payload.size() < w) return false;
    const std::size_t len = payload.size() - w;
    std::uint64_t tail = 0;
    for (std::size_t j = 0; j < w; ++j)
        tail = (tail << 1) | std::uint64_t(payload.get(len + j));
    return compute(payload, len) == tail;
}

std::optional<std::size_t> pick_crc_passing(
    const CrcEngine& crc, const std::vector<BitVector>& candidates,
    const std::vector<double>& metrics, std::size_t* checks) {
    std::vector<std::size_t> order(candidates.size());
    std::iota(order.begin(), order.end(), std::size_t(0));
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) {
                         return metrics[a] < metrics[b];
                     });
    if (checks) *checks = 0;
    for (std::size_t i : order) {
        if (checks) ++*checks;
        if (crc.check(candidates[i])) return i;
    }
    return std::nullopt;
}

} // namespace polar
