#include "polar/code.hpp"

#include <algorithm>
#include <bit>
#include <fstream>
#include <numeric>

#include "polar/errors.hpp"

namespace polar {

void polar_transform(BitVector& u) {
    const std::size_t n = u.size();
    std::uint64_t* w = u.words();
    const std::size_t nw = u.word_count();
    // pair-XOR masks for strides below the word size, MSB-first layout
    static constexpr std::uint64_t stride_mask[6] = {
        0xAAAAAAAAAAAAAAAAull, 0xCCCCCCCCCCCCCCCCull,
        0xF0F0F0F0F0F0F0F0ull, 0xFF00FF00FF00FF00ull,
        0xFFFF0000FFFF0000ull, 0xFFFFFFFF00000000ull};
    for (std::size_t inc = 1; inc < n; inc <<= 1) {
        if (inc < 64) {
            const std::uint64_t m = stride_mask[std::countr_zero(inc)];
            for (std::size_t j = 0; j < nw; ++j) w[j] ^= (w[j] << inc) & m;
        } else {
            const std::size_t ws = inc / 64;
            for (std::size_t j = 0; j < nw; ++j)
                if ((j & ws) == 0) w[j] ^= w[j + ws];
        }
    }
}

namespace {

void fill_profile(std::vector<double>& z, std::size_t lo, std::size_t sz,
                  double v) {
    if (sz == 1) {
        z[lo] = v;
        return;
    }
    fill_profile(z, lo, sz / 2, 2.0 * v - v * v);
    fill_profile(z, lo + sz / 2, sz / 2, v * v);
}

void require_power_of_two(int n) {
    if (n < 2 || (n & (n - 1)) != 0)
        throw ConfigError("N must be a power of two >= 2 (got " +
                          std::to_string(n) + ")");
}

} // namespace

std::vector<double> bhattacharyya_profile(int n, double design_erasure) {
    require_power_of_two(n);
    if (!(design_erasure > 0.0) || !(design_erasure < 1.0))
        throw ConfigError("design erasure probability must lie in (0, 1)");
    const std::size_t un = std::size_t(n);
    std::vector<double> z(un);
    fill_profile(z, 0, un, design_erasure);
    return z;
}

BitVector construct_frozen(int n, int reliable, double design_erasure) {
    if (reliable < 1 || reliable > n)
        throw ConfigError("cannot construct a code with " +
                          std::to_string(reliable) + " reliable positions out of " +
                          std::to_string(n));
    const auto z = bhattacharyya_profile(n, design_erasure);
    const std::size_t un = std::size_t(n);
    std::vector<int> idx(un);
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(),
                     [&](int a, int b) { return z[std::size_t(a)] > z[std::size_t(b)]; });
    BitVector mask{un};
    for (int j = 0; j < n - reliable; ++j) mask.set(std::size_t(idx[std::size_t(j)]), true);
    return mask;
}

PolarCode make_code(int n, int k, BitVector frozen,
                    std::optional<CrcSpec> crc,
                    std::optional<PuncturePattern> punct) {
    require_power_of_two(n);
    if (k < 1)
        throw ConfigError("K must be at least 1 (got " + std::to_string(k) + ")");
    if (frozen.size() != std::size_t(n))
        throw ConfigError("frozen mask has " + std::to_string(frozen.size()) +
                          " bits, code has N = " + std::to_string(n));

    PolarCode c;
    c.n = n;
    c.k = k;
    c.frozen = std::move(frozen);
    if (crc) c.crc.emplace(*crc);

    const int width = c.crc_width();
    const int open = n - int(c.frozen.count());
    if (open != k + width)
        throw ConfigError("frozen mask leaves " + std::to_string(open) +
                          " information positions, need K + CRC bits = " +
                          std::to_string(k + width));

    c.a_mask = BitVector(static_cast<std::size_t>(n));
    c.info_pos.reserve(std::size_t(open));
    for (int i = 0; i < n; ++i) {
        if (!c.frozen.get(std::size_t(i))) {
            c.a_mask.set(std::size_t(i), true);
            c.info_pos.push_back(i);
        }
    }

    c.punct = punct ? std::move(*punct) : PuncturePattern::none(n);
    if (c.punct.use.size() != std::size_t(n))
        throw ConfigError("puncture pattern has " +
                          std::to_string(c.punct.use.size()) +
                          " entries, code has N = " + std::to_string(n));
    const int transmitted =
        int(std::count(c.punct.use.begin(), c.punct.use.end(),
                       ChannelUse::transmitted));
    if (transmitted != c.punct.transmitted) c.punct.transmitted = transmitted;
    if (transmitted < k + width)
        throw ConfigError("puncture pattern transmits only " +
                          std::to_string(transmitted) +
                          " symbols, fewer than K + CRC bits = " +
                          std::to_string(k + width));
    return c;
}

BitVector append_crc(const PolarCode& code, const BitVector& info) {
    if (info.size() != std::size_t(code.k))
        throw ConfigError("message has " + std::to_string(info.size()) +
                          " bits, code expects K = " + std::to_string(code.k));
    BitVector payload(static_cast<std::size_t>(code.payload_size()));
    for (std::size_t i = 0; i < info.size(); ++i) payload.set(i, info.get(i));
    if (code.crc) {
        const int w = code.crc->width();
        const std::uint64_t v = code.crc->compute(info);
        for (int j = 0; j < w; ++j)
            payload.set(std::size_t(code.k + j), (v >> (w - 1 - j)) & 1);
    }
    return payload;
}

BitVector encode_systematic(const PolarCode& code, const BitVector& info) {
    const BitVector payload = append_crc(code, info);
    BitVector u(static_cast<std::size_t>(code.n));
    for (std::size_t j = 0; j < payload.size(); ++j)
        u.set(std::size_t(code.info_pos[j]), payload.get(j));
    polar_transform(u);
    u.and_with(code.a_mask);
    polar_transform(u);
    return u;
}

namespace {

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    return in;
}

} // namespace

FrozenFile load_frozen_file(const std::string& path) {
    auto in = open_input(path);
    FrozenFile f;
    if (!(in >> f.n >> f.k))
        throw ParseError("frozen file '" + path + "': header must be 'N K'");
    std::string mask;
    if (!(in >> mask))
        throw ParseError("frozen file '" + path + "': missing mask line");
    if (mask.size() != std::size_t(f.n))
        throw ParseError("frozen file '" + path + "': mask has " +
                         std::to_string(mask.size()) + " characters, header says N = " +
                         std::to_string(f.n));
    f.mask = BitVector(mask.size());
    for (std::size_t i = 0; i < mask.size(); ++i) {
        if (mask[i] == '1')
            f.mask.set(i, true);
        else if (mask[i] != '0')
            throw ParseError("frozen file '" + path + "': mask character '" +
                             std::string(1, mask[i]) + "' at position " +
                             std::to_string(i) + " (want 0 or 1)");
    }
    return f;
}

void save_frozen_file(const std::string& path, int n, int k,
                      const BitVector& mask) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << n << ' ' << k << '\n';
    for (std::size_t i = 0; i < mask.size(); ++i) out << (mask.get(i) ? '1' : '0');
    out << '\n';
    if (!out) throw IoError("failed writing '" + path + "'");
}

PuncturePattern load_puncture_file(const std::string& path) {
    auto in = open_input(path);
    int n = 0;
    if (!(in >> n))
        throw ParseError("puncture file '" + path + "': header must be 'N'");
    std::string pat;
    if (!(in >> pat))
        throw ParseError("puncture file '" + path + "': missing pattern line");
    if (pat.size() != std::size_t(n))
        throw ParseError("puncture file '" + path + "': pattern has " +
                         std::to_string(pat.size()) +
                         " characters, header says N = " + std::to_string(n));
    PuncturePattern p;
    p.use.reserve(pat.size());
    for (std::size_t i = 0; i < pat.size(); ++i) {
        switch (pat[i]) {
        case 'T': p.use.push_back(ChannelUse::transmitted); ++p.transmitted; break;
        case 'P': p.use.push_back(ChannelUse::punctured); break;
        case 'S': p.use.push_back(ChannelUse::shortened); break;
        default:
            throw ParseError("puncture file '" + path + "': pattern character '" +
                             std::string(1, pat[i]) + "' at position " +
                             std::to_string(i) + " (want T, P or S)");
        }
    }
    return p;
}

} // namespace polar
