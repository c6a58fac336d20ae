#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "polar/code.hpp"
#include "polar/decoders.hpp"
#include "polar/list_decoder.hpp"
#include "polar/llr.hpp"
#include "polar/prune_tree.hpp"
#include "polar/sc_decoder.hpp"

using namespace polar;

namespace {

BitVector bits_of(const std::string& s) {
    BitVector v(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) v.set(i, s[i] == '1');
    return v;
}

template <class R>
std::vector<R> rough_llrs(std::mt19937& rng, int n) {
    std::vector<R> v(static_cast<std::size_t>(n));
    for (auto& x : v) {
        const unsigned pick = rng() % 8;
        int mag;
        if (pick == 0)
            mag = 0;
        else if (pick == 1)
            mag = int(llr_traits<std::int8_t>::max);
        else
            mag = int(rng() % 8);
        const int s = (rng() & 1) ? -1 : 1;
        if constexpr (llr_traits<R>::fixed_point)
            x = R(s * mag);
        else
            x = R(s * mag) * 0.5f;
    }
    return v;
}

BitVector random_payload(std::mt19937& rng, std::size_t k) {
    BitVector v(k);
    for (std::size_t i = 0; i < k; ++i) v.set(i, rng() & 1);
    return v;
}

// BPSK over AWGN in float; sigma = 0 gives the noiseless channel.
std::vector<float> awgn_llrs(std::mt19937& rng, const BitVector& x,
                             double sigma) {
    std::normal_distribution<double> noise(0.0, sigma);
    std::vector<float> llr(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double tx = x.get(i) ? -1.0 : 1.0;
        const double y = tx + (sigma > 0 ? noise(rng) : 0.0);
        llr[i] = float(sigma > 0 ? 2.0 * y / (sigma * sigma) : 8.0 * tx);
    }
    return llr;
}

// Penalty of a codeword against hard channel decisions.
double codeword_penalty(const BitVector& x, const std::vector<float>& llr) {
    double pen = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const bool h = llr[i] < 0;
        if (x.get(i) != h) pen += std::fabs(double(llr[i]));
    }
    return pen;
}

} // namespace

TEST_CASE("list decoder: pinned single-node penalties") {
    // frozen leaf: penalty is the disagreeing magnitude
    {
        const auto code = make_code(2, 1, bits_of("10"));
        PruneTree tree(code.frozen, PruningConfig::none());
        ListDecoder<float> dec(code, tree, 1, PsumLayout::copy);
        const float llr[2] = {-2.0f, 5.0f};
        const auto res = dec.decode(llr, 1, false);
        CHECK(res.metric == doctest::Approx(2.0));
        CHECK(res.codeword == bits_of("00"));
    }
    // info leaf: fork to both bit values, penalty on the sign-disagreeing one
    {
        const auto code = make_code(2, 1, bits_of("01"));
        PruneTree tree(code.frozen, PruningConfig::none());
        ListDecoder<float> dec(code, tree, 2, PsumLayout::copy);
        const float llr[2] = {3.0f, 3.0f};
        const auto res = dec.decode(llr, 2, false);
        CHECK(res.metric == doctest::Approx(0.0));
        CHECK(res.payload == bits_of("0"));
        REQUIRE(dec.alive_count() == 2);
        double worst = 0;
        for (int p = 0; p < 2; ++p)
            if (dec.is_alive(p)) worst = std::max(worst, dec.metric_of(p));
        CHECK(worst == doctest::Approx(3.0));
    }
    // all-frozen subtree: penalty sums every negative magnitude
    {
        const auto code = make_code(8, 4, bits_of("11110000"));
        PruneTree tree(code.frozen, PruningConfig{});
        REQUIRE(tree.node(tree.node(tree.root()).left).kind == NodeKind::rate_zero);
        ListDecoder<float> dec(code, tree, 1, PsumLayout::copy);
        // big second half keeps the upper f outputs equal to the first half
        const float llr[8] = {1, -2, 3, -4, 100, 100, 100, 100};
        const auto res = dec.decode(llr, 1, false);
        CHECK(res.metric == doctest::Approx(6.0));
    }
}

TEST_CASE("list decoder: pinned repetition fork") {
    const auto code = make_code(4, 1, bits_of("1110"));
    PruneTree tree(code.frozen, PruningConfig{});
    REQUIRE(tree.node(tree.root()).kind == NodeKind::repetition);
    for (auto layout : {PsumLayout::copy, PsumLayout::shared}) {
        ListDecoder<float> dec(code, tree, 2, layout);
        const float llr[4] = {1, 1, 1, -5};
        const auto res = dec.decode(llr, 2, false);
        CHECK(res.metric == doctest::Approx(3.0)); // all-one beats all-zero
        CHECK(res.codeword == bits_of("1111"));
        CHECK(res.payload == bits_of("1"));
        REQUIRE(dec.alive_count() == 2);
        double worst = 0;
        for (int p = 0; p < 2; ++p)
            if (dec.is_alive(p)) worst = std::max(worst, dec.metric_of(p));
        CHECK(worst == doctest::Approx(5.0)); // the all-zero candidate
    }
}

TEST_CASE("list decoder: pinned rate-1 and single-parity forks") {
    // rate-1 with one path keeps the elementwise hard decision
    {
        const auto code = make_code(4, 4, bits_of("0000"));
        PruneTree tree(code.frozen, PruningConfig{});
        REQUIRE(tree.node(tree.root()).kind == NodeKind::rate_one);
        ListDecoder<float> dec(code, tree, 1, PsumLayout::copy);
        const float llr[4] = {9, -8, 1, -2};
        const auto res = dec.decode(llr, 1, false);
        CHECK(res.codeword == bits_of("0101"));
        CHECK(res.metric == doctest::Approx(0.0));
    }
    // parity intact: keep word and double-flip of the two weakest
    {
        const auto code = make_code(4, 3, bits_of("1000"));
        PruneTree tree(code.frozen, PruningConfig{});
        REQUIRE(tree.node(tree.root()).kind == NodeKind::single_parity);
        ListDecoder<float> dec(code, tree, 2, PsumLayout::copy);
        const float llr[4] = {1, 5, -6, -7};
        const auto res = dec.decode(llr, 2, false);
        CHECK(res.codeword == bits_of("0011"));
        CHECK(res.metric == doctest::Approx(0.0));
        double worst = 0;
        for (int p = 0; p < 2; ++p)
            if (dec.is_alive(p)) worst = std::max(worst, dec.metric_of(p));
        CHECK(worst == doctest::Approx(6.0)); // flipping positions 0 and 1
    }
    // parity broken: fork over the two cheapest single flips
    {
        const auto code = make_code(4, 3, bits_of("1000"));
        PruneTree tree(code.frozen, PruningConfig{});
        ListDecoder<float> dec(code, tree, 2, PsumLayout::shared);
        const float llr[4] = {1, 5, -6, 7};
        const auto res = dec.decode(llr, 2, false);
        CHECK(res.codeword == bits_of("1010"));
        CHECK(res.metric == doctest::Approx(1.0));
        double worst = 0;
        for (int p = 0; p < 2; ++p)
            if (dec.is_alive(p)) worst = std::max(worst, dec.metric_of(p));
        CHECK(worst == doctest::Approx(5.0));
    }
}

TEST_CASE("list decoder: four-way tie keeps the earliest candidates") {
    // all-zero LLRs tie every fork; survivors must both descend from path 0
    const auto code = make_code(2, 2, bits_of("00"));
    PruneTree tree(code.frozen, PruningConfig::none());
    ListDecoder<float> dec(code, tree, 2, PsumLayout::copy);
    const float llr[2] = {0, 0};
    const auto res = dec.decode(llr, 2, false);
    CHECK(res.metric == doctest::Approx(0.0));
    // earliest candidate of the earliest path: first bit 0, then bit 0
    CHECK(res.payload == bits_of("00"));
    CHECK(res.codeword == bits_of("00"));
    REQUIRE(dec.alive_count() == 2);
    CHECK(dec.metric_of(0) == doctest::Approx(0.0));
    CHECK(dec.metric_of(1) == doctest::Approx(0.0));
}

namespace {

template <class R>
void list1_matches_sc(int n, unsigned seed) {
    std::mt19937 rng(seed);
    for (int reliable : {n / 4, n / 2, n - 1}) {
        const auto mask = construct_frozen(n, reliable, 0.5);
        const auto code = make_code(n, reliable, mask);
        PruneTree full(mask, PruningConfig::none());
        ScDecoder<R> sc(code, full);
        for (auto layout : {PsumLayout::copy, PsumLayout::shared}) {
            ListDecoder<R> list(code, full, 1, layout);
            for (int trial = 0; trial < 40; ++trial) {
                const auto llr = rough_llrs<R>(rng, n);
                sc.decode(llr.data());
                const auto res = list.decode(llr.data(), 1, false);
                REQUIRE(sc.codeword_bits() == res.codeword);
                REQUIRE(sc.payload() == res.payload);
            }
        }
    }
}

} // namespace

TEST_CASE("list of one equals successive cancellation on the full tree") {
    list1_matches_sc<float>(4, 101);
    list1_matches_sc<float>(16, 102);
    list1_matches_sc<float>(64, 103);
    list1_matches_sc<std::int16_t>(16, 104);
    list1_matches_sc<std::int16_t>(64, 105);
    list1_matches_sc<std::int8_t>(16, 106);
    list1_matches_sc<std::int8_t>(64, 107);
}

TEST_CASE("single-path repetition follows the fold even when saturated") {
    // (4,1) repetition code at int8 extremes: both candidate penalties
    // saturate to 127, and the fold alone decides the survivor
    const auto code = make_code(4, 1, bits_of("1110"));
    PruneTree pruned(code.frozen, PruningConfig{});
    ScDecoder<std::int8_t> sc(code, pruned);
    ListDecoder<std::int8_t> list(code, pruned, 1, PsumLayout::copy);
    const std::int8_t hostile[4] = {-100, -100, 90, 90};
    sc.decode(hostile);
    auto res = list.decode(hostile, 1, false);
    CHECK(sc.codeword_bits() == res.codeword);
    std::mt19937 rng(7);
    for (int t = 0; t < 500; ++t) {
        std::int8_t v[4];
        for (auto& x : v) x = std::int8_t(int(rng() % 255) - 127);
        sc.decode(v);
        res = list.decode(v, 1, false);
        REQUIRE(sc.codeword_bits() == res.codeword);
    }
}

namespace {

template <class R>
void layouts_agree(int n, unsigned seed) {
    std::mt19937 rng(seed);
    for (int reliable : {n / 4, n / 2, 3 * n / 4}) {
        const auto mask = construct_frozen(n, reliable, 0.5);
        const auto code = make_code(n, reliable, mask);
        PruneTree pruned(mask, PruningConfig{});
        for (int l : {1, 2, 4, 8}) {
            ListDecoder<R> a(code, pruned, l, PsumLayout::copy);
            ListDecoder<R> b(code, pruned, l, PsumLayout::shared);
            for (int trial = 0; trial < 25; ++trial) {
                const auto llr = rough_llrs<R>(rng, n);
                const auto ra = a.decode(llr.data(), l, false);
                const auto rb = b.decode(llr.data(), l, false);
                REQUIRE(ra.codeword == rb.codeword);
                REQUIRE(ra.payload == rb.payload);
                REQUIRE(ra.metric == rb.metric);
                REQUIRE(a.alive_count() == b.alive_count());
                for (int p = 0; p < l; ++p) {
                    REQUIRE(a.is_alive(p) == b.is_alive(p));
                    if (a.is_alive(p))
                        REQUIRE(a.metric_of(p) == b.metric_of(p));
                }
            }
        }
    }
}

} // namespace

TEST_CASE("partial-sum layouts produce identical decodes") {
    layouts_agree<float>(8, 201);
    layouts_agree<float>(32, 202);
    layouts_agree<float>(128, 203);
    layouts_agree<std::int16_t>(32, 204);
    layouts_agree<std::int8_t>(32, 205);
}

TEST_CASE("wide lists reach maximum-likelihood on a tiny code") {
    // every penalty is integer-valued, so float sums are exact and the
    // decoder metric must match an exhaustive search over all 16 codewords
    const auto mask = construct_frozen(8, 4, 0.5);
    const auto code = make_code(8, 4, mask);
    PruneTree full(mask, PruningConfig::none());

    std::vector<BitVector> book;
    for (int w = 0; w < 16; ++w) {
        BitVector info(4);
        for (int i = 0; i < 4; ++i) info.set(std::size_t(i), (w >> i) & 1);
        book.push_back(encode_systematic(code, info));
    }

    std::mt19937 rng(303);
    for (int l : {8, 16}) {
        ListDecoder<float> dec(code, full, l, PsumLayout::copy);
        for (int trial = 0; trial < 300; ++trial) {
            std::vector<float> llr(8);
            for (auto& x : llr) x = float(int(rng() % 19) - 9);
            const auto res = dec.decode(llr.data(), l, false);
            double best = 1e30;
            for (const auto& x : book)
                best = std::min(best, codeword_penalty(x, llr));
            REQUIRE(res.metric == doctest::Approx(best));
            REQUIRE(codeword_penalty(res.codeword, llr) == doctest::Approx(best));
        }
    }
}

TEST_CASE("fixed-point metrics stay normalized and saturation-safe") {
    std::mt19937 rng(404);
    const auto mask = construct_frozen(64, 32, 0.5);
    const auto code = make_code(64, 32, mask);
    PruneTree pruned(mask, PruningConfig{});
    ListDecoder<std::int8_t> dec8(code, pruned, 8, PsumLayout::copy);
    ListDecoder<std::int16_t> dec16(code, pruned, 8, PsumLayout::shared);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<std::int8_t> v8(64);
        std::vector<std::int16_t> v16(64);
        for (int i = 0; i < 64; ++i) {
            // mostly saturated values force the metric range to its limit
            const int mag = (rng() % 3) ? 127 : int(rng() % 8);
            const int s = (rng() & 1) ? -1 : 1;
            v8[std::size_t(i)] = std::int8_t(s * mag);
            v16[std::size_t(i)] = std::int16_t(s * mag);
        }
        dec8.decode(v8.data(), 8, false);
        dec16.decode(v16.data(), 8, false);
        double mn8 = 1e30, mn16 = 1e30;
        for (int p = 0; p < 8; ++p) {
            if (dec8.is_alive(p)) {
                REQUIRE(dec8.metric_of(p) >= 0);
                REQUIRE(dec8.metric_of(p) <= 127);
                mn8 = std::min(mn8, dec8.metric_of(p));
            }
            if (dec16.is_alive(p)) {
                REQUIRE(dec16.metric_of(p) >= 0);
                REQUIRE(dec16.metric_of(p) <= 32767);
                mn16 = std::min(mn16, dec16.metric_of(p));
            }
        }
        REQUIRE(mn8 == 0);
        REQUIRE(mn16 == 0);
    }
}

TEST_CASE("CRC-aided selection scans survivors in metric order") {
    const auto mask = construct_frozen(64, 32, 0.5);
    const auto code =
        make_code(64, 24, mask, CrcSpec::parse("8")); // payload 24 + 8
    PruneTree pruned(code.frozen, PruningConfig{});
    ListDecoder<float> dec(code, pruned, 8, PsumLayout::copy);
    std::mt19937 rng(505);

    // noiseless frames decode to the sent payload with a clean CRC
    for (int t = 0; t < 20; ++t) {
        const auto info = random_payload(rng, 24);
        const auto x = encode_systematic(code, info);
        const auto llr = awgn_llrs(rng, x, 0.0);
        const auto res = dec.decode(llr.data(), 8, true);
        REQUIRE(res.crc_ok);
        REQUIRE(res.metric == doctest::Approx(0.0));
        REQUIRE(res.payload == append_crc(code, info));
    }

    // noisy frames: a reported success always carries a valid CRC, a miss
    // falls back to the plain best path; selection rescues some frames
    int rescued = 0, fallback_checked = 0;
    for (int t = 0; t < 500; ++t) {
        const auto info = random_payload(rng, 24);
        const auto x = encode_systematic(code, info);
        const auto llr = awgn_llrs(rng, x, 0.9);
        const auto aided = dec.decode(llr.data(), 8, true);
        const auto plain = dec.decode(llr.data(), 8, false);
        if (aided.crc_ok) {
            REQUIRE(code.crc->check(aided.payload));
            if (aided.payload == append_crc(code, info) &&
                plain.payload != aided.payload)
                ++rescued;
        } else {
            REQUIRE(aided.payload == plain.payload);
            ++fallback_checked;
        }
    }
    CHECK(rescued > 0);
    CHECK(fallback_checked > 0);
}

TEST_CASE("adaptive decoding escalates only on CRC failure") {
    // CRC-32 keeps undetected passes out of the comparison: with a short CRC
    // the fast ladder can stop early on a valid-but-wrong candidate, which is
    // a property of the CRC, not of the decoder
    const auto mask = construct_frozen(128, 64, 0.5);
    const auto code = make_code(128, 32, mask, CrcSpec::parse("32-GZIP"));
    PruneTree pruned(code.frozen, PruningConfig{});
    std::mt19937 rng(606);

    FrameDecoder<float> pa(code, pruned, DecoderKind::pa_sscl, 8);
    FrameDecoder<float> fa(code, pruned, DecoderKind::fa_sscl, 8);

    // clean channel: the single pass already satisfies the CRC
    for (int t = 0; t < 10; ++t) {
        const auto info = random_payload(rng, 32);
        const auto x = encode_systematic(code, info);
        const auto llr = awgn_llrs(rng, x, 0.0);
        const auto rp = pa.decode(llr.data());
        const auto rf = fa.decode(llr.data());
        REQUIRE(rp.crc_ok);
        REQUIRE(rf.crc_ok);
        REQUIRE(rp.escalation_level == 1);
        REQUIRE(rf.escalation_level == 1);
        REQUIRE(rp.payload == rf.payload);
    }

    // noisy frames: escalation levels stay on the ladder, and the two modes
    // agree whenever both succeed or both fall back
    int esc_seen = 0;
    for (int t = 0; t < 1000; ++t) {
        const auto info = random_payload(rng, 32);
        const auto x = encode_systematic(code, info);
        const auto llr = awgn_llrs(rng, x, 1.0);
        const auto rp = pa.decode(llr.data());
        const auto rf = fa.decode(llr.data());
        REQUIRE((rp.escalation_level == 1 || rp.escalation_level == 8));
        REQUIRE((rf.escalation_level == 1 || rf.escalation_level == 2 ||
                 rf.escalation_level == 4 || rf.escalation_level == 8));
        if (rf.escalation_level == 1) REQUIRE(rp.escalation_level == 1);
        const auto sent = append_crc(code, info);
        if (rp.crc_ok && rf.crc_ok)
            REQUIRE((rp.payload == sent) == (rf.payload == sent));
        if (!rp.crc_ok && !rf.crc_ok) REQUIRE(rp.payload == rf.payload);
        if (rf.escalation_level > 1) ++esc_seen;
    }
    CHECK(esc_seen > 0);
}

TEST_CASE("adaptive decoding composes the single pass with aided passes") {
    const auto mask = construct_frozen(32, 16, 0.5);
    const auto code = make_code(32, 8, mask, CrcSpec::parse("8"));
    PruneTree pruned(code.frozen, PruningConfig{});
    std::mt19937 rng(707);

    FrameDecoder<float> pa(code, pruned, DecoderKind::pa_sscl, 4);
    FrameDecoder<float> fa(code, pruned, DecoderKind::fa_sscl, 4);
    ScDecoder<float> sc(code, pruned);
    ListDecoder<float> list(code, pruned, 4, PsumLayout::copy);

    for (int t = 0; t < 400; ++t) {
        const auto info = random_payload(rng, 8);
        const auto x = encode_systematic(code, info);
        const auto llr = awgn_llrs(rng, x, 1.1);

        const auto rp = pa.decode(llr.data());
        const auto rf = fa.decode(llr.data());

        sc.decode(llr.data());
        const bool sc_ok = code.crc->check(sc.payload());
        if (sc_ok) {
            REQUIRE(rp.escalation_level == 1);
            REQUIRE(rf.escalation_level == 1);
            REQUIRE(rp.payload == sc.payload());
            REQUIRE(rf.payload == sc.payload());
        } else {
            const auto full = list.decode(llr.data(), 4, true);
            REQUIRE(rp.escalation_level == 4);
            REQUIRE(rp.payload == full.payload);
            REQUIRE(rp.crc_ok == full.crc_ok);
            const auto two = list.decode(llr.data(), 2, true);
            if (two.crc_ok) {
                REQUIRE(rf.escalation_level == 2);
                REQUIRE(rf.payload == two.payload);
            } else {
                REQUIRE(rf.escalation_level == 4);
                REQUIRE(rf.payload == full.payload);
            }
        }
    }
}

TEST_CASE("undecodable frames drive the full escalation ladder") {
    // all-zero LLRs cannot satisfy a CRC with a nonzero init, so the fast
    // path fails and every rung of the ladder runs
    const auto mask = construct_frozen(64, 32, 0.5);
    const auto code = make_code(64, 16, mask, CrcSpec::parse("16-CCITT"));
    PruneTree pruned(code.frozen, PruningConfig{});
    FrameDecoder<float> pa(code, pruned, DecoderKind::pa_sscl, 8);
    FrameDecoder<float> fa(code, pruned, DecoderKind::fa_sscl, 8);
    std::vector<float> llr(64, 0.0f);
    const auto rp = pa.decode(llr.data());
    const auto rf = fa.decode(llr.data());
    CHECK_FALSE(rp.crc_ok);
    CHECK_FALSE(rf.crc_ok);
    CHECK(rp.escalation_level == 8);
    CHECK(rf.escalation_level == 8);
    CHECK(rp.payload == rf.payload);
}

TEST_CASE("list configuration errors are rejected") {
    const auto mask = construct_frozen(16, 8, 0.5);
    const auto code = make_code(16, 8, mask);
    PruneTree full(mask, PruningConfig::none());

    CHECK_THROWS_AS(ListDecoder<float>(code, full, 3, PsumLayout::copy),
                    ConfigError);
    CHECK_THROWS_AS(ListDecoder<float>(code, full, 0, PsumLayout::copy),
                    ConfigError);

    ListDecoder<float> dec(code, full, 4, PsumLayout::copy);
    std::vector<float> llr(16, 1.0f);
    CHECK_THROWS_AS(dec.decode(llr.data(), 3, false), ConfigError);
    CHECK_THROWS_AS(dec.decode(llr.data(), 8, false), ConfigError);
    CHECK_THROWS_AS(dec.decode(llr.data(), 0, false), ConfigError);
    CHECK_THROWS_AS(dec.decode(llr.data(), 4, true), ConfigError); // no CRC

    CHECK_THROWS_AS(FrameDecoder<float>(code, full, DecoderKind::ca_sscl, 4),
                    ConfigError); // CRC-aided without a CRC
    const auto crc_code =
        make_code(16, 4, construct_frozen(16, 12, 0.5), CrcSpec::parse("8"));
    PruneTree crc_tree(crc_code.frozen, PruningConfig::none());
    CHECK_THROWS_AS(FrameDecoder<float>(crc_code, crc_tree, DecoderKind::pa_sscl, 1),
                    ConfigError); // adaptive needs headroom
    CHECK_THROWS_AS(FrameDecoder<float>(crc_code, crc_tree, DecoderKind::sscl, 6),
                    ConfigError); // not a power of two

    const auto other = make_code(32, 16, construct_frozen(32, 16, 0.5));
    CHECK_THROWS_AS(ListDecoder<float>(other, full, 4, PsumLayout::copy),
                    ConfigError); // tree sized for a different N
}
