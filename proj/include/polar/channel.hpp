#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "polar/code.hpp"
#include "polar/llr.hpp"

namespace polar {

// Deterministic per-frame randomness: frame i of a run seeded with s draws
// from a generator seeded with s XOR i, so any worker arriving at a frame
// produces the same payload and noise.  The 64-bit stream id is folded to
// the generator's 32-bit seed width.
class FrameRng {
public:
    FrameRng(std::uint64_t seed, std::uint64_t frame) {
        const std::uint64_t s = seed ^ frame;
        gen_.seed(std::uint32_t(s ^ (s >> 32)));
    }

    std::uint32_t raw() { return gen_(); }
    bool coin() { return (gen_() & 1u) != 0; }

    // Box-Muller pair, one value per call; u1, u2 lie in (0, 1] so the log
    // never sees zero.  The spare value never crosses a frame boundary
    // because each frame owns a fresh instance.
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = (double(gen_()) + 1.0) * 0x1p-32;
        const double u2 = (double(gen_()) + 1.0) * 0x1p-32;
        const double mag = std::sqrt(-2.0 * std::log(u1));
        const double ang = 2.0 * std::numbers::pi * u2;
        spare_ = mag * std::sin(ang);
        have_spare_ = true;
        return mag * std::cos(ang);
    }

private:
    std::mt19937 gen_;
    double spare_ = 0;
    bool have_spare_ = false;
};

inline BitVector random_payload(FrameRng& rng, std::size_t k) {
    BitVector v(k);
    for (std::size_t i = 0; i < k; ++i) v.set(i, rng.coin());
    return v;
}

// Noise variance for BPSK at a given information-bit SNR; the rate counts
// information bits over transmitted channel uses, so puncturing raises the
// effective rate.
inline double awgn_sigma2(const PolarCode& code, double ebn0_db) {
    return 1.0 / (2.0 * code.rate() * std::pow(10.0, ebn0_db / 10.0));
}

// BPSK over AWGN with LLR demapping: bit 0 -> +1, bit 1 -> -1, y = s + n,
// LLR = 2y / sigma^2.  Punctured positions are never transmitted and demap
// to 0 (erasure); shortened positions carry a known zero and demap to the
// largest representable value.  Noise is drawn in ascending position order
// over transmitted uses only.
template <class R>
void transmit(const PolarCode& code, const BitVector& x, double sigma2,
              FrameRng& rng, float scale, R* out) {
    const double sigma = std::sqrt(sigma2);
    const double demap = 2.0 / sigma2;
    for (int i = 0; i < code.n; ++i) {
        switch (code.punct.use[std::size_t(i)]) {
        case ChannelUse::punctured:
            out[i] = R(0);
            break;
        case ChannelUse::shortened:
            out[i] = known_zero_llr<R>();
            break;
        case ChannelUse::transmitted: {
            const double s = x.get(std::size_t(i)) ? -1.0 : 1.0;
            const double y = s + sigma * rng.gaussian();
            out[i] = quantize<R>(float(demap * y), scale);
            break;
        }
        }
    }
}

// Default channel-LLR quantization step per representation; chosen so the
// interesting SNR range uses most of the integer range without saturating
// the channel values themselves.
template <class R>
inline float default_quant_scale() {
    if constexpr (llr_traits<R>::fixed_point)
        return sizeof(R) == 1 ? 8.0f : 64.0f;
    else
        return 1.0f;
}

} // namespace polar
