#pragma once

#include <optional>

#include "polar/list_decoder.hpp"
#include "polar/sc_decoder.hpp"

namespace polar {

enum class DecoderKind {
    sc,      // successive cancellation, unpruned tree
    ssc,     // successive cancellation over a pruned tree
    scl,     // list decoding, unpruned tree
    sscl,    // list decoding over a pruned tree
    ca_sscl, // list + CRC-aided candidate selection
    pa_sscl, // SC first, one CRC-aided pass at L on failure
    fa_sscl, // SC first, CRC-aided passes at L = 2, 4, ... on failure
};

inline bool decoder_uses_list(DecoderKind k) {
    return k != DecoderKind::sc && k != DecoderKind::ssc;
}
inline bool decoder_uses_crc(DecoderKind k) {
    return k == DecoderKind::ca_sscl || k == DecoderKind::pa_sscl ||
           k == DecoderKind::fa_sscl;
}
inline bool decoder_is_adaptive(DecoderKind k) {
    return k == DecoderKind::pa_sscl || k == DecoderKind::fa_sscl;
}
inline bool decoder_uses_pruning(DecoderKind k) {
    return k != DecoderKind::sc && k != DecoderKind::scl;
}

// One frame in, one decision out: owns the engines a decoder variant needs
// and routes between them.  The caller supplies the decode tree (pruned or
// not) that matches the variant.
template <class R>
class FrameDecoder {
public:
    FrameDecoder(const PolarCode& code, const PruneTree& tree, DecoderKind kind,
                 int l, PsumLayout layout = PsumLayout::copy)
        : code_(&code), kind_(kind), l_(decoder_uses_list(kind) ? l : 1) {
        if (decoder_uses_crc(kind_) && !code.crc)
            throw ConfigError("CRC-aided decoding needs a code with a CRC");
        if (decoder_is_adaptive(kind_) && l_ < 2)
            throw ConfigError("adaptive decoding needs a list limit of at "
                              "least 2, got " + std::to_string(l_));
        if (decoder_uses_list(kind_) && (l_ < 1 || (l_ & (l_ - 1)) != 0))
            throw ConfigError("list size must be a power of two, got " +
                              std::to_string(l_));
        if (!decoder_uses_list(kind_) || decoder_is_adaptive(kind_))
            sc_.emplace(code, tree);
        if (decoder_uses_list(kind_))
            list_.emplace(code, tree, l_, layout);
    }

    DecoderKind kind() const { return kind_; }
    int list_limit() const { return l_; }

    DecodeResult decode(const R* channel) {
        switch (kind_) {
        case DecoderKind::sc:
        case DecoderKind::ssc:
            return single_pass(channel);
        case DecoderKind::scl:
        case DecoderKind::sscl:
            return list_->decode(channel, l_, false);
        case DecoderKind::ca_sscl:
            return list_->decode(channel, l_, true);
        case DecoderKind::pa_sscl: {
            DecodeResult r = single_pass(channel);
            if (r.crc_ok) return r;
            return list_->decode(channel, l_, true);
        }
        case DecoderKind::fa_sscl: {
            DecodeResult r = single_pass(channel);
            if (r.crc_ok) return r;
            for (int l = 2;; l *= 2) {
                r = list_->decode(channel, l, true);
                if (r.crc_ok || l >= l_) return r;
            }
        }
        }
        throw ConfigError("unhandled decoder variant");
    }

private:
    DecodeResult single_pass(const R* channel) {
        sc_->decode(channel);
        DecodeResult r;
        r.codeword = sc_->codeword_bits();
        r.payload = sc_->payload();
        r.crc_ok = code_->crc && code_->crc->check(r.payload);
        r.escalation_level = 1;
        return r;
    }

    const PolarCode* code_;
    DecoderKind kind_;
    int l_;
    std::optional<ScDecoder<R>> sc_;
    std::optional<ListDecoder<R>> list_;
};

} // namespace polar
