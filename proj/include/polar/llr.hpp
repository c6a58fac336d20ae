#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>

namespace polar {

// Arithmetic traits per LLR representation.  Fixed-point variants use a
// symmetric range (the most negative value is never produced), so negation
// and absolute value are always safe.
template <class R>
struct llr_traits;

template <>
struct llr_traits<float> {
    using bit_type = std::int32_t;
    static constexpr bool fixed_point = false;
};

template <>
struct llr_traits<std::int16_t> {
    using bit_type = std::int16_t;
    static constexpr bool fixed_point = true;
    static constexpr std::int16_t max = 32767;
};

template <>
struct llr_traits<std::int8_t> {
    using bit_type = std::int8_t;
    static constexpr bool fixed_point = true;
    static constexpr std::int8_t max = 127;
};

// Zero decodes as bit 0 everywhere: only strictly negative values flip.
template <class R>
inline bool hard_bit(R v) {
    return v < R(0);
}

inline float sat_add(float a, float b) { return a + b; }
inline std::int16_t sat_add(std::int16_t a, std::int16_t b) {
    return std::int16_t(std::clamp(int(a) + int(b), -32767, 32767));
}
inline std::int8_t sat_add(std::int8_t a, std::int8_t b) {
    return std::int8_t(std::clamp(int(a) + int(b), -127, 127));
}

template <class R>
inline R abs_llr(R v) {
    return v < R(0) ? R(-v) : v;
}

// min-sum check-node update; zero counts as positive
template <class R>
inline R f_kernel(R a, R b) {
    const R m = std::min(abs_llr(a), abs_llr(b));
    return ((a < R(0)) != (b < R(0))) ? R(-m) : m;
}

template <class R, class B>
inline R g_kernel(R a, R b, B s) {
    if constexpr (llr_traits<R>::fixed_point) {
        const int v = s ? int(b) - int(a) : int(a) + int(b);
        return R(std::clamp(v, -int(llr_traits<R>::max), int(llr_traits<R>::max)));
    } else {
        return s ? b - a : a + b;
    }
}

// The block forms are plain element loops on purpose: every call site keeps
// them bit-identical to the scalar kernels while the compiler vectorizes.
template <class R>
inline void f_block(const R* a, const R* b, R* out, int m) {
    for (int i = 0; i < m; ++i) out[i] = f_kernel(a[i], b[i]);
}

template <class R, class B>
inline void g_block(const R* a, const R* b, const B* s, R* out, int m) {
    for (int i = 0; i < m; ++i) out[i] = g_kernel(a[i], b[i], s[i] != 0);
}

// partial-sum combine: left half absorbs the right, right half is copied up
template <class B>
inline void h_block(B* parent_left, const B* right, int half) {
    for (int i = 0; i < half; ++i)
        parent_left[i] = B(parent_left[i] ^ right[i]);
}

// Channel LLR -> stored representation.  Float is kept verbatim; fixed point
// scales, rounds half away from zero, and clamps to the symmetric range.
template <class R>
inline R quantize(float x, float scale) {
    if constexpr (llr_traits<R>::fixed_point) {
        const float v = std::round(x * scale);
        const float lim = float(llr_traits<R>::max);
        return R(std::clamp(v, -lim, lim));
    } else {
        (void)scale;
        return x;
    }
}

// Stand-in LLR for a channel position the receiver knows to be zero.
template <class R>
inline R known_zero_llr() {
    if constexpr (llr_traits<R>::fixed_point)
        return llr_traits<R>::max;
    else
        return 1e9f; // large but finite: keeps g-node sums NaN-free
}

} // namespace polar
