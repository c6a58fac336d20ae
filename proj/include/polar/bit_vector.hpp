#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace polar {

// Packed bit container, most-significant-bit first: bit i lives in word i/64
// at position 63 - i%64.  Byte k of the stream is therefore directly
// addressable, which is what the CRC engine and the hex printers want.
// Invariant: bits past size() are zero.
class BitVector {
public:
    BitVector() = default;
    explicit BitVector(std::size_t n) : n_(n), w_((n + 63) / 64, 0) {}

    static BitVector from_bytes(const std::uint8_t* data, std::size_t nbytes) {
        BitVector v(nbytes * 8);
        for (std::size_t k = 0; k < nbytes; ++k)
            v.w_[k / 8] |= std::uint64_t(data[k]) << (56 - 8 * (k % 8));
        return v;
    }

    std::size_t size() const { return n_; }
    bool empty() const { return n_ == 0; }

    bool get(std::size_t i) const {
        return (w_[i >> 6] >> (63 - (i & 63))) & 1u;
    }
    void set(std::size_t i, bool v) {
        const std::uint64_t m = std::uint64_t(1) << (63 - (i & 63));
        if (v)
            w_[i >> 6] |= m;
        else
            w_[i >> 6] &= ~m;
    }
    void flip(std::size_t i) { w_[i >> 6] ^= std::uint64_t(1) << (63 - (i & 63)); }

    void push_back(bool v) {
        if (n_ % 64 == 0) w_.push_back(0);
        ++n_;
        if (v) set(n_ - 1, true);
    }

    void clear_all() { std::fill(w_.begin(), w_.end(), 0); }

    std::size_t count() const {
        std::size_t c = 0;
        for (auto w : w_) c += std::size_t(std::popcount(w));
        return c;
    }

    // Byte k = bits [8k, 8k+8); tail bytes are zero padded.
    std::uint8_t byte(std::size_t k) const {
        return std::uint8_t(w_[k / 8] >> (56 - 8 * (k % 8)));
    }

    // Word-wise AND with a mask of the same size.
    void and_with(const BitVector& m) {
        for (std::size_t j = 0; j < w_.size(); ++j) w_[j] &= m.w_[j];
    }

    std::uint64_t* words() { return w_.data(); }
    const std::uint64_t* words() const { return w_.data(); }
    std::size_t word_count() const { return w_.size(); }

    bool operator==(const BitVector& o) const { return n_ == o.n_ && w_ == o.w_; }
    bool operator!=(const BitVector& o) const { return !(*this == o); }

private:
    std::size_t n_ = 0;
    std::vector<std::uint64_t> w_;
};

} // namespace polar
