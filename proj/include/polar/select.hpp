#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

#include "polar/errors.hpp"

namespace polar {

enum class ExtremeMode { two_smallest, two_largest };

// Indices of the two extreme values in at most n + ceil(log2 n) - 2 value
// comparisons: a knock-out bracket finds the first extreme, and the second
// can only hide among the first one's direct opponents.  Ties go to the
// lower index.  Requires n >= 2.
template <class T>
std::pair<std::int32_t, std::int32_t>
select_two_extremes(const T* v, std::int32_t n, ExtremeMode mode,
                    std::size_t* comparisons = nullptr) {
    if (n < 2) throw ConfigError("two-extremes selection needs at least 2 values");
    std::size_t ncmp = 0;
    const bool smallest = mode == ExtremeMode::two_smallest;
    auto wins = [&](std::int32_t a, std::int32_t b) {
        ++ncmp;
        if (v[a] == v[b]) return a < b;
        return smallest ? v[a] < v[b] : v[a] > v[b];
    };

    // flat bracket: round r+1 is appended after round r
    thread_local std::vector<std::int32_t> ring;
    thread_local std::vector<std::int32_t> round_off;
    ring.clear();
    round_off.clear();
    ring.resize(static_cast<std::size_t>(n));
    std::iota(ring.begin(), ring.end(), 0);
    round_off.push_back(0);
    std::int32_t begin = 0, size = n;
    while (size > 1) {
        for (std::int32_t i = 0; i + 1 < size; i += 2) {
            const std::int32_t a = ring[std::size_t(begin + i)];
            const std::int32_t b = ring[std::size_t(begin + i + 1)];
            ring.push_back(wins(a, b) ? a : b);
        }
        if (size & 1) ring.push_back(ring[std::size_t(begin + size - 1)]);
        begin += size;
        size = (size + 1) / 2;
        round_off.push_back(begin);
    }
    const std::int32_t first = ring[std::size_t(begin)];

    // replay the winner's path; its opponents are the only candidates left
    std::int32_t second = -1;
    std::int32_t pos = first; // position in round 0 equals the index itself
    for (std::size_t r = 0; r + 1 < round_off.size(); ++r) {
        const std::int32_t rsize = round_off[r + 1] - round_off[r];
        const std::int32_t opp = pos ^ 1;
        if (opp < rsize) {
            const std::int32_t cand = ring[std::size_t(round_off[r] + opp)];
            if (second < 0 || wins(cand, second)) second = cand;
        }
        pos >>= 1;
    }

    if (comparisons) *comparisons = ncmp;
    return {first, second};
}

// Stable index sort by metric, ascending; ties keep the lower index first.
template <class T>
std::vector<std::int32_t> sort_survivors(const T* metrics, std::int32_t n) {
    std::vector<std::int32_t> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::int32_t a, std::int32_t b) {
                         return metrics[a] < metrics[b];
                     });
    return order;
}

} // namespace polar
