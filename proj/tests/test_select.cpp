#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "polar/select.hpp"

using namespace polar;

namespace {

// naive reference with the same (value, index) tie rule
template <class T>
std::pair<std::int32_t, std::int32_t>
two_extremes_reference(const std::vector<T>& v, ExtremeMode mode) {
    auto better = [&](std::int32_t a, std::int32_t b) {
        if (v[std::size_t(a)] == v[std::size_t(b)]) return a < b;
        return mode == ExtremeMode::two_smallest
                   ? v[std::size_t(a)] < v[std::size_t(b)]
                   : v[std::size_t(a)] > v[std::size_t(b)];
    };
    std::int32_t first = 0;
    for (std::int32_t i = 1; i < std::int32_t(v.size()); ++i)
        if (better(i, first)) first = i;
    std::int32_t second = first == 0 ? 1 : 0;
    for (std::int32_t i = 0; i < std::int32_t(v.size()); ++i)
        if (i != first && better(i, second)) second = i;
    return {first, second};
}

std::size_t comparison_budget(std::int32_t n) {
    return std::size_t(n) + std::size_t(std::ceil(std::log2(double(n)))) - 2;
}

} // namespace

TEST_CASE("two extremes: pinned examples") {
    const float a[] = {5, 1, 4, 2};
    std::size_t cmp = 0;
    auto [i1, i2] = select_two_extremes(a, 4, ExtremeMode::two_largest, &cmp);
    CHECK(i1 == 0);
    CHECK(i2 == 2);
    CHECK(cmp <= 4);

    const float b[] = {3, 3};
    auto [j1, j2] = select_two_extremes(b, 2, ExtremeMode::two_smallest, &cmp);
    CHECK(j1 == 0);
    CHECK(j2 == 1);
    CHECK(cmp <= 1);

    CHECK_THROWS_AS(select_two_extremes(a, 1, ExtremeMode::two_smallest),
                    ConfigError);
}

TEST_CASE("two extremes: matches the reference and stays within budget") {
    std::mt19937 rng(31);
    for (std::int32_t n = 2; n <= 1024; n = n < 40 ? n + 1 : n * 2 + 1) {
        for (int rep = 0; rep < 30; ++rep) {
            std::vector<std::int32_t> v(static_cast<std::size_t>(n));
            // small value range on purpose: lots of ties
            for (auto& x : v) x = std::int32_t(rng() % 7);
            for (auto mode : {ExtremeMode::two_smallest, ExtremeMode::two_largest}) {
                std::size_t cmp = 0;
                const auto got = select_two_extremes(v.data(), n, mode, &cmp);
                CHECK(got == two_extremes_reference(v, mode));
                CHECK(cmp <= comparison_budget(n));
            }
        }
    }
}

TEST_CASE("survivor sort is stable and ascending") {
    const double m[] = {3, 1, 2};
    CHECK(sort_survivors(m, 3) == std::vector<std::int32_t>{1, 2, 0});

    const double ties[] = {2, 1, 2, 1};
    CHECK(sort_survivors(ties, 4) == std::vector<std::int32_t>{1, 3, 0, 2});

    std::mt19937 rng(8);
    for (int rep = 0; rep < 50; ++rep) {
        std::vector<std::int8_t> v(32);
        for (auto& x : v) x = std::int8_t(rng() % 4);
        const auto order = sort_survivors(v.data(), 32);
        for (std::size_t i = 1; i < order.size(); ++i) {
            const auto a = order[i - 1], b = order[i];
            const bool ascending =
                v[std::size_t(a)] < v[std::size_t(b)] ||
                (v[std::size_t(a)] == v[std::size_t(b)] && a < b);
            CHECK(ascending);
        }
    }
}
