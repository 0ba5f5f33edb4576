#include "doctest.h"

#include <functional>
#include <limits>
#include <random>
#include <stdexcept>

#include "telesurg/matching.hpp"

using namespace telesurg;

namespace {

constexpr int64_t kInf = std::numeric_limits<int64_t>::max() / 4;

// Exhaustive minimum-weight perfect matching over all pairings (oracle).
int64_t brute_force(uint32_t n, const std::vector<MatchEdge>& edges) {
    std::vector<std::vector<int64_t>> w(n, std::vector<int64_t>(n, kInf));
    for (const auto& e : edges) {
        w[e.u][e.v] = std::min(w[e.u][e.v], e.w);
        w[e.v][e.u] = w[e.u][e.v];
    }
    std::vector<bool> used(n, false);
    std::function<int64_t()> rec = [&]() -> int64_t {
        uint32_t first = n;
        for (uint32_t i = 0; i < n; ++i)
            if (!used[i]) {
                first = i;
                break;
            }
        if (first == n) return 0;
        used[first] = true;
        int64_t best = kInf;
        for (uint32_t j = first + 1; j < n; ++j) {
            if (used[j] || w[first][j] >= kInf) continue;
            used[j] = true;
            int64_t rest = rec();
            if (rest < kInf) best = std::min(best, w[first][j] + rest);
            used[j] = false;
        }
        used[first] = false;
        return best;
    };
    return rec();
}

void check_valid(uint32_t n, const std::vector<MatchEdge>& edges,
                 const PerfectMatching& m) {
    std::vector<std::vector<int64_t>> w(n, std::vector<int64_t>(n, kInf));
    for (const auto& e : edges) {
        w[e.u][e.v] = std::min(w[e.u][e.v], e.w);
        w[e.v][e.u] = w[e.u][e.v];
    }
    int64_t total = 0;
    for (uint32_t u = 0; u < n; ++u) {
        REQUIRE(m.mate[u] >= 0);
        REQUIRE(m.mate[u] < int32_t(n));
        CHECK(m.mate[m.mate[u]] == int32_t(u));
        CHECK(w[u][m.mate[u]] < kInf);
        if (int32_t(u) < m.mate[u]) total += w[u][m.mate[u]];
    }
    CHECK(total == m.total_weight);
}

}  // namespace

TEST_CASE("tiny cases") {
    SUBCASE("empty") {
        auto m = min_weight_perfect_matching(0, {});
        CHECK(m.total_weight == 0);
    }
    SUBCASE("single edge") {
        auto m = min_weight_perfect_matching(2, {{0, 1, 7}});
        CHECK(m.total_weight == 7);
        CHECK(m.mate[0] == 1);
    }
    SUBCASE("square prefers the cheap diagonal pairing") {
        std::vector<MatchEdge> edges = {
            {0, 1, 1}, {1, 2, 10}, {2, 3, 1}, {0, 3, 10}};
        auto m = min_weight_perfect_matching(4, edges);
        CHECK(m.total_weight == 2);
        CHECK(m.mate[0] == 1);
        CHECK(m.mate[2] == 3);
    }
    SUBCASE("infeasible graph throws") {
        CHECK_THROWS_AS(min_weight_perfect_matching(4, {{0, 1, 1}}),
                        std::runtime_error);
        CHECK_THROWS_AS(min_weight_perfect_matching(3, {{0, 1, 1}}),
                        std::runtime_error);
    }
    SUBCASE("zero-weight edges are allowed") {
        auto m = min_weight_perfect_matching(4, {{0, 1, 0}, {2, 3, 0}, {0, 2, 5}});
        CHECK(m.total_weight == 0);
    }
}

TEST_CASE("odd cycles force blossoms") {
    // 6 vertices: a 5-cycle with a pendant; optimal must shrink blossoms.
    std::vector<MatchEdge> edges = {{0, 1, 2}, {1, 2, 2}, {2, 3, 2},
                                    {3, 4, 2}, {4, 0, 2}, {2, 5, 1}};
    auto m = min_weight_perfect_matching(6, edges);
    check_valid(6, edges, m);
    CHECK(m.total_weight == brute_force(6, edges));
}

TEST_CASE("random dense graphs match the brute force") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 400; ++trial) {
        uint32_t n = 2 * (1 + rng() % 5);  // 2..10
        std::vector<MatchEdge> edges;
        for (uint32_t u = 0; u < n; ++u)
            for (uint32_t v = u + 1; v < n; ++v)
                edges.push_back({u, v, int64_t(rng() % 50)});
        auto m = min_weight_perfect_matching(n, edges);
        check_valid(n, edges, m);
        CHECK(m.total_weight == brute_force(n, edges));
    }
}

TEST_CASE("random sparse graphs with a planted perfect matching") {
    std::mt19937_64 rng(777);
    for (int trial = 0; trial < 400; ++trial) {
        uint32_t n = 2 * (2 + rng() % 5);  // 4..12
        std::vector<uint32_t> perm(n);
        for (uint32_t i = 0; i < n; ++i) perm[i] = i;
        std::shuffle(perm.begin(), perm.end(), rng);
        std::vector<MatchEdge> edges;
        for (uint32_t i = 0; i < n; i += 2)
            edges.push_back({perm[i], perm[i + 1], int64_t(rng() % 100)});
        std::size_t extra = rng() % (2 * n);
        for (std::size_t k = 0; k < extra; ++k) {
            uint32_t u = uint32_t(rng() % n), v = uint32_t(rng() % n);
            if (u != v) edges.push_back({u, v, int64_t(rng() % 100)});
        }
        auto m = min_weight_perfect_matching(n, edges);
        check_valid(n, edges, m);
        CHECK(m.total_weight == brute_force(n, edges));
    }
}

TEST_CASE("heavy ties and equal weights") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        uint32_t n = 2 * (2 + rng() % 4);  // 4..10
        std::vector<MatchEdge> edges;
        for (uint32_t u = 0; u < n; ++u)
            for (uint32_t v = u + 1; v < n; ++v)
                edges.push_back({u, v, int64_t(rng() % 3)});
        auto m = min_weight_perfect_matching(n, edges);
        check_valid(n, edges, m);
        CHECK(m.total_weight == brute_force(n, edges));
    }
}

TEST_CASE("boundary-copy structure used by the decoder") {
    // k defects, each with a private boundary copy; boundary copies pair
    // freely at no cost. Mimics the per-shot reduction.
    std::mt19937_64 rng(31337);
    for (int trial = 0; trial < 200; ++trial) {
        uint32_t k = 2 + rng() % 4;  // 2..5 defects
        uint32_t n = 2 * k;
        std::vector<MatchEdge> edges;
        for (uint32_t i = 0; i < k; ++i)
            for (uint32_t j = i + 1; j < k; ++j)
                if (rng() % 3) edges.push_back({i, j, int64_t(1 + rng() % 40)});
        for (uint32_t i = 0; i < k; ++i)
            edges.push_back({i, k + i, int64_t(1 + rng() % 40)});
        for (uint32_t i = 0; i < k; ++i)
            for (uint32_t j = i + 1; j < k; ++j)
                edges.push_back({k + i, k + j, 0});
        auto m = min_weight_perfect_matching(n, edges);
        check_valid(n, edges, m);
        CHECK(m.total_weight == brute_force(n, edges));
    }
}

TEST_CASE("larger instances stay consistent across weight scaling") {
    // Scaling all weights by a constant scales the optimum; catches duals
    // overflow / rounding issues at decoder-like magnitudes.
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 20; ++trial) {
        uint32_t n = 40;
        std::vector<MatchEdge> edges;
        for (uint32_t u = 0; u < n; ++u)
            for (uint32_t v = u + 1; v < n; ++v)
                edges.push_back({u, v, int64_t(1 + rng() % 1000)});
        auto base = min_weight_perfect_matching(n, edges);
        check_valid(n, edges, base);
        auto scaled_edges = edges;
        for (auto& e : scaled_edges) e.w *= 1 << 20;
        auto scaled = min_weight_perfect_matching(n, scaled_edges);
        check_valid(n, scaled_edges, scaled);
        CHECK(scaled.total_weight == base.total_weight * (1 << 20));
    }
}
