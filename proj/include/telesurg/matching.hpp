// Exact minimum-weight perfect matching on general graphs (blossom
// primal-dual, dense O(n^3)). Weights are nonnegative integers; missing
// edges are forbidden.
#pragma once

#include <cstdint>
#include <vector>

namespace telesurg {

struct MatchEdge {
    uint32_t u = 0;
    uint32_t v = 0;
    int64_t w = 0;  // >= 0
};

struct PerfectMatching {
    int64_t total_weight = 0;
    std::vector<int32_t> mate;  // mate[u] = matched partner
};

/// Throws std::runtime_error if no perfect matching exists.
PerfectMatching min_weight_perfect_matching(uint32_t n,
                                            const std::vector<MatchEdge>& edges);

}  // namespace telesurg
