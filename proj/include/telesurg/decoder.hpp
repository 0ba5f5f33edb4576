// Syndrome decoding on the matching graph.
//
// MwpmDecoder: per shot, a defect graph is built from Dijkstra searches with
// early termination (k nearest defects plus the boundary), edges dominated
// by boundary routes are pruned, and each connected component is solved with
// an exact blossom perfect matching over defects plus per-defect boundary
// copies. With `neighbors` unlimited the decoding is exact minimum weight.
//
// ExhaustiveDecoder: independent oracle; all-pairs distances by
// Floyd-Warshall and full enumeration of defect pairings (guarded).
#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "telesurg/dem.hpp"
#include "telesurg/sampler.hpp"

namespace telesurg {

/// Fixed-point scale for edge weights used by both decoders.
constexpr int64_t kWeightScale = 1 << 20;
constexpr int64_t kWeightInf = std::numeric_limits<int64_t>::max() / 8;

struct DecodeResult {
    uint64_t observables = 0;  // predicted observable flip mask
    int64_t weight = 0;        // matching weight, in kWeightScale units
};

class MwpmDecoder {
public:
    struct Options {
        uint32_t neighbors = 16;  // defects discovered per Dijkstra source
        bool exact = false;       // unlimited search: exact minimum weight
    };

    explicit MwpmDecoder(const MatchingGraph& graph, Options options = {});

    struct Scratch {
        std::vector<int64_t> dist;
        std::vector<uint64_t> mask;
        std::vector<uint32_t> epoch;
        std::vector<int32_t> defect_at;  // detector -> local defect index
        uint32_t epoch_counter = 0;
    };

    /// `defects` must be sorted detector ids. Throws std::runtime_error when
    /// no valid correction exists (odd component without boundary access).
    DecodeResult decode(const std::vector<uint32_t>& defects, Scratch& scratch) const;
    DecodeResult decode(const std::vector<uint32_t>& defects) const;

    std::size_t num_detectors() const { return num_detectors_; }

private:
    struct Arc {
        uint32_t to;
        int64_t w;
        uint64_t mask;
    };
    std::size_t num_detectors_ = 0;
    Options options_;
    std::vector<Arc> arcs_;            // CSR
    std::vector<uint32_t> arc_start_;  // size num_detectors_+1
    std::vector<int64_t> boundary_w_;  // per detector, kWeightInf if none
    std::vector<uint64_t> boundary_mask_;
};

class ExhaustiveDecoder {
public:
    static constexpr std::size_t kMaxDefects = 12;

    explicit ExhaustiveDecoder(const MatchingGraph& graph);

    /// Exhaustive minimum over all pairings (each defect pairs with another
    /// defect or the boundary). Throws std::invalid_argument beyond
    /// kMaxDefects.
    DecodeResult decode(const std::vector<uint32_t>& defects) const;

private:
    std::size_t n_ = 0;
    std::vector<int64_t> dist_;       // dense all-pairs, kWeightScale units
    std::vector<uint64_t> mask_;
    std::vector<int64_t> boundary_;   // per detector
    std::vector<uint64_t> boundary_mask_;
};

/// Exhaustive minimum-weight mechanism subset reproducing the syndrome.
/// Guard: at most 25 mechanisms. Throws std::invalid_argument otherwise.
DecodeResult decode_exact_mechanisms(const DetectorErrorModel& dem,
                                     const std::vector<uint32_t>& defects);

struct ErrorRateEstimate {
    uint64_t failures = 0;
    uint64_t shots = 0;
    double p_l = 0.0;
    double sigma = 0.0;     // Wald standard error
    double p_upper3 = 0.0;  // rule-of-three bound, only when failures == 0
};

/// Throws std::invalid_argument on zero shots.
ErrorRateEstimate estimate_error_rate(uint64_t failures, uint64_t shots);

/// failure = predicted XOR actual observable parity per shot.
ErrorRateEstimate estimate_error_rate(const SampleBatch& batch,
                                      const std::vector<DecodeResult>& results);

/// Decodes every shot of a batch (parallel over shots).
std::vector<DecodeResult> decode_batch(const MwpmDecoder& decoder,
                                       const SampleBatch& batch, int threads = 1);

}  // namespace telesurg
