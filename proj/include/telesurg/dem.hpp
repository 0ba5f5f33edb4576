// Detector error model: independent fault mechanisms extracted by
// propagating every elementary Pauli fault of every channel through the
// Clifford circuit, plus the matching-graph decomposition.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "telesurg/noise.hpp"

namespace telesurg {

/// Canonical (detectors, observables) flip set.
struct Symptom {
    std::vector<uint32_t> detectors;    // sorted
    std::vector<uint32_t> observables;  // sorted
    bool operator==(const Symptom&) const = default;
    bool operator<(const Symptom& o) const {
        if (detectors != o.detectors) return detectors < o.detectors;
        return observables < o.observables;
    }
    bool empty() const { return detectors.empty() && observables.empty(); }
};

struct FaultMechanism {
    double probability = 0.0;
    Symptom symptom;
    // Suggested graph decomposition: sector/factor symptoms, each with at
    // most 2 detectors, XOR-ing to `symptom`. Singleton when the mechanism
    // itself is graph-like.
    std::vector<Symptom> components;
};

struct DetectorErrorModel {
    std::size_t num_detectors = 0;
    std::size_t num_observables = 0;
    std::vector<FaultMechanism> mechanisms;  // canonically sorted, deduplicated
    std::vector<uint32_t> dead_detectors;    // referenced by no mechanism
    // Mechanisms with no detectors but an observable flip (logical errors the
    // decoder cannot see). None occur for the protocol circuits; kept so the
    // invariant is observable.
    std::vector<std::size_t> undetectable;
};

/// Assumes the noisy circuit has passed validate_circuit. The result is
/// independent of channel enumeration order.
DetectorErrorModel extract_dem(const NoisyCircuit& noisy);

struct GraphEdge {
    int32_t a = -1;        // detector id
    int32_t b = -1;        // detector id, or -1 for the boundary node
    double probability = 0.0;
    double weight = 0.0;   // -ln(p / (1-p))
    uint64_t obs_mask = 0; // bit i = flips observable i
};

struct MatchingGraph {
    std::size_t num_detectors = 0;
    std::size_t num_observables = 0;
    std::vector<GraphEdge> edges;  // sorted by (a, b, obs_mask)
    std::size_t num_undetectable = 0;
};

/// Mechanisms with <= 2 detectors become edges directly; larger ones are
/// replaced by their components, each carrying the full parent probability,
/// and each component must match an existing <= 2-detector symptom. Throws
/// std::runtime_error with a symptom dump otherwise.
MatchingGraph decompose_to_graph(const DetectorErrorModel& dem);

/// Minimum number of graph mechanisms forming an undetected observable flip
/// (empty detector boundary, odd observable parity), via breadth-first
/// search on the parity-doubled graph. std::nullopt when no such set exists.
std::optional<int64_t> min_weight_logical(const MatchingGraph& graph);

/// `error(p) D.. L..` lines, canonically sorted.
std::string dem_text(const DetectorErrorModel& dem);

/// Weighted edge list.
std::string graph_text(const MatchingGraph& graph);

}  // namespace telesurg
