// Monte Carlo sampling of detector outcomes and observable flips.
//
// Circuit sampling propagates a Pauli frame per shot; DEM sampling flips
// independent mechanism coins. Both draw counter-based randomness keyed by
// (seed, absolute shot index), so results are bit-identical under any batch
// splitting or thread count. Channel firings are generated with geometric
// skips per probability class, which is exact for independent coins.
#pragma once

#include <cstdint>
#include <vector>

#include "telesurg/bits.hpp"
#include "telesurg/dem.hpp"
#include "telesurg/noise.hpp"

namespace telesurg {

struct SampleBatch {
    uint64_t shots = 0;
    uint64_t seed = 0;
    uint64_t shot_offset = 0;
    BitMat detector_bits;    // shots x detectors
    BitMat observable_bits;  // shots x observables
};

/// Streaming per-shot sampler over a noisy circuit.
class FrameSampler {
public:
    explicit FrameSampler(const NoisyCircuit& noisy);

    struct Shot {
        std::vector<uint32_t> defects;   // flipped detector ids, sorted
        uint64_t observables = 0;        // bit i = observable i flipped
    };

    struct Scratch {
        std::vector<uint8_t> frame_x, frame_z;
        std::vector<uint32_t> fired;          // fired channel indices
        std::vector<uint32_t> flipped_results;
        std::vector<uint8_t> result_flip;
        std::vector<uint8_t> detector_parity;
    };

    /// Deterministic function of (seed, absolute shot index).
    void sample_shot(uint64_t seed, uint64_t abs_shot, Scratch& scratch,
                     Shot& out) const;

    std::size_t num_detectors() const { return circuit_->detectors.size(); }
    std::size_t num_observables() const { return circuit_->observables.size(); }

private:
    const NoisyCircuit* noisy_;
    const Circuit* circuit_;
    // channels grouped by exact probability for geometric skipping
    struct RateClass {
        double p = 0.0;
        double inv_log_1mp = 0.0;
        std::vector<uint32_t> channels;  // indices into noisy_->channels
    };
    std::vector<RateClass> classes_;
    std::vector<std::vector<uint32_t>> dets_of_result_;
    std::vector<uint64_t> obs_of_result_;
    std::vector<uint32_t> op_of_channel_;
};

/// Batch interface: shots [shot_offset, shot_offset + shots).
SampleBatch sample_circuit(const NoisyCircuit& noisy, uint64_t shots,
                           uint64_t seed, uint64_t shot_offset = 0,
                           int threads = 1);

/// Independent-coin sampling of the DEM (cross-check oracle for
/// sample_circuit; identical in distribution for independent mechanisms).
SampleBatch sample_dem(const DetectorErrorModel& dem, uint64_t shots,
                       uint64_t seed, uint64_t shot_offset = 0);

}  // namespace telesurg
