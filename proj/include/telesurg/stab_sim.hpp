// Noiseless stabilizer simulation of a circuit.
//
// Every measurement outcome of a stabilizer circuit is an affine GF(2)
// function of independent random bits introduced at non-deterministic
// collapses. The tableau tracks those functions symbolically, so one run
// yields every outcome as a form over "gauge bits": a detector or observable
// is deterministic iff its form is identically zero, and sampling a shot is
// evaluating the forms at a random gauge assignment.
#pragma once

#include <cstdint>

#include "telesurg/bits.hpp"
#include "telesurg/circuit.hpp"

namespace telesurg {

struct NoiselessRun {
    std::size_t num_gauge = 0;
    std::size_t form_bits = 0;            // 1 constant bit + gauge bits
    std::vector<BitVec> result_forms;     // per measurement result
    std::vector<BitVec> detector_forms;   // XOR of member result forms
    std::vector<BitVec> observable_forms;
};

NoiselessRun run_noiseless(const Circuit& circuit);

struct NoiselessBatch {
    BitMat results;      // shots x results
    BitMat detectors;    // shots x detectors
    BitMat observables;  // shots x observables
};

/// Draws random gauge bits per shot and evaluates the measurement outcome
/// forms; detector/observable bits are parities of the evaluated results.
NoiselessBatch sample_noiseless(const NoiselessRun& run, const Circuit& circuit,
                                uint64_t shots, uint64_t seed);

}  // namespace telesurg
