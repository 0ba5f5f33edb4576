// Two-region circuit-level noise annotation.
//
// Every gate is followed by one depolarizing channel (p/3 per single-qubit
// Pauli, p/15 per nontrivial two-qubit Pauli), every reset by one
// orthogonal-state preparation flip, and every measurement by one classical
// result flip. The rate is p_link iff any qubit the operation touches is
// tagged link, else p_bulk. Idle qubits get no noise.
#pragma once

#include <string>
#include <vector>

#include "telesurg/circuit.hpp"

namespace telesurg {

struct NoiseProfile {
    double p_bulk = 0.0;
    double p_link = 0.0;
};

enum class ChannelKind : uint8_t { Depolarize1, Depolarize2, FlipInit, FlipMeasure };

struct NoiseChannel {
    uint32_t op_index = 0;  // the operation this channel follows
    ChannelKind kind = ChannelKind::Depolarize1;
    Region region = Region::Bulk;
    double p = 0.0;
};

struct NoisyCircuit {
    Circuit base;
    NoiseProfile profile;
    std::vector<Region> qubit_region;
    std::vector<NoiseChannel> channels;  // ordered by op_index
};

/// Rate for one operation under the any-touch region rule. Throws
/// std::invalid_argument if a touched qubit has no region tag.
double region_rate(const Operation& op, const NoiseProfile& profile,
                   const std::vector<Region>& qubit_region);

/// Annotates a circuit; `qubit_region` tags every register qubit (the merged
/// layout's region_of). Throws std::invalid_argument for rates outside
/// [0, 0.5) or missing tags.
NoisyCircuit apply_noise_profile(const Circuit& circuit, const NoiseProfile& profile,
                                 std::vector<Region> qubit_region);

/// Strips and replaces the channels of an annotated circuit.
NoisyCircuit apply_noise_profile(const NoisyCircuit& noisy, const NoiseProfile& profile);

/// Circuit text with channels inline.
std::string noisy_circuit_text(const NoisyCircuit& noisy);

}  // namespace telesurg
