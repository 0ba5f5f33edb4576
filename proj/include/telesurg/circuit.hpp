// Time-ordered Clifford circuit for the teleportation protocol, with
// detectors and the logical observable.
//
// Protocol phases, in emission order:
//   1. reset the left patch data in the basis of the teleported state, then
//      one stabilizer round on the left patch (fault-tolerant init),
//   2. reset link and right-patch data in |+>,
//   3. d stabilizer rounds on the merged rectangular patch,
//   4. X-basis measurement of link and left-patch data,
//   5. one stabilizer round on the right patch,
//   6. final data measurement of the right patch in the readout basis
//      (X for |+>, Z for |0>).
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "telesurg/geometry.hpp"

namespace telesurg {

enum class OpType : uint8_t { ResetZ, ResetX, H, CX, MeasureZ, MeasureX, Tick };

struct Operation {
    OpType type;
    uint32_t q0 = 0;
    uint32_t q1 = 0;      // CX target, unused otherwise
    int32_t result = -1;  // measurement result index, -1 otherwise

    bool is_measurement() const {
        return type == OpType::MeasureZ || type == OpType::MeasureX;
    }
    bool is_reset() const {
        return type == OpType::ResetZ || type == OpType::ResetX;
    }
    bool is_two_qubit() const { return type == OpType::CX; }
};

struct Detector {
    std::vector<uint32_t> results;  // XOR of these results is 0 without noise
    uint32_t plaquette = 0;         // merged plaquette index (spacetime tag)
    int32_t round = 0;
};

struct Observable {
    std::vector<uint32_t> results;
    std::string label;
};

enum class LogicalState : uint8_t { Plus, Zero };

inline const char* state_name(LogicalState s) {
    return s == LogicalState::Plus ? "plus" : "zero";
}

struct ProtocolSpec {
    int distance = 3;
    int width = 1;
    LogicalState state = LogicalState::Plus;
    int rounds_surgery = 0;  // filled to d; must stay d
    int rounds_pre = 1;
    int rounds_post = 1;
};

/// Measurement bookkeeping kept alongside the operation stream so tests and
/// the observable logic can address results by protocol role.
struct CircuitMeta {
    std::vector<uint32_t> pre_round;                // per left-patch plaquette
    std::vector<std::vector<uint32_t>> surgery;     // [round][merged plaquette]
    std::vector<int32_t> data_readout_mid;          // per register qubit, -1 if unmeasured
    std::vector<uint32_t> post_round;               // per right-patch plaquette
    std::vector<int32_t> data_readout_final;        // per register qubit, -1 if unmeasured
};

struct Circuit {
    uint32_t num_qubits = 0;
    uint32_t num_results = 0;
    std::vector<Operation> ops;
    std::vector<Detector> detectors;
    std::vector<Observable> observables;
    CircuitMeta meta;
};

/// Emits one interleaved stabilizer measurement round for a plaquette
/// collection, spanning exactly 8 tick barriers (reset, H, 4 CX layers, H,
/// measure). `qubit_coord` maps register indices to grid coordinates (data
/// qubits and auxiliaries). Returns the auxiliary measurement result per
/// plaquette. Throws std::logic_error if two plaquettes claim one data qubit
/// in the same CX layer.
std::vector<uint32_t> stabilizer_round(Circuit& circuit,
                                       const std::vector<Plaquette>& plaquettes,
                                       const std::vector<Coord>& qubit_coord);

/// Coordinate table for a merged layout's full register.
std::vector<Coord> register_coords(const MergedLayout& layout);

/// Full teleportation circuit. Throws std::invalid_argument if the layout
/// does not match the spec.
Circuit build_teleportation_circuit(const ProtocolSpec& spec,
                                    const MergedLayout& layout);

struct ValidationReport {
    bool ok = true;
    std::vector<std::string> issues;
    std::string summary() const;
};

/// Structural invariants plus a noiseless stabilizer simulation proving that
/// every detector is deterministic and every observable parity is zero.
ValidationReport validate_circuit(const Circuit& circuit);

/// Deterministic line-oriented text form.
std::string circuit_text(const Circuit& circuit);

}  // namespace telesurg
