#include "telesurg/circuit.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

#include "telesurg/stab_sim.hpp"

namespace telesurg {

namespace {

void emit(Circuit& c, OpType t, uint32_t q0, uint32_t q1 = 0) {
    c.ops.push_back(Operation{t, q0, q1, -1});
}

uint32_t emit_measure(Circuit& c, OpType t, uint32_t q) {
    uint32_t r = c.num_results++;
    c.ops.push_back(Operation{t, q, 0, int32_t(r)});
    return r;
}

void tick(Circuit& c) { c.ops.push_back(Operation{OpType::Tick, 0, 0, -1}); }

// CX layer order per plaquette corner. Chosen so that two-qubit hook errors
// of X plaquettes lie vertically (perpendicular to the horizontal X_L) and
// those of Z plaquettes horizontally (perpendicular to the vertical Z_L);
// the fault-distance scan pins this down.
struct CornerOffset {
    int dcol, drow;
};
constexpr CornerOffset kNE{+1, -1}, kNW{-1, -1}, kSE{+1, +1}, kSW{-1, +1};

CornerOffset layer_corner(Basis basis, int layer) {
    static constexpr CornerOffset x_order[4] = {kNE, kSE, kNW, kSW};
    static constexpr CornerOffset z_order[4] = {kNE, kNW, kSE, kSW};
    return basis == Basis::X ? x_order[layer] : z_order[layer];
}

}  // namespace

std::vector<Coord> register_coords(const MergedLayout& layout) {
    std::vector<Coord> coords(layout.num_register_qubits);
    for (const auto& q : layout.data_qubits) coords[q.index] = q.coord;
    for (const auto& p : layout.merged_plaquettes) coords[p.auxiliary] = p.center;
    return coords;
}

std::vector<uint32_t> stabilizer_round(Circuit& circuit,
                                       const std::vector<Plaquette>& plaquettes,
                                       const std::vector<Coord>& qubit_coord) {
    std::vector<uint32_t> results(plaquettes.size());

    for (const auto& p : plaquettes) emit(circuit, OpType::ResetZ, p.auxiliary);
    tick(circuit);
    for (const auto& p : plaquettes)
        if (p.basis == Basis::X) emit(circuit, OpType::H, p.auxiliary);
    tick(circuit);

    for (int layer = 0; layer < 4; ++layer) {
        std::set<uint32_t> used;
        for (const auto& p : plaquettes) {
            auto off = layer_corner(p.basis, layer);
            Coord corner{p.center.dcol + off.dcol, p.center.drow + off.drow};
            for (uint32_t q : p.support) {
                if (!(qubit_coord[q] == corner)) continue;
                if (!used.insert(q).second)
                    throw std::logic_error("CX schedule conflict on data qubit " +
                                           std::to_string(q));
                if (p.basis == Basis::X) emit(circuit, OpType::CX, p.auxiliary, q);
                else emit(circuit, OpType::CX, q, p.auxiliary);
                break;
            }
        }
        tick(circuit);
    }

    for (const auto& p : plaquettes)
        if (p.basis == Basis::X) emit(circuit, OpType::H, p.auxiliary);
    tick(circuit);
    for (std::size_t i = 0; i < plaquettes.size(); ++i)
        results[i] = emit_measure(circuit, OpType::MeasureZ, plaquettes[i].auxiliary);
    tick(circuit);
    return results;
}

Circuit build_teleportation_circuit(const ProtocolSpec& spec,
                                    const MergedLayout& layout) {
    if (spec.distance != layout.distance || spec.width != layout.width)
        throw std::invalid_argument("protocol spec does not match layout");
    if (spec.rounds_surgery != 0 && spec.rounds_surgery != spec.distance)
        throw std::invalid_argument("surgery must run exactly d rounds");
    if (spec.rounds_pre != 1 || spec.rounds_post != 1)
        throw std::invalid_argument("init and readout use one stabilizer round each");

    const int d = layout.distance;
    const int w = layout.width;
    const auto coords = register_coords(layout);
    const Basis init_basis = spec.state == LogicalState::Plus ? Basis::X : Basis::Z;
    const OpType init_reset =
        init_basis == Basis::X ? OpType::ResetX : OpType::ResetZ;
    const OpType readout_measure =
        init_basis == Basis::X ? OpType::MeasureX : OpType::MeasureZ;

    Circuit c;
    c.num_qubits = layout.num_register_qubits;

    auto add_detector = [&](std::vector<uint32_t> results, uint32_t plaq,
                            int32_t round) {
        std::sort(results.begin(), results.end());
        c.detectors.push_back(Detector{std::move(results), plaq, round});
    };

    // (1) left patch data in the teleported state's basis, then one round.
    for (const auto& q : layout.left_patch.data_qubits) emit(c, init_reset, q.index);
    tick(c);
    c.meta.pre_round = stabilizer_round(c, layout.left_patch.plaquettes, coords);
    for (std::size_t i = 0; i < layout.left_patch.plaquettes.size(); ++i) {
        const auto& p = layout.left_patch.plaquettes[i];
        if (p.basis == init_basis)
            add_detector({c.meta.pre_round[i]},
                         uint32_t(layout.left_patch.merged_counterpart[i]), 0);
    }

    // (2) link and right patch data in |+>.
    for (uint32_t q : layout.link_data) emit(c, OpType::ResetX, q);
    for (const auto& q : layout.right_patch.data_qubits) emit(c, OpType::ResetX, q.index);
    tick(c);

    // (3) d rounds on the merged patch.
    std::vector<int32_t> pre_of_merged(layout.merged_plaquettes.size(), -1);
    for (std::size_t i = 0; i < layout.left_patch.plaquettes.size(); ++i)
        pre_of_merged[layout.left_patch.merged_counterpart[i]] =
            int32_t(c.meta.pre_round[i]);
    for (int round = 1; round <= d; ++round) {
        auto res = stabilizer_round(c, layout.merged_plaquettes, coords);
        for (std::size_t i = 0; i < layout.merged_plaquettes.size(); ++i) {
            const auto& p = layout.merged_plaquettes[i];
            if (round > 1) {
                add_detector({res[i], c.meta.surgery.back()[i]}, uint32_t(i), round);
            } else if (pre_of_merged[i] >= 0) {
                // Same stabilizer as in the init round; support growth only
                // adds freshly |+>-initialized link qubits to X plaquettes,
                // so the comparison stays deterministic.
                add_detector({res[i], uint32_t(pre_of_merged[i])}, uint32_t(i), round);
            } else if (p.basis == Basis::X) {
                // Fully supported on fresh |+> qubits.
                add_detector({res[i]}, uint32_t(i), round);
            }
            // Z plaquettes touching fresh qubits start with a random value
            // and get their first detector from round 2.
        }
        c.meta.surgery.push_back(std::move(res));
    }

    // (4) X-basis readout of link and left-patch data.
    c.meta.data_readout_mid.assign(layout.num_register_qubits, -1);
    for (const auto& q : layout.left_patch.data_qubits)
        c.meta.data_readout_mid[q.index] =
            int32_t(emit_measure(c, OpType::MeasureX, q.index));
    for (uint32_t q : layout.link_data)
        c.meta.data_readout_mid[q] = int32_t(emit_measure(c, OpType::MeasureX, q));
    tick(c);
    for (std::size_t i = 0; i < layout.merged_plaquettes.size(); ++i) {
        const auto& p = layout.merged_plaquettes[i];
        if (p.basis != Basis::X) continue;
        std::vector<uint32_t> results;
        bool covered = true;
        for (uint32_t q : p.support) {
            int32_t r = c.meta.data_readout_mid[q];
            if (r < 0) covered = false;
            else results.push_back(uint32_t(r));
        }
        if (!covered) continue;  // straddles into the right patch
        results.push_back(c.meta.surgery.back()[i]);
        add_detector(std::move(results), uint32_t(i), d + 1);
    }

    // (5) one stabilizer round on the right patch. Plaquettes whose merged
    // counterpart extended into the link fold in the X readout of the
    // removed qubits.
    c.meta.post_round = stabilizer_round(c, layout.right_patch.plaquettes, coords);
    for (std::size_t i = 0; i < layout.right_patch.plaquettes.size(); ++i) {
        const auto& p = layout.right_patch.plaquettes[i];
        uint32_t mi = uint32_t(layout.right_patch.merged_counterpart[i]);
        const auto& mp = layout.merged_plaquettes[mi];
        std::vector<uint32_t> results = {c.meta.post_round[i],
                                         c.meta.surgery.back()[mi]};
        for (uint32_t q : mp.support) {
            bool in_patch = false;
            for (uint32_t pq : p.support) in_patch |= pq == q;
            if (!in_patch) results.push_back(uint32_t(c.meta.data_readout_mid[q]));
        }
        add_detector(std::move(results), mi, d + 2);
    }

    // (6) final readout of the right patch in the teleported state's basis.
    c.meta.data_readout_final.assign(layout.num_register_qubits, -1);
    for (const auto& q : layout.right_patch.data_qubits)
        c.meta.data_readout_final[q.index] =
            int32_t(emit_measure(c, readout_measure, q.index));
    tick(c);
    for (std::size_t i = 0; i < layout.right_patch.plaquettes.size(); ++i) {
        const auto& p = layout.right_patch.plaquettes[i];
        if (p.basis != init_basis) continue;
        std::vector<uint32_t> results;
        for (uint32_t q : p.support)
            results.push_back(uint32_t(c.meta.data_readout_final[q]));
        results.push_back(c.meta.post_round[i]);
        add_detector(std::move(results),
                     uint32_t(layout.right_patch.merged_counterpart[i]), d + 3);
    }

    // Observable: teleported-state fidelity with the Pauli corrections folded
    // into the parity instead of applied as gates.
    Observable obs;
    obs.label = "teleported_state_parity";
    if (spec.state == LogicalState::Plus) {
        // X_L readout of the teleported state combined with the X_L
        // measurement of the source patch; the X readout of the link top row
        // carries the merge/split byproduct frame.
        for (int col = 0; col < d + w; ++col)
            obs.results.push_back(
                uint32_t(c.meta.data_readout_mid[layout.data_index(col, 0)]));
        for (int col = d + w; col < layout.total_cols(); ++col)
            obs.results.push_back(
                uint32_t(c.meta.data_readout_final[layout.data_index(col, 0)]));
    } else {
        // Z_L readout of the teleported state combined with the joint Z_L Z_L
        // outcome: the product of the link-region Z plaquettes from the last
        // surgery round.
        for (uint32_t i : layout.link_z_product_set)
            obs.results.push_back(c.meta.surgery.back()[i]);
        for (uint32_t q : layout.right_patch.logical_z_support)
            obs.results.push_back(uint32_t(c.meta.data_readout_final[q]));
    }
    std::sort(obs.results.begin(), obs.results.end());
    c.observables.push_back(std::move(obs));
    return c;
}

std::string ValidationReport::summary() const {
    if (ok) return "ok";
    std::ostringstream os;
    os << issues.size() << " issue(s):";
    for (const auto& s : issues) os << "\n  " << s;
    return os.str();
}

ValidationReport validate_circuit(const Circuit& circuit) {
    ValidationReport report;
    auto fail = [&](std::string msg) {
        report.ok = false;
        report.issues.push_back(std::move(msg));
    };

    // Result indices unique and consecutive in emission order.
    uint32_t next_result = 0;
    for (std::size_t i = 0; i < circuit.ops.size(); ++i) {
        const auto& op = circuit.ops[i];
        if (op.is_measurement()) {
            if (op.result != int32_t(next_result))
                fail("operation " + std::to_string(i) +
                     ": non-consecutive result index");
            ++next_result;
        } else if (op.result != -1) {
            fail("operation " + std::to_string(i) + ": stray result index");
        }
    }
    if (next_result != circuit.num_results)
        fail("result count mismatch: " + std::to_string(next_result) + " vs " +
             std::to_string(circuit.num_results));

    // No qubit acted on twice between consecutive tick barriers.
    std::set<uint32_t> seen;
    for (std::size_t i = 0; i < circuit.ops.size(); ++i) {
        const auto& op = circuit.ops[i];
        if (op.type == OpType::Tick) {
            seen.clear();
            continue;
        }
        if (op.q0 >= circuit.num_qubits ||
            (op.is_two_qubit() && op.q1 >= circuit.num_qubits)) {
            fail("operation " + std::to_string(i) + ": qubit out of range");
            continue;
        }
        if (!seen.insert(op.q0).second)
            fail("operation " + std::to_string(i) + ": qubit " +
                 std::to_string(op.q0) + " used twice in one tick");
        if (op.is_two_qubit() && !seen.insert(op.q1).second)
            fail("operation " + std::to_string(i) + ": qubit " +
                 std::to_string(op.q1) + " used twice in one tick");
    }

    auto check_refs = [&](const std::vector<uint32_t>& results,
                          const std::string& what) {
        for (uint32_t r : results)
            if (r >= circuit.num_results) fail(what + ": result index out of range");
    };
    for (const auto& det : circuit.detectors) check_refs(det.results, "detector");
    for (const auto& obs : circuit.observables) check_refs(obs.results, "observable");

    if (!report.ok) return report;

    // Noiseless stabilizer simulation: every detector parity and observable
    // parity must be identically zero, not merely zero on sampled shots.
    NoiselessRun run = run_noiseless(circuit);
    for (std::size_t i = 0; i < circuit.detectors.size(); ++i) {
        if (run.detector_forms[i].any()) {
            const auto& det = circuit.detectors[i];
            fail("detector " + std::to_string(i) + " (plaquette " +
                 std::to_string(det.plaquette) + ", round " +
                 std::to_string(det.round) + ") is not deterministic");
        }
    }
    for (std::size_t i = 0; i < circuit.observables.size(); ++i) {
        if (run.observable_forms[i].any())
            fail("observable " + std::to_string(i) + " (" +
                 circuit.observables[i].label + ") is not deterministic");
    }
    return report;
}

std::string circuit_text(const Circuit& circuit) {
    std::ostringstream os;
    os << "telesurg-circuit v1\n";
    os << "qubits " << circuit.num_qubits << "\n";
    os << "results " << circuit.num_results << "\n";
    for (const auto& op : circuit.ops) {
        switch (op.type) {
            case OpType::ResetZ: os << "RZ " << op.q0; break;
            case OpType::ResetX: os << "RX " << op.q0; break;
            case OpType::H: os << "H " << op.q0; break;
            case OpType::CX: os << "CX " << op.q0 << " " << op.q1; break;
            case OpType::MeasureZ: os << "MZ " << op.q0 << " r" << op.result; break;
            case OpType::MeasureX: os << "MX " << op.q0 << " r" << op.result; break;
            case OpType::Tick: os << "TICK"; break;
        }
        os << "\n";
    }
    for (const auto& det : circuit.detectors) {
        os << "DETECTOR p" << det.plaquette << " t" << det.round;
        for (uint32_t r : det.results) os << " r" << r;
        os << "\n";
    }
    for (const auto& obs : circuit.observables) {
        os << "OBSERVABLE " << obs.label;
        for (uint32_t r : obs.results) os << " r" << r;
        os << "\n";
    }
    return os.str();
}

}  // namespace telesurg
