#include "doctest.h"

#include <map>
#include <set>
#include <stdexcept>

#include "telesurg/circuit.hpp"
#include "telesurg/stab_sim.hpp"

using namespace telesurg;

namespace {

Circuit teleport(int d, int w, LogicalState state) {
    auto layout = build_merged_layout(d, w);
    ProtocolSpec spec;
    spec.distance = d;
    spec.width = w;
    spec.state = state;
    return build_teleportation_circuit(spec, layout);
}

// Counting oracle: expected measurement total assembled phase by phase from
// the layout, independent of the emitted operation stream.
std::size_t expected_measurements(int d, int w) {
    std::size_t pre = std::size_t(d) * d - 1;
    std::size_t surgery = std::size_t(d) * ((2 * d + w) * d - 1);
    std::size_t mid_data = std::size_t(d) * d + std::size_t(w) * d;
    std::size_t post = std::size_t(d) * d - 1;
    std::size_t final_data = std::size_t(d) * d;
    return pre + surgery + mid_data + post + final_data;
}

std::size_t count_measurements(const Circuit& c) {
    std::size_t n = 0;
    for (const auto& op : c.ops) n += op.is_measurement();
    return n;
}

}  // namespace

TEST_CASE("stabilizer round structure") {
    auto layout = build_merged_layout(3, 1);
    auto coords = register_coords(layout);
    Circuit c;
    c.num_qubits = layout.num_register_qubits;

    SUBCASE("single weight-4 Z plaquette: 6 ops touching the auxiliary") {
        const Plaquette* zp = nullptr;
        for (const auto& p : layout.merged_plaquettes)
            if (p.basis == Basis::Z && p.support.size() == 4) zp = &p;
        REQUIRE(zp);
        auto res = stabilizer_round(c, {*zp}, coords);
        CHECK(res.size() == 1);
        std::size_t on_aux = 0, cx = 0, ticks = 0;
        for (const auto& op : c.ops) {
            if (op.type == OpType::Tick) {
                ++ticks;
                continue;
            }
            if (op.q0 == zp->auxiliary || (op.is_two_qubit() && op.q1 == zp->auxiliary))
                ++on_aux;
            if (op.type == OpType::CX) ++cx;
        }
        CHECK(on_aux == 6);  // reset + 4 CX + measure, no H for Z type
        CHECK(cx == 4);
        CHECK(ticks == 8);
    }

    SUBCASE("full round: every data qubit at most once per CX layer") {
        auto res = stabilizer_round(c, layout.merged_plaquettes, coords);
        CHECK(res.size() == layout.merged_plaquettes.size());
        std::set<uint32_t> seen;
        for (const auto& op : c.ops) {
            if (op.type == OpType::Tick) {
                seen.clear();
                continue;
            }
            CHECK(seen.insert(op.q0).second);
            if (op.is_two_qubit()) CHECK(seen.insert(op.q1).second);
        }
    }

    SUBCASE("adjacent plaquettes use different layers for a shared qubit") {
        const auto& ps = layout.merged_plaquettes;
        bool found = false;
        for (std::size_t a = 0; a < ps.size() && !found; ++a)
            for (std::size_t b = a + 1; b < ps.size() && !found; ++b)
                for (uint32_t qa : ps[a].support)
                    for (uint32_t qb : ps[b].support)
                        if (qa == qb && !found) {
                            Circuit cc;
                            cc.num_qubits = layout.num_register_qubits;
                            stabilizer_round(cc, {ps[a], ps[b]}, coords);
                            int layer = 0, la = -1, lb = -1;
                            for (const auto& op : cc.ops) {
                                if (op.type == OpType::Tick) ++layer;
                                if (op.type == OpType::CX &&
                                    (op.q0 == qa || op.q1 == qa)) {
                                    if (op.q0 == ps[a].auxiliary ||
                                        op.q1 == ps[a].auxiliary)
                                        la = layer;
                                    else lb = layer;
                                }
                            }
                            CHECK(la >= 0);
                            CHECK(lb >= 0);
                            CHECK(la != lb);
                            found = true;
                        }
        CHECK(found);
    }
}

TEST_CASE("measurement count matches the counting oracle") {
    for (auto [d, w] : {std::pair{3, 1}, {3, 2}, {5, 1}, {5, 3}}) {
        auto c = teleport(d, w, LogicalState::Plus);
        CHECK(count_measurements(c) == expected_measurements(d, w));
        CHECK(c.num_results == expected_measurements(d, w));
    }
    // frozen golden value for the d=3, w=1 protocol
    CHECK(count_measurements(teleport(3, 1, LogicalState::Plus)) == 97);
}

TEST_CASE("surgery phase contains exactly d full merged rounds") {
    for (int d : {3, 5}) {
        auto c = teleport(d, 1, LogicalState::Plus);
        CHECK(c.meta.surgery.size() == std::size_t(d));
        for (const auto& round : c.meta.surgery)
            CHECK(round.size() == std::size_t((2 * d + 1) * d - 1));
    }
}

TEST_CASE("mismatched layout is rejected") {
    auto layout = build_merged_layout(3, 1);
    ProtocolSpec spec;
    spec.distance = 5;
    spec.width = 1;
    CHECK_THROWS_AS(build_teleportation_circuit(spec, layout), std::invalid_argument);
    spec.distance = 3;
    spec.rounds_surgery = 2;
    CHECK_THROWS_AS(build_teleportation_circuit(spec, layout), std::invalid_argument);
}

TEST_CASE("teleportation circuits validate for d<=5, w<=3, both states") {
    for (int d : {3, 5}) {
        for (int w : {1, 2, 3}) {
            for (auto state : {LogicalState::Plus, LogicalState::Zero}) {
                CAPTURE(d);
                CAPTURE(w);
                CAPTURE(int(state));
                auto c = teleport(d, w, state);
                auto report = validate_circuit(c);
                INFO(report.summary());
                CHECK(report.ok);
            }
        }
    }
}

TEST_CASE("noiseless shots: all detectors and observables zero") {
    for (auto state : {LogicalState::Plus, LogicalState::Zero}) {
        auto c = teleport(3, 1, state);
        auto run = run_noiseless(c);
        auto batch = sample_noiseless(run, c, 1000, 12345);
        CHECK(batch.detectors.count_ones() == 0);
        CHECK(batch.observables.count_ones() == 0);
        // but the raw results are not all deterministic
        CHECK(run.num_gauge > 0);
        CHECK(batch.results.count_ones() > 0);
    }
}

TEST_CASE("zero-state frame absorbs a -1 joint logical outcome") {
    int d = 3, w = 1;
    auto layout = build_merged_layout(d, w);
    ProtocolSpec spec;
    spec.distance = d;
    spec.width = w;
    spec.state = LogicalState::Zero;
    auto c = build_teleportation_circuit(spec, layout);
    auto run = run_noiseless(c);
    auto batch = sample_noiseless(run, c, 256, 7);
    std::size_t minus_shots = 0;
    for (std::size_t s = 0; s < 256; ++s) {
        bool raw_zz = false;
        for (uint32_t i : layout.link_z_product_set)
            raw_zz ^= batch.results.get(s, c.meta.surgery.back()[i]);
        if (raw_zz) ++minus_shots;
        CHECK(batch.observables.get(s, 0) == false);
    }
    // the joint outcome itself is a fair coin
    CHECK(minus_shots > 64);
    CHECK(minus_shots < 192);
}

TEST_CASE("validation rejects a detector on a random first-round link plaquette") {
    int d = 3, w = 1;
    auto layout = build_merged_layout(d, w);
    auto c = teleport(d, w, LogicalState::Plus);
    // A Z plaquette touching the link: its first surgery-round value is
    // random because the link qubits start in |+>.
    int link_z = -1;
    for (uint32_t i : layout.link_z_product_set) link_z = int(i);
    REQUIRE(link_z >= 0);
    Detector bogus;
    bogus.results = {c.meta.surgery[0][link_z]};
    bogus.plaquette = uint32_t(link_z);
    bogus.round = 1;
    c.detectors.push_back(bogus);
    auto report = validate_circuit(c);
    CHECK(!report.ok);
    bool named = false;
    for (const auto& issue : report.issues)
        named = named || issue.find("plaquette " + std::to_string(link_z)) !=
                             std::string::npos;
    CHECK(named);
}

TEST_CASE("validation rejects an observable missing the mid-circuit readout") {
    auto c = teleport(3, 1, LogicalState::Plus);
    // Drop the step-4 contributions from the observable: the remaining
    // parity is no longer deterministic.
    auto& obs = c.observables[0];
    std::vector<uint32_t> kept;
    for (uint32_t r : obs.results) {
        bool from_mid = false;
        for (int32_t m : c.meta.data_readout_mid) from_mid |= m == int32_t(r);
        if (!from_mid) kept.push_back(r);
    }
    REQUIRE(kept.size() < obs.results.size());
    obs.results = kept;
    auto report = validate_circuit(c);
    CHECK(!report.ok);
}

TEST_CASE("structural validation catches malformed circuits") {
    auto c = teleport(3, 1, LogicalState::Plus);
    SUBCASE("dangling result reference") {
        c.detectors[0].results.push_back(c.num_results + 5);
        CHECK(!validate_circuit(c).ok);
    }
    SUBCASE("qubit used twice inside a tick") {
        Circuit bad;
        bad.num_qubits = 2;
        bad.ops.push_back(Operation{OpType::H, 0, 0, -1});
        bad.ops.push_back(Operation{OpType::CX, 0, 1, -1});
        CHECK(!validate_circuit(bad).ok);
    }
}

TEST_CASE("circuit text is deterministic and complete") {
    auto a = circuit_text(teleport(3, 1, LogicalState::Plus));
    auto b = circuit_text(teleport(3, 1, LogicalState::Plus));
    CHECK(a == b);
    CHECK(a.find("telesurg-circuit v1\n") == 0);
    CHECK(a.find("TICK") != std::string::npos);
    CHECK(a.find("DETECTOR") != std::string::npos);
    CHECK(a.find("OBSERVABLE teleported_state_parity") != std::string::npos);
}

TEST_CASE("symbolic tableau: entangled pair gives correlated random results") {
    // Hand-built: H(0), CX(0,1), MZ(0), MZ(1) — both outcomes random but equal.
    Circuit c;
    c.num_qubits = 2;
    c.ops.push_back(Operation{OpType::ResetZ, 0, 0, -1});
    c.ops.push_back(Operation{OpType::ResetZ, 1, 0, -1});
    c.ops.push_back(Operation{OpType::H, 0, 0, -1});
    c.ops.push_back(Operation{OpType::CX, 0, 1, -1});
    c.ops.push_back(Operation{OpType::MeasureZ, 0, 0, 0});
    c.ops.push_back(Operation{OpType::MeasureZ, 1, 0, 1});
    c.num_results = 2;
    c.detectors.push_back(Detector{{0, 1}, 0, 0});
    auto run = run_noiseless(c);
    CHECK(run.result_forms[0].any());
    CHECK(run.result_forms[0] == run.result_forms[1]);
    CHECK(!run.detector_forms[0].any());
    auto batch = sample_noiseless(run, c, 512, 3);
    std::size_t ones = 0;
    for (std::size_t s = 0; s < 512; ++s) {
        CHECK(batch.results.get(s, 0) == batch.results.get(s, 1));
        ones += batch.results.get(s, 0);
    }
    CHECK(ones > 128);
    CHECK(ones < 384);
}
