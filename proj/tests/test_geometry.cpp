#include "doctest.h"

#include <set>
#include <stdexcept>

#include "telesurg/geometry.hpp"

using namespace telesurg;

namespace {

int count_basis(const std::vector<Plaquette>& ps, Basis b) {
    int n = 0;
    for (const auto& p : ps) n += p.basis == b;
    return n;
}

std::vector<PauliString> plaquette_paulis(const std::vector<Plaquette>& ps,
                                          uint32_t num_qubits) {
    std::vector<PauliString> out;
    for (const auto& p : ps) out.push_back(p.pauli(num_qubits));
    return out;
}

void check_pairwise_commuting(const std::vector<PauliString>& ps) {
    for (std::size_t i = 0; i < ps.size(); ++i)
        for (std::size_t j = i + 1; j < ps.size(); ++j)
            REQUIRE(ps[i].commutes_with(ps[j]));
}

}  // namespace

TEST_CASE("patch counts and basis split") {
    auto p3 = build_patch(3);
    CHECK(p3.data_qubits.size() == 9);
    CHECK(p3.plaquettes.size() == 8);
    CHECK(count_basis(p3.plaquettes, Basis::X) == 4);
    CHECK(count_basis(p3.plaquettes, Basis::Z) == 4);

    auto p5 = build_patch(5);
    CHECK(p5.data_qubits.size() == 25);
    CHECK(p5.plaquettes.size() == 24);
}

TEST_CASE("invalid distances are rejected") {
    CHECK_THROWS_AS(build_patch(2), std::invalid_argument);
    CHECK_THROWS_AS(build_patch(4), std::invalid_argument);
    CHECK_THROWS_AS(build_patch(1), std::invalid_argument);
    CHECK_THROWS_AS(build_merged_layout(3, 0), std::invalid_argument);
    CHECK_THROWS_AS(build_merged_layout(4, 1), std::invalid_argument);
}

TEST_CASE("patch plaquette structure") {
    for (int d : {3, 5}) {
        auto p = build_patch(d);
        int w2 = 0;
        for (const auto& pl : p.plaquettes) {
            REQUIRE((pl.support.size() == 2 || pl.support.size() == 4));
            if (pl.support.size() == 2) {
                ++w2;
                // weight-2 plaquettes only on the boundary: X on left/right
                // columns, Z on top/bottom rows.
                bool col_edge = pl.center.dcol == -1 || pl.center.dcol == 2 * d - 1;
                bool row_edge = pl.center.drow == -1 || pl.center.drow == 2 * d - 1;
                if (pl.basis == Basis::X) CHECK(col_edge);
                else CHECK(row_edge);
            }
            // support qubits mutually adjacent: all within one grid cell
            for (uint32_t q : pl.support) {
                const auto& c = p.data_qubits[q].coord;
                CHECK(std::abs(c.dcol - pl.center.dcol) == 1);
                CHECK(std::abs(c.drow - pl.center.drow) == 1);
            }
        }
        CHECK(w2 == 2 * (d - 1));
    }
}

TEST_CASE("patch logical operators") {
    for (int d : {3, 5}) {
        auto p = build_patch(d);
        auto xl = logical_support(p, LogicalOperator::XL);
        auto zl = logical_support(p, LogicalOperator::ZL);
        CHECK(xl.weight() == std::size_t(d));
        CHECK(zl.weight() == std::size_t(d));
        CHECK(!xl.commutes_with(zl));  // odd overlap
        std::set<uint32_t> overlap;
        for (uint32_t q : p.logical_x_support)
            for (uint32_t r : p.logical_z_support)
                if (q == r) overlap.insert(q);
        CHECK(overlap.size() % 2 == 1);
        for (const auto& pl : p.plaquettes) {
            auto pp = pl.pauli(p.num_register_qubits);
            CHECK(pp.commutes_with(xl));
            CHECK(pp.commutes_with(zl));
        }
        CHECK_THROWS_AS(logical_support(p, LogicalOperator::ZLZL),
                        std::invalid_argument);
    }
}

TEST_CASE("patch stabilizers commute and have full rank") {
    for (int d : {3, 5}) {
        auto p = build_patch(d);
        auto ps = plaquette_paulis(p.plaquettes, p.num_register_qubits);
        check_pairwise_commuting(ps);
        CHECK(pauli_rank(ps) == p.data_qubits.size() - 1);
    }
}

TEST_CASE("merged layout counts") {
    auto m = build_merged_layout(3, 1);
    CHECK(m.data_qubits.size() == 21);
    CHECK(m.merged_plaquettes.size() == 20);

    auto m53 = build_merged_layout(5, 3);
    CHECK(m53.data_qubits.size() == 65);
    int link_tagged = 0;
    for (uint32_t q : m53.link_data) link_tagged += m53.region_of[q] == Region::Link;
    CHECK(m53.link_data.size() == 15);
    CHECK(link_tagged == 15);
}

TEST_CASE("merged layouts: counts, commutation, rank, regions") {
    for (int d : {3, 5}) {
        for (int w : {1, 2, 3}) {
            CAPTURE(d);
            CAPTURE(w);
            auto m = build_merged_layout(d, w);
            CHECK(int(m.data_qubits.size()) == (2 * d + w) * d);
            CHECK(int(m.merged_plaquettes.size()) == (2 * d + w) * d - 1);
            auto ps = plaquette_paulis(m.merged_plaquettes, m.num_register_qubits);
            check_pairwise_commuting(ps);
            CHECK(pauli_rank(ps) == m.data_qubits.size() - 1);
            CHECK(m.link_data.size() == std::size_t(w * d));
            // every auxiliary belongs to exactly one plaquette
            std::set<uint32_t> aux;
            for (const auto& p : m.merged_plaquettes) {
                CHECK(!aux.count(p.auxiliary));
                aux.insert(p.auxiliary);
            }
            // plaquette is link iff whole support is in link columns
            for (const auto& p : m.merged_plaquettes) {
                bool all_link = true;
                for (uint32_t q : p.support)
                    all_link = all_link && m.region_of[q] == Region::Link;
                CHECK((p.region == Region::Link) == all_link);
                CHECK((m.region_of[p.auxiliary] == Region::Link) == all_link);
            }
        }
    }
}

TEST_CASE("link Z product is the joint logical Z") {
    for (int d : {3, 5}) {
        for (int w : {1, 2, 3}) {
            CAPTURE(d);
            CAPTURE(w);
            auto m = build_merged_layout(d, w);
            PauliString prod(m.num_register_qubits);
            for (uint32_t i : m.link_z_product_set)
                prod *= m.merged_plaquettes[i].pauli(m.num_register_qubits);
            auto zlzl = logical_support(m, LogicalOperator::ZLZL);
            CHECK(prod == zlzl);
            // identity on all link data qubits
            for (uint32_t q : m.link_data) CHECK(prod.identity_on(q));
            CHECK(zlzl.weight() == std::size_t(2 * d));
            // commutes with every merged plaquette
            for (const auto& p : m.merged_plaquettes)
                CHECK(zlzl.commutes_with(p.pauli(m.num_register_qubits)));
        }
    }
}

TEST_CASE("embedded patches are consistent with the merged layout") {
    for (int d : {3, 5}) {
        for (int w : {1, 2, 3}) {
            auto m = build_merged_layout(d, w);
            for (const PatchLayout* patch : {&m.left_patch, &m.right_patch}) {
                CHECK(patch->plaquettes.size() == std::size_t(d * d - 1));
                auto ps = plaquette_paulis(patch->plaquettes, m.num_register_qubits);
                check_pairwise_commuting(ps);
                CHECK(pauli_rank(ps) == std::size_t(d * d - 1));
                for (std::size_t i = 0; i < patch->plaquettes.size(); ++i) {
                    const auto& pl = patch->plaquettes[i];
                    const auto& mp = m.merged_plaquettes[patch->merged_counterpart[i]];
                    CHECK(pl.basis == mp.basis);
                    CHECK(pl.auxiliary == mp.auxiliary);
                    CHECK(pl.center == mp.center);
                    // patch support is the merged support restricted to the patch
                    for (uint32_t q : pl.support) {
                        bool in_merged = false;
                        for (uint32_t mq : mp.support) in_merged |= mq == q;
                        CHECK(in_merged);
                    }
                    CHECK(pl.support.size() <= mp.support.size());
                }
                auto xl = logical_support(*patch, LogicalOperator::XL);
                auto zl = logical_support(*patch, LogicalOperator::ZL);
                CHECK(!xl.commutes_with(zl));
                for (const auto& pl : patch->plaquettes) {
                    auto pp = pl.pauli(m.num_register_qubits);
                    CHECK(pp.commutes_with(xl));
                    CHECK(pp.commutes_with(zl));
                }
            }
        }
    }
}

TEST_CASE("layout text dump is deterministic") {
    auto a = layout_text(build_merged_layout(3, 1));
    auto b = layout_text(build_merged_layout(3, 1));
    CHECK(a == b);
    CHECK(a.find("merged d=3 w=1") == 0);
    CHECK(layout_text(build_patch(3)) == layout_text(build_patch(3)));
}
