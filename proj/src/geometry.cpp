#include "telesurg/geometry.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace telesurg {

namespace {

// Global checkerboard shared by a merged patch and its embedded patches.
Basis basis_at(int center_col_base, int center_row_base) {
    return ((center_col_base + center_row_base) % 2 + 2) % 2 == 0 ? Basis::Z
                                                                  : Basis::X;
}

// Enumerates the plaquettes of a rotated patch on `rect`. Boundary rule:
// columns col_lo/col_hi terminate X strings (weight-2 X plaquettes), rows
// row_lo/row_hi terminate Z strings (weight-2 Z plaquettes).
// `data_index(col,row)` maps a grid point to its register index.
template <typename IndexFn>
std::vector<Plaquette> enumerate_plaquettes(const GridRect& rect, IndexFn data_index) {
    std::vector<Plaquette> out;
    for (int rb = rect.row_lo - 1; rb <= rect.row_hi; ++rb) {
        for (int cb = rect.col_lo - 1; cb <= rect.col_hi; ++cb) {
            Basis basis = basis_at(cb, rb);
            bool col_edge = (cb == rect.col_lo - 1) || (cb == rect.col_hi);
            bool row_edge = (rb == rect.row_lo - 1) || (rb == rect.row_hi);
            if (col_edge && row_edge) continue;  // corner, weight 1
            if (col_edge && basis != Basis::X) continue;
            if (row_edge && basis != Basis::Z) continue;
            Plaquette p;
            p.basis = basis;
            p.center = Coord{2 * cb + 1, 2 * rb + 1};
            for (int dr = 0; dr <= 1; ++dr)
                for (int dc = 0; dc <= 1; ++dc) {
                    int c = cb + dc, r = rb + dr;
                    if (c < rect.col_lo || c > rect.col_hi || r < rect.row_lo ||
                        r > rect.row_hi)
                        continue;
                    p.support.push_back(data_index(c, r));
                }
            std::sort(p.support.begin(), p.support.end());
            out.push_back(std::move(p));
        }
    }
    // Row-major over centers already; keep that as the canonical order.
    return out;
}

void check_distance(int d) {
    if (d < 3 || d % 2 == 0)
        throw std::invalid_argument("distance must be an odd integer >= 3, got " +
                                    std::to_string(d));
}

}  // namespace

PatchLayout build_patch(int distance) {
    check_distance(distance);
    const int d = distance;
    PatchLayout layout;
    layout.distance = d;
    layout.rect = GridRect{0, d - 1, 0, d - 1};
    auto data_index = [d](int c, int r) { return uint32_t(r * d + c); };
    for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c)
            layout.data_qubits.push_back(
                Qubit{data_index(c, r), Coord{2 * c, 2 * r}, QubitKind::Data});
    layout.plaquettes = enumerate_plaquettes(layout.rect, data_index);
    uint32_t aux = uint32_t(d) * uint32_t(d);
    for (auto& p : layout.plaquettes) p.auxiliary = aux++;
    layout.num_register_qubits = aux;
    layout.merged_counterpart.assign(layout.plaquettes.size(), -1);
    for (int c = 0; c < d; ++c) layout.logical_x_support.push_back(data_index(c, 0));
    for (int r = 0; r < d; ++r) layout.logical_z_support.push_back(data_index(0, r));
    return layout;
}

MergedLayout build_merged_layout(int distance, int width) {
    check_distance(distance);
    if (width < 1)
        throw std::invalid_argument("link width must be >= 1, got " +
                                    std::to_string(width));
    const int d = distance, w = width;
    const int W = 2 * d + w;

    MergedLayout m;
    m.distance = d;
    m.width = w;
    auto data_index = [W](int c, int r) { return uint32_t(r * W + c); };
    for (int r = 0; r < d; ++r)
        for (int c = 0; c < W; ++c)
            m.data_qubits.push_back(
                Qubit{data_index(c, r), Coord{2 * c, 2 * r}, QubitKind::Data});

    GridRect full{0, W - 1, 0, d - 1};
    m.merged_plaquettes = enumerate_plaquettes(full, data_index);
    uint32_t aux = uint32_t(W) * uint32_t(d);
    for (auto& p : m.merged_plaquettes) p.auxiliary = aux++;
    m.num_register_qubits = aux;

    // Region tags: data qubits in the w link columns are link; a plaquette
    // (and its auxiliary) is link iff its whole support sits in link columns.
    m.region_of.assign(m.num_register_qubits, Region::Bulk);
    auto col_of = [W](uint32_t data_id) { return int(data_id % uint32_t(W)); };
    auto is_link_col = [&](int c) { return c >= d && c < d + w; };
    for (int r = 0; r < d; ++r)
        for (int c = d; c < d + w; ++c) {
            m.link_data.push_back(data_index(c, r));
            m.region_of[data_index(c, r)] = Region::Link;
        }
    for (auto& p : m.merged_plaquettes) {
        bool all_link = true;
        for (uint32_t q : p.support) all_link = all_link && is_link_col(col_of(q));
        if (all_link) {
            p.region = Region::Link;
            m.region_of[p.auxiliary] = Region::Link;
        }
    }

    // Z plaquettes whose support touches the link columns; their product is
    // Z on column d-1 times Z on column d+w, i.e. Z_L(left) * Z_L(right).
    for (std::size_t i = 0; i < m.merged_plaquettes.size(); ++i) {
        const auto& p = m.merged_plaquettes[i];
        if (p.basis != Basis::Z) continue;
        bool touches = false;
        for (uint32_t q : p.support) touches = touches || is_link_col(col_of(q));
        if (touches) m.link_z_product_set.push_back(uint32_t(i));
    }

    // Embedded patches share the register: same data indices, and each patch
    // plaquette reuses the auxiliary of the merged plaquette at its center.
    auto embed_patch = [&](int col_lo) {
        PatchLayout p;
        p.distance = d;
        p.rect = GridRect{col_lo, col_lo + d - 1, 0, d - 1};
        p.num_register_qubits = m.num_register_qubits;
        for (int r = 0; r < d; ++r)
            for (int c = col_lo; c < col_lo + d; ++c)
                p.data_qubits.push_back(
                    Qubit{data_index(c, r), Coord{2 * c, 2 * r}, QubitKind::Data});
        p.plaquettes = enumerate_plaquettes(p.rect, data_index);
        for (auto& pl : p.plaquettes) {
            int32_t found = -1;
            for (std::size_t i = 0; i < m.merged_plaquettes.size(); ++i) {
                if (m.merged_plaquettes[i].center == pl.center) {
                    found = int32_t(i);
                    break;
                }
            }
            if (found < 0 || m.merged_plaquettes[found].basis != pl.basis)
                throw std::logic_error("embedded plaquette has no merged counterpart");
            pl.auxiliary = m.merged_plaquettes[found].auxiliary;
            pl.region = m.merged_plaquettes[found].region;
            p.merged_counterpart.push_back(found);
        }
        for (int c = col_lo; c < col_lo + d; ++c)
            p.logical_x_support.push_back(data_index(c, 0));
        for (int r = 0; r < d; ++r)
            p.logical_z_support.push_back(data_index(col_lo, r));
        return p;
    };
    m.left_patch = embed_patch(0);
    m.right_patch = embed_patch(d + w);
    return m;
}

PauliString logical_support(const PatchLayout& layout, LogicalOperator op) {
    PauliString p(layout.num_register_qubits);
    switch (op) {
        case LogicalOperator::XL:
            for (uint32_t q : layout.logical_x_support) p.mul_x(q);
            return p;
        case LogicalOperator::ZL:
            for (uint32_t q : layout.logical_z_support) p.mul_z(q);
            return p;
        case LogicalOperator::ZLZL:
            throw std::invalid_argument("ZLZL is not defined on a single patch");
    }
    throw std::invalid_argument("unknown logical operator");
}

PauliString logical_support(const MergedLayout& layout, LogicalOperator op) {
    PauliString p(layout.num_register_qubits);
    switch (op) {
        case LogicalOperator::XL:
            // Logical X of the merged code: full top row.
            for (int c = 0; c < layout.total_cols(); ++c)
                p.mul_x(layout.data_index(c, 0));
            return p;
        case LogicalOperator::ZL:
            for (int r = 0; r < layout.distance; ++r)
                p.mul_z(layout.data_index(0, r));
            return p;
        case LogicalOperator::ZLZL:
            // Z on the two columns facing the link: the canonical
            // representative produced by the link Z-plaquette product.
            for (int r = 0; r < layout.distance; ++r) {
                p.mul_z(layout.data_index(layout.distance - 1, r));
                p.mul_z(layout.data_index(layout.distance + layout.width, r));
            }
            return p;
    }
    throw std::invalid_argument("unknown logical operator");
}

namespace {

void dump_qubits(std::ostringstream& os, const std::vector<Qubit>& qubits,
                 const std::vector<Region>* regions) {
    for (const auto& q : qubits) {
        os << "qubit " << q.index << " data " << q.coord.dcol / 2 << " "
           << q.coord.drow / 2;
        if (regions) os << " " << region_name((*regions)[q.index]);
        os << "\n";
    }
}

void dump_plaquettes(std::ostringstream& os, const std::vector<Plaquette>& ps) {
    for (std::size_t i = 0; i < ps.size(); ++i) {
        const auto& p = ps[i];
        os << "plaquette " << i << " " << basis_name(p.basis) << " center "
           << p.center.dcol << "/2 " << p.center.drow << "/2 aux " << p.auxiliary
           << " " << region_name(p.region) << " support";
        for (uint32_t q : p.support) os << " " << q;
        os << "\n";
    }
}

}  // namespace

std::string layout_text(const PatchLayout& layout) {
    std::ostringstream os;
    os << "patch d=" << layout.distance << "\n";
    dump_qubits(os, layout.data_qubits, nullptr);
    dump_plaquettes(os, layout.plaquettes);
    return os.str();
}

std::string layout_text(const MergedLayout& layout) {
    std::ostringstream os;
    os << "merged d=" << layout.distance << " w=" << layout.width << "\n";
    dump_qubits(os, layout.data_qubits, &layout.region_of);
    dump_plaquettes(os, layout.merged_plaquettes);
    os << "link_z_product_set";
    for (uint32_t i : layout.link_z_product_set) os << " " << i;
    os << "\n";
    return os.str();
}

}  // namespace telesurg
