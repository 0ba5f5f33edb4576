// Rotated surface code layouts: single patches and the merged rectangular
// patch used during surgery, with region tags and logical operator supports.
//
// Conventions (fixed):
//   - data qubits sit at integer grid points (col, row); plaquette centers at
//     half-integer points. Coordinates are stored doubled so everything is
//     integral: data at (2c, 2r), centers at odd pairs.
//   - left/right patch boundaries are X-type, top/bottom are Z-type.
//   - X_L runs along the top row, Z_L along the left column.
//   - the merged patch spans columns [0, 2d+w): left patch, then w link
//     columns, then the right patch. The checkerboard is global, so the
//     embedded patches agree with the merged plaquettes where they overlap.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "telesurg/pauli.hpp"

namespace telesurg {

enum class Basis : uint8_t { X, Z };
enum class Region : uint8_t { Bulk, Link };
enum class QubitKind : uint8_t { Data, Auxiliary };

inline const char* basis_name(Basis b) { return b == Basis::X ? "X" : "Z"; }
inline const char* region_name(Region r) { return r == Region::Bulk ? "bulk" : "link"; }

/// Doubled grid coordinates (exact half-integer arithmetic).
struct Coord {
    int32_t dcol = 0;
    int32_t drow = 0;
    bool operator==(const Coord&) const = default;
};

struct Qubit {
    uint32_t index = 0;
    Coord coord;
    QubitKind kind = QubitKind::Data;
};

struct Plaquette {
    Basis basis = Basis::Z;
    std::vector<uint32_t> support;  // 2 or 4 data qubit indices
    uint32_t auxiliary = 0;
    Region region = Region::Bulk;
    Coord center;

    PauliString pauli(std::size_t num_register_qubits) const {
        PauliString p(num_register_qubits);
        for (uint32_t q : support) basis == Basis::X ? p.mul_x(q) : p.mul_z(q);
        return p;
    }
};

/// Rectangle of data qubits, in undoubled column/row units.
struct GridRect {
    int col_lo = 0, col_hi = 0;  // inclusive
    int row_lo = 0, row_hi = 0;  // inclusive
};

struct PatchLayout {
    int distance = 0;
    GridRect rect;
    std::vector<Qubit> data_qubits;
    std::vector<Plaquette> plaquettes;
    std::vector<uint32_t> logical_x_support;  // top row
    std::vector<uint32_t> logical_z_support;  // left column
    uint32_t num_register_qubits = 0;
    // For patches embedded in a MergedLayout: index of the merged plaquette
    // measured at the same center (-1 for standalone patches).
    std::vector<int32_t> merged_counterpart;
};

struct MergedLayout {
    int distance = 0;
    int width = 0;
    PatchLayout left_patch;
    PatchLayout right_patch;
    std::vector<Qubit> data_qubits;  // all (2d+w)*d merged data qubits
    std::vector<uint32_t> link_data;
    std::vector<Plaquette> merged_plaquettes;
    std::vector<uint32_t> link_z_product_set;  // indices into merged_plaquettes
    std::vector<Region> region_of;             // per register qubit
    uint32_t num_register_qubits = 0;

    int total_cols() const { return 2 * distance + width; }
    uint32_t data_index(int col, int row) const {
        return uint32_t(row * total_cols() + col);
    }
};

enum class LogicalOperator : uint8_t { XL, ZL, ZLZL };

/// Standalone distance-d patch. Throws std::invalid_argument unless d is odd
/// and at least 3.
PatchLayout build_patch(int distance);

/// Merged rectangular patch with w link columns between two distance-d
/// patches. Throws std::invalid_argument for invalid d or w.
MergedLayout build_merged_layout(int distance, int width);

/// Canonical representative of a logical operator as a symbolic Pauli string
/// over the layout's register. ZLZL is only defined for merged layouts.
PauliString logical_support(const PatchLayout& layout, LogicalOperator op);
PauliString logical_support(const MergedLayout& layout, LogicalOperator op);

/// Deterministic text dump (one line per qubit and per plaquette).
std::string layout_text(const PatchLayout& layout);
std::string layout_text(const MergedLayout& layout);

}  // namespace telesurg
