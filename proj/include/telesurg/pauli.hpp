// Symbolic Pauli strings over a fixed qubit register, used for layout
// invariants (commutation, stabilizer products, group rank).
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "telesurg/bits.hpp"

namespace telesurg {

/// Pauli string up to sign: x bit and z bit per qubit (Y = X*Z).
class PauliString {
public:
    PauliString() = default;
    explicit PauliString(std::size_t num_qubits) : x_(num_qubits), z_(num_qubits) {}

    std::size_t num_qubits() const { return x_.size(); }

    void mul_x(uint32_t q) { x_.flip(q); }
    void mul_z(uint32_t q) { z_.flip(q); }
    void mul_y(uint32_t q) { x_.flip(q); z_.flip(q); }

    bool x(uint32_t q) const { return x_.get(q); }
    bool z(uint32_t q) const { return z_.get(q); }
    bool identity_on(uint32_t q) const { return !x(q) && !z(q); }

    /// Product up to phase.
    void operator*=(const PauliString& o) { x_ ^= o.x_; z_ ^= o.z_; }

    bool commutes_with(const PauliString& o) const {
        return !(x_.parity_and(o.z_) ^ z_.parity_and(o.x_));
    }

    std::size_t weight() const {
        std::size_t n = 0;
        for (std::size_t q = 0; q < num_qubits(); ++q)
            if (x_.get(q) || z_.get(q)) ++n;
        return n;
    }

    bool is_identity() const { return !x_.any() && !z_.any(); }

    bool operator==(const PauliString& o) const { return x_ == o.x_ && z_ == o.z_; }

    std::string str() const {
        std::string s;
        for (std::size_t q = 0; q < num_qubits(); ++q) {
            bool xb = x_.get(q), zb = z_.get(q);
            s += xb ? (zb ? 'Y' : 'X') : (zb ? 'Z' : '_');
        }
        return s;
    }

    const BitVec& x_bits() const { return x_; }
    const BitVec& z_bits() const { return z_; }

private:
    BitVec x_, z_;
};

/// Rank of a set of Pauli strings as GF(2) vectors of (x|z) bits.
inline std::size_t pauli_rank(std::vector<PauliString> rows) {
    if (rows.empty()) return 0;
    std::size_t n = rows[0].num_qubits();
    std::size_t rank = 0;
    for (std::size_t col = 0; col < 2 * n && rank < rows.size(); ++col) {
        auto bit_at = [&](const PauliString& p) {
            return col < n ? p.x(uint32_t(col)) : p.z(uint32_t(col - n));
        };
        std::size_t pivot = rank;
        while (pivot < rows.size() && !bit_at(rows[pivot])) ++pivot;
        if (pivot == rows.size()) continue;
        std::swap(rows[rank], rows[pivot]);
        for (std::size_t r = 0; r < rows.size(); ++r)
            if (r != rank && bit_at(rows[r])) rows[r] *= rows[rank];
        ++rank;
    }
    return rank;
}

}  // namespace telesurg
