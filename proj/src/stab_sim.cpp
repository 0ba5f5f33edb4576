#include "telesurg/stab_sim.hpp"

#include <bit>
#include <cassert>
#include <stdexcept>

#include "telesurg/rng.hpp"

namespace telesurg {

namespace {

// Aaronson-Gottesman style tableau with destabilizer rows 0..n-1, stabilizer
// rows n..2n-1, and a scratch row. Row phases are GF(2) forms over
// (constant, gauge bits); multiplying rows XORs phase forms since the
// power-of-i bookkeeping depends only on the x/z bits.
class SymbolicTableau {
public:
    SymbolicTableau(uint32_t n, std::size_t max_gauge)
        : n_(n),
          wq_((n + 63) / 64),
          wp_((1 + max_gauge + 63) / 64),
          stride_(2 * wq_ + wp_),
          rows_((2 * std::size_t(n) + 1) * stride_, 0),
          form_bits_(1 + max_gauge) {
        for (uint32_t q = 0; q < n_; ++q) {
            set_bit(xw(q), q);          // destabilizer q = X_q
            set_bit(zw(n_ + q), q);     // stabilizer q = Z_q
        }
    }

    std::size_t gauge_count() const { return gauge_count_; }
    std::size_t form_bits() const { return form_bits_; }

    void h(uint32_t q) {
        for (std::size_t i = 0; i < 2 * n_; ++i) {
            bool x = get_bit(xw(i), q), z = get_bit(zw(i), q);
            if (x && z) pw(i)[0] ^= 1;
            if (x != z) {
                toggle_bit(xw(i), q);
                toggle_bit(zw(i), q);
            }
        }
    }

    void cx(uint32_t c, uint32_t t) {
        for (std::size_t i = 0; i < 2 * n_; ++i) {
            bool xc = get_bit(xw(i), c), zc = get_bit(zw(i), c);
            bool xt = get_bit(xw(i), t), zt = get_bit(zw(i), t);
            if (xc && zt && !(xt ^ zc)) pw(i)[0] ^= 1;
            if (xc) toggle_bit(xw(i), t);
            if (zt) toggle_bit(zw(i), c);
        }
    }

    BitVec measure_z(uint32_t q) {
        std::size_t p = 2 * n_;
        for (std::size_t i = n_; i < 2 * n_; ++i)
            if (get_bit(xw(i), q)) {
                p = i;
                break;
            }
        if (p < 2 * n_) {
            // Non-deterministic: collapse and record a fresh gauge bit.
            for (std::size_t i = 0; i < 2 * n_; ++i)
                if (i != p && i != p - n_ && get_bit(xw(i), q)) rowsum(i, p);
            copy_row(p - n_, p);
            zero_row(p);
            set_bit(zw(p), q);
            BitVec form(form_bits_);
            form.set(1 + gauge_count_++, true);
            if (gauge_count_ > form_bits_ - 1)
                throw std::logic_error("gauge budget exceeded");
            copy_form_to_row(p, form);
            return form;
        }
        // Deterministic: accumulate the stabilizers selected by destabilizer
        // x bits into the scratch row; its phase form is the outcome.
        zero_row(scratch());
        for (std::size_t i = 0; i < n_; ++i)
            if (get_bit(xw(i), q)) rowsum(scratch(), n_ + i);
        BitVec form(form_bits_);
        const uint64_t* ph = pw(scratch());
        for (std::size_t w = 0; w < wp_; ++w) form.words()[w] = ph[w];
        return form;
    }

    /// Applies X_q conditioned on a classical GF(2) form.
    void x_if(uint32_t q, const BitVec& form) {
        for (std::size_t i = 0; i < 2 * n_; ++i)
            if (get_bit(zw(i), q)) xor_form_into_row(i, form);
    }

    void reset_z(uint32_t q) {
        BitVec f = measure_z(q);
        x_if(q, f);
    }

    void reset_x(uint32_t q) {
        h(q);
        reset_z(q);
        h(q);
    }

    BitVec measure_x(uint32_t q) {
        h(q);
        BitVec f = measure_z(q);
        h(q);
        return f;
    }

private:
    uint32_t n_;
    std::size_t wq_, wp_, stride_;
    std::vector<uint64_t> rows_;
    std::size_t form_bits_;
    std::size_t gauge_count_ = 0;

    std::size_t scratch() const { return 2 * n_; }
    uint64_t* row(std::size_t i) { return rows_.data() + i * stride_; }
    const uint64_t* row(std::size_t i) const { return rows_.data() + i * stride_; }
    uint64_t* xw(std::size_t i) { return row(i); }
    uint64_t* zw(std::size_t i) { return row(i) + wq_; }
    uint64_t* pw(std::size_t i) { return row(i) + 2 * wq_; }
    const uint64_t* xw(std::size_t i) const { return row(i); }
    const uint64_t* zw(std::size_t i) const { return row(i) + wq_; }
    const uint64_t* pw(std::size_t i) const { return row(i) + 2 * wq_; }

    static bool get_bit(const uint64_t* w, uint32_t q) {
        return (w[q >> 6] >> (q & 63)) & 1;
    }
    static void set_bit(uint64_t* w, uint32_t q) { w[q >> 6] |= uint64_t(1) << (q & 63); }
    static void toggle_bit(uint64_t* w, uint32_t q) {
        w[q >> 6] ^= uint64_t(1) << (q & 63);
    }

    void zero_row(std::size_t i) {
        std::fill(row(i), row(i) + stride_, 0);
    }
    void copy_row(std::size_t dst, std::size_t src) {
        std::copy(row(src), row(src) + stride_, row(dst));
    }
    void copy_form_to_row(std::size_t i, const BitVec& form) {
        uint64_t* ph = pw(i);
        for (std::size_t w = 0; w < wp_; ++w) ph[w] = form.words()[w];
    }
    void xor_form_into_row(std::size_t i, const BitVec& form) {
        uint64_t* ph = pw(i);
        for (std::size_t w = 0; w < wp_; ++w) ph[w] ^= form.words()[w];
    }

    // row dst := row src * row dst (phases XOR; the power-of-i count from the
    // x/z overlap contributes one extra constant bit and is always even here).
    void rowsum(std::size_t dst, std::size_t src) {
        long long g = 0;
        uint64_t* xd = xw(dst);
        uint64_t* zd = zw(dst);
        const uint64_t* xs = xw(src);
        const uint64_t* zs = zw(src);
        for (std::size_t w = 0; w < wq_; ++w) {
            uint64_t x1 = xs[w], z1 = zs[w], x2 = xd[w], z2 = zd[w];
            uint64_t only_x = x1 & ~z1, both = x1 & z1, only_z = ~x1 & z1;
            uint64_t plus = (only_x & z2 & x2) | (both & z2 & ~x2) | (only_z & x2 & ~z2);
            uint64_t minus = (only_x & z2 & ~x2) | (both & x2 & ~z2) | (only_z & x2 & z2);
            g += std::popcount(plus);
            g -= std::popcount(minus);
            xd[w] ^= x1;
            zd[w] ^= z1;
        }
        int gm = int(((g % 4) + 4) % 4);
        assert(gm == 0 || gm == 2);
        uint64_t* pd = pw(dst);
        const uint64_t* ps = pw(src);
        for (std::size_t w = 0; w < wp_; ++w) pd[w] ^= ps[w];
        if (gm == 2) pd[0] ^= 1;
    }
};

std::size_t count_collapses(const Circuit& circuit) {
    std::size_t n = 0;
    for (const auto& op : circuit.ops)
        if (op.is_measurement() || op.is_reset()) ++n;
    return n;
}

}  // namespace

NoiselessRun run_noiseless(const Circuit& circuit) {
    SymbolicTableau tab(circuit.num_qubits, count_collapses(circuit));
    NoiselessRun run;
    run.form_bits = tab.form_bits();
    run.result_forms.resize(circuit.num_results);
    for (const auto& op : circuit.ops) {
        switch (op.type) {
            case OpType::ResetZ: tab.reset_z(op.q0); break;
            case OpType::ResetX: tab.reset_x(op.q0); break;
            case OpType::H: tab.h(op.q0); break;
            case OpType::CX: tab.cx(op.q0, op.q1); break;
            case OpType::MeasureZ:
                run.result_forms[op.result] = tab.measure_z(op.q0);
                break;
            case OpType::MeasureX:
                run.result_forms[op.result] = tab.measure_x(op.q0);
                break;
            case OpType::Tick: break;
        }
    }
    run.num_gauge = tab.gauge_count();
    auto fold = [&](const std::vector<uint32_t>& results) {
        BitVec form(run.form_bits);
        for (uint32_t r : results) form ^= run.result_forms[r];
        return form;
    };
    for (const auto& det : circuit.detectors)
        run.detector_forms.push_back(fold(det.results));
    for (const auto& obs : circuit.observables)
        run.observable_forms.push_back(fold(obs.results));
    return run;
}

NoiselessBatch sample_noiseless(const NoiselessRun& run, const Circuit& circuit,
                                uint64_t shots, uint64_t seed) {
    NoiselessBatch batch;
    batch.results = BitMat(shots, circuit.num_results);
    batch.detectors = BitMat(shots, circuit.detectors.size());
    batch.observables = BitMat(shots, circuit.observables.size());
    std::size_t words = (run.form_bits + 63) / 64;
    std::vector<uint64_t> gauge(words);
    for (uint64_t s = 0; s < shots; ++s) {
        for (std::size_t w = 0; w < words; ++w)
            gauge[w] = counter_draw(seed, s, w);
        gauge[0] |= 1;  // constant bit always contributes
        for (std::size_t r = 0; r < run.result_forms.size(); ++r) {
            const auto& form = run.result_forms[r];
            uint64_t acc = 0;
            for (std::size_t w = 0; w < form.num_words(); ++w)
                acc ^= form.words()[w] & gauge[w];
            if (std::popcount(acc) & 1) batch.results.set(s, r, true);
        }
        for (std::size_t di = 0; di < circuit.detectors.size(); ++di) {
            bool v = false;
            for (uint32_t r : circuit.detectors[di].results)
                v ^= batch.results.get(s, r);
            if (v) batch.detectors.set(s, di, true);
        }
        for (std::size_t oi = 0; oi < circuit.observables.size(); ++oi) {
            bool v = false;
            for (uint32_t r : circuit.observables[oi].results)
                v ^= batch.results.get(s, r);
            if (v) batch.observables.set(s, oi, true);
        }
    }
    return batch;
}

}  // namespace telesurg
