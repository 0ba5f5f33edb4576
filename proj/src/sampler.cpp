#include "telesurg/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <thread>

#include "telesurg/rng.hpp"

namespace telesurg {

namespace {

// Distinct draw streams per purpose; all keyed by (seed, shot, draw index).
constexpr uint64_t kStreamChoice = uint64_t(1) << 62;

inline double unit_open(uint64_t r) {
    // (0, 1]: never returns 0, so log() is safe.
    return (double(r >> 11) + 1.0) * 0x1.0p-53;
}

// Geometric-skip enumeration of fired indices among `count` independent
// Bernoulli(p) coins. Calls visit(k) for every fired k in increasing order.
template <typename Visit>
void enumerate_fires(double p, double inv_log_1mp, uint64_t count, uint64_t seed,
                     uint64_t shot, uint64_t stream, Visit visit) {
    if (p <= 0) return;
    uint64_t pos = 0;
    uint64_t draw = 0;
    while (pos < count) {
        double u = unit_open(counter_draw(seed, shot, stream + draw));
        ++draw;
        double jump = std::floor(std::log(u) * inv_log_1mp);
        if (jump >= double(count)) return;
        pos += uint64_t(jump);
        if (pos >= count) return;
        visit(uint64_t(pos));
        ++pos;
    }
}

}  // namespace

FrameSampler::FrameSampler(const NoisyCircuit& noisy)
    : noisy_(&noisy), circuit_(&noisy.base) {
    std::map<double, std::size_t> class_of;
    for (std::size_t i = 0; i < noisy.channels.size(); ++i) {
        double p = noisy.channels[i].p;
        if (p <= 0) continue;
        auto [it, fresh] = class_of.emplace(p, classes_.size());
        if (fresh) {
            RateClass rc;
            rc.p = p;
            rc.inv_log_1mp = 1.0 / std::log1p(-p);
            classes_.push_back(rc);
        }
        classes_[it->second].channels.push_back(uint32_t(i));
    }
    dets_of_result_.resize(circuit_->num_results);
    obs_of_result_.assign(circuit_->num_results, 0);
    for (std::size_t d = 0; d < circuit_->detectors.size(); ++d)
        for (uint32_t r : circuit_->detectors[d].results)
            dets_of_result_[r].push_back(uint32_t(d));
    for (std::size_t o = 0; o < circuit_->observables.size(); ++o)
        for (uint32_t r : circuit_->observables[o].results)
            obs_of_result_[r] |= uint64_t(1) << o;
    op_of_channel_.resize(noisy.channels.size());
    for (std::size_t i = 0; i < noisy.channels.size(); ++i)
        op_of_channel_[i] = noisy.channels[i].op_index;
}

void FrameSampler::sample_shot(uint64_t seed, uint64_t abs_shot, Scratch& scratch,
                               Shot& out) const {
    out.defects.clear();
    out.observables = 0;

    scratch.fired.clear();
    for (std::size_t c = 0; c < classes_.size(); ++c) {
        const RateClass& rc = classes_[c];
        enumerate_fires(rc.p, rc.inv_log_1mp, rc.channels.size(), seed, abs_shot,
                        uint64_t(c) << 32, [&](uint64_t k) {
                            scratch.fired.push_back(rc.channels[k]);
                        });
    }
    if (scratch.fired.empty()) return;
    std::sort(scratch.fired.begin(), scratch.fired.end());

    scratch.frame_x.assign(circuit_->num_qubits, 0);
    scratch.frame_z.assign(circuit_->num_qubits, 0);
    scratch.result_flip.assign(circuit_->num_results, 0);
    scratch.flipped_results.clear();

    auto* fx = scratch.frame_x.data();
    auto* fz = scratch.frame_z.data();

    // Frames stay identity before the first fault; start the walk there.
    std::size_t fired_pos = 0;
    std::size_t start_op = op_of_channel_[scratch.fired[0]];
    const auto& ops = circuit_->ops;
    for (std::size_t oi = start_op; oi < ops.size(); ++oi) {
        const Operation& op = ops[oi];
        switch (op.type) {
            case OpType::H:
                std::swap(fx[op.q0], fz[op.q0]);
                break;
            case OpType::CX:
                fx[op.q1] ^= fx[op.q0];
                fz[op.q0] ^= fz[op.q1];
                break;
            case OpType::MeasureZ:
                if (fx[op.q0]) {
                    scratch.result_flip[op.result] ^= 1;
                }
                break;
            case OpType::MeasureX:
                if (fz[op.q0]) {
                    scratch.result_flip[op.result] ^= 1;
                }
                break;
            case OpType::ResetZ:
            case OpType::ResetX:
                fx[op.q0] = 0;
                fz[op.q0] = 0;
                break;
            case OpType::Tick:
                break;
        }
        while (fired_pos < scratch.fired.size() &&
               op_of_channel_[scratch.fired[fired_pos]] == oi) {
            uint32_t ci = scratch.fired[fired_pos++];
            const NoiseChannel& ch = noisy_->channels[ci];
            switch (ch.kind) {
                case ChannelKind::FlipMeasure:
                    scratch.result_flip[op.result] ^= 1;
                    break;
                case ChannelKind::FlipInit:
                    if (op.type == OpType::ResetZ) fx[op.q0] ^= 1;
                    else fz[op.q0] ^= 1;
                    break;
                case ChannelKind::Depolarize1: {
                    uint64_t r = counter_draw(seed, abs_shot, kStreamChoice | ci);
                    uint32_t pauli = 1 + draw_choice(r, 3);  // 1=X, 2=Z, 3=Y
                    if (pauli & 1) fx[op.q0] ^= 1;
                    if (pauli & 2) fz[op.q0] ^= 1;
                    break;
                }
                case ChannelKind::Depolarize2: {
                    uint64_t r = counter_draw(seed, abs_shot, kStreamChoice | ci);
                    uint32_t idx = 1 + draw_choice(r, 15);  // 1..15
                    uint32_t pa = idx & 3, pb = idx >> 2;
                    if (pa & 1) fx[op.q0] ^= 1;
                    if (pa & 2) fz[op.q0] ^= 1;
                    if (pb & 1) fx[op.q1] ^= 1;
                    if (pb & 2) fz[op.q1] ^= 1;
                    break;
                }
            }
        }
    }

    for (uint32_t r = 0; r < circuit_->num_results; ++r)
        if (scratch.result_flip[r]) scratch.flipped_results.push_back(r);

    if (scratch.detector_parity.size() < circuit_->detectors.size())
        scratch.detector_parity.assign(circuit_->detectors.size(), 0);
    for (uint32_t r : scratch.flipped_results) {
        for (uint32_t d : dets_of_result_[r]) scratch.detector_parity[d] ^= 1;
        out.observables ^= obs_of_result_[r];
    }
    for (uint32_t r : scratch.flipped_results)
        for (uint32_t d : dets_of_result_[r])
            if (scratch.detector_parity[d]) {
                scratch.detector_parity[d] = 0;
                out.defects.push_back(d);
            }
    std::sort(out.defects.begin(), out.defects.end());
}

namespace {

template <typename ShotFn>
void run_shots(uint64_t shots, uint64_t shot_offset, int threads, ShotFn fn) {
    if (threads <= 1 || shots < 2) {
        for (uint64_t i = 0; i < shots; ++i) fn(shot_offset + i, i);
        return;
    }
    std::vector<std::thread> pool;
    uint64_t chunk = (shots + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
        uint64_t lo = uint64_t(t) * chunk;
        uint64_t hi = std::min(shots, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([=]() {
            for (uint64_t i = lo; i < hi; ++i) fn(shot_offset + i, i);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace

SampleBatch sample_circuit(const NoisyCircuit& noisy, uint64_t shots,
                           uint64_t seed, uint64_t shot_offset, int threads) {
    FrameSampler sampler(noisy);
    SampleBatch batch;
    batch.shots = shots;
    batch.seed = seed;
    batch.shot_offset = shot_offset;
    batch.detector_bits = BitMat(shots, sampler.num_detectors());
    batch.observable_bits = BitMat(shots, sampler.num_observables());
    run_shots(shots, shot_offset, threads, [&](uint64_t abs_shot, uint64_t row) {
        thread_local FrameSampler::Scratch scratch;
        thread_local FrameSampler::Shot shot;
        sampler.sample_shot(seed, abs_shot, scratch, shot);
        for (uint32_t d : shot.defects) batch.detector_bits.set(row, d, true);
        for (std::size_t o = 0; o < sampler.num_observables(); ++o)
            if ((shot.observables >> o) & 1) batch.observable_bits.set(row, o, true);
    });
    return batch;
}

SampleBatch sample_dem(const DetectorErrorModel& dem, uint64_t shots,
                       uint64_t seed, uint64_t shot_offset) {
    SampleBatch batch;
    batch.shots = shots;
    batch.seed = seed;
    batch.shot_offset = shot_offset;
    batch.detector_bits = BitMat(shots, dem.num_detectors);
    batch.observable_bits = BitMat(shots, dem.num_observables);

    struct RateClass {
        double p, inv_log_1mp;
        std::vector<uint32_t> mechanisms;
    };
    std::map<double, std::size_t> class_of;
    std::vector<RateClass> classes;
    for (std::size_t i = 0; i < dem.mechanisms.size(); ++i) {
        double p = dem.mechanisms[i].probability;
        if (p <= 0) continue;
        auto [it, fresh] = class_of.emplace(p, classes.size());
        if (fresh) classes.push_back(RateClass{p, 1.0 / std::log1p(-p), {}});
        classes[it->second].mechanisms.push_back(uint32_t(i));
    }

    for (uint64_t i = 0; i < shots; ++i) {
        uint64_t abs_shot = shot_offset + i;
        for (std::size_t c = 0; c < classes.size(); ++c) {
            const RateClass& rc = classes[c];
            enumerate_fires(rc.p, rc.inv_log_1mp, rc.mechanisms.size(), seed,
                            abs_shot, uint64_t(c) << 32, [&](uint64_t k) {
                                const auto& m = dem.mechanisms[rc.mechanisms[k]];
                                for (uint32_t d : m.symptom.detectors)
                                    batch.detector_bits.flip(i, d);
                                for (uint32_t o : m.symptom.observables)
                                    batch.observable_bits.flip(i, o);
                            });
        }
    }
    return batch;
}

}  // namespace telesurg
