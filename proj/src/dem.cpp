#include "telesurg/dem.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "telesurg/bits.hpp"

namespace telesurg {

namespace {

double xor_probability(double a, double b) { return a * (1 - b) + b * (1 - a); }

struct SymptomHash {
    std::size_t operator()(const Symptom& s) const {
        std::size_t h = 0xcbf29ce484222325ull;
        auto mix = [&](uint32_t v) {
            h ^= v + 0x9e3779b9 + (h << 6) + (h >> 2);
        };
        for (uint32_t d : s.detectors) mix(d);
        mix(0xffffffffu);
        for (uint32_t o : s.observables) mix(o);
        return h;
    }
};

// Sensitivity of future detectors/observables to an X or Z flip on a qubit
// at the current (backward-sweep) position. Bits [0, D) are detectors,
// [D, D+O) observables.
struct SensitivityState {
    std::size_t num_detectors, num_observables;
    std::vector<BitVec> x, z;

    SensitivityState(std::size_t nq, std::size_t nd, std::size_t no)
        : num_detectors(nd), num_observables(no) {
        x.assign(nq, BitVec(nd + no));
        z.assign(nq, BitVec(nd + no));
    }

    Symptom to_symptom(const BitVec& bits) const {
        Symptom s;
        for (std::size_t i = 0; i < num_detectors + num_observables; ++i)
            if (bits.get(i)) {
                if (i < num_detectors) s.detectors.push_back(uint32_t(i));
                else s.observables.push_back(uint32_t(i - num_detectors));
            }
        return s;
    }
};

}  // namespace

DetectorErrorModel extract_dem(const NoisyCircuit& noisy) {
    const Circuit& c = noisy.base;
    const std::size_t nd = c.detectors.size();
    const std::size_t no = c.observables.size();
    if (no > 64) throw std::runtime_error("more than 64 observables unsupported");

    // result index -> (detector, observable) membership bits
    std::vector<BitVec> result_flips(c.num_results, BitVec(nd + no));
    for (std::size_t i = 0; i < nd; ++i)
        for (uint32_t r : c.detectors[i].results) result_flips[r].flip(i);
    for (std::size_t i = 0; i < no; ++i)
        for (uint32_t r : c.observables[i].results) result_flips[r].flip(nd + i);

    SensitivityState sens(c.num_qubits, nd, no);

    DetectorErrorModel dem;
    dem.num_detectors = nd;
    dem.num_observables = no;

    // Contributor probabilities are folded after a sort so the result does
    // not depend on channel enumeration order even at rounding level.
    std::unordered_map<Symptom, std::size_t, SymptomHash> index_of;
    std::vector<std::vector<double>> contributors;
    auto record = [&](const Symptom& symptom, double p,
                      std::vector<Symptom> components) {
        if (symptom.empty() || p <= 0) return;
        auto it = index_of.find(symptom);
        if (it == index_of.end()) {
            index_of.emplace(symptom, dem.mechanisms.size());
            dem.mechanisms.push_back(
                FaultMechanism{0.0, symptom, std::move(components)});
            contributors.push_back({p});
        } else {
            contributors[it->second].push_back(p);
        }
    };

    // Factor = single-qubit X or Z piece of an elementary fault. A fault's
    // symptom is the XOR of its factors' sensitivity sets; the decomposition
    // ladder is full -> (X sector, Z sector) -> per-qubit factors.
    auto fault_symptoms = [&](const std::vector<const BitVec*>& x_factors,
                              const std::vector<const BitVec*>& z_factors,
                              double p) {
        BitVec full(nd + no), xpart(nd + no), zpart(nd + no);
        for (auto* f : x_factors) xpart ^= *f;
        for (auto* f : z_factors) zpart ^= *f;
        full ^= xpart;
        full ^= zpart;
        Symptom fs = sens.to_symptom(full);
        if (fs.empty()) return;
        std::vector<Symptom> components;
        if (fs.detectors.size() <= 2) {
            components.push_back(fs);
        } else {
            auto expand = [&](const BitVec& part,
                              const std::vector<const BitVec*>& factors) {
                Symptom ps = sens.to_symptom(part);
                if (ps.empty()) return;
                if (ps.detectors.size() <= 2) {
                    components.push_back(std::move(ps));
                    return;
                }
                for (auto* f : factors) {
                    Symptom qs = sens.to_symptom(*f);
                    if (qs.empty()) continue;
                    if (qs.detectors.size() > 2)
                        throw std::runtime_error(
                            "undecomposable single-qubit fault symptom");
                    components.push_back(std::move(qs));
                }
            };
            expand(xpart, x_factors);
            expand(zpart, z_factors);
        }
        record(fs, p, std::move(components));
    };

    // One backward pass; each channel acts at the point just after its
    // operation, i.e. before that operation's backward update. Channels are
    // re-sorted by position so enumeration order cannot matter.
    std::vector<NoiseChannel> channels = noisy.channels;
    std::stable_sort(channels.begin(), channels.end(),
                     [](const NoiseChannel& a, const NoiseChannel& b) {
                         return a.op_index < b.op_index;
                     });
    std::size_t ch = channels.size();
    for (std::size_t oi = c.ops.size(); oi-- > 0;) {
        const Operation& op = c.ops[oi];
        while (ch > 0 && channels[ch - 1].op_index == oi) {
            const NoiseChannel& channel = channels[--ch];
            if (channel.p <= 0) continue;
            switch (channel.kind) {
                case ChannelKind::FlipMeasure: {
                    Symptom s = sens.to_symptom(result_flips[op.result]);
                    if (!s.empty()) record(s, channel.p, {s});
                    break;
                }
                case ChannelKind::FlipInit: {
                    const BitVec& f = op.type == OpType::ResetZ ? sens.x[op.q0]
                                                                : sens.z[op.q0];
                    Symptom s = sens.to_symptom(f);
                    if (!s.empty()) {
                        if (s.detectors.size() > 2)
                            throw std::runtime_error(
                                "undecomposable init-flip symptom");
                        record(s, channel.p, {s});
                    }
                    break;
                }
                case ChannelKind::Depolarize1: {
                    double p = channel.p / 3;
                    fault_symptoms({&sens.x[op.q0]}, {}, p);               // X
                    fault_symptoms({&sens.x[op.q0]}, {&sens.z[op.q0]}, p); // Y
                    fault_symptoms({}, {&sens.z[op.q0]}, p);               // Z
                    break;
                }
                case ChannelKind::Depolarize2: {
                    double p = channel.p / 15;
                    const BitVec* fx[2] = {&sens.x[op.q0], &sens.x[op.q1]};
                    const BitVec* fz[2] = {&sens.z[op.q0], &sens.z[op.q1]};
                    for (int pa = 0; pa < 4; ++pa) {
                        for (int pb = 0; pb < 4; ++pb) {
                            if (pa == 0 && pb == 0) continue;
                            std::vector<const BitVec*> xs, zs;
                            if (pa & 1) xs.push_back(fx[0]);
                            if (pa & 2) zs.push_back(fz[0]);
                            if (pb & 1) xs.push_back(fx[1]);
                            if (pb & 2) zs.push_back(fz[1]);
                            fault_symptoms(xs, zs, p);
                        }
                    }
                    break;
                }
            }
        }
        switch (op.type) {
            case OpType::H:
                std::swap(sens.x[op.q0], sens.z[op.q0]);
                break;
            case OpType::CX:
                sens.x[op.q0] ^= sens.x[op.q1];
                sens.z[op.q1] ^= sens.z[op.q0];
                break;
            case OpType::MeasureZ:
                sens.x[op.q0] ^= result_flips[op.result];
                break;
            case OpType::MeasureX:
                sens.z[op.q0] ^= result_flips[op.result];
                break;
            case OpType::ResetZ:
            case OpType::ResetX:
                sens.x[op.q0].clear();
                sens.z[op.q0].clear();
                break;
            case OpType::Tick:
                break;
        }
    }

    for (std::size_t i = 0; i < dem.mechanisms.size(); ++i) {
        auto& probs = contributors[i];
        std::sort(probs.begin(), probs.end());
        double p = 0.0;
        for (double q : probs) p = xor_probability(p, q);
        dem.mechanisms[i].probability = p;
    }
    std::sort(dem.mechanisms.begin(), dem.mechanisms.end(),
              [](const FaultMechanism& a, const FaultMechanism& b) {
                  return a.symptom < b.symptom;
              });

    std::vector<bool> seen(nd, false);
    for (std::size_t i = 0; i < dem.mechanisms.size(); ++i) {
        for (uint32_t det : dem.mechanisms[i].symptom.detectors) seen[det] = true;
        if (dem.mechanisms[i].symptom.detectors.empty())
            dem.undetectable.push_back(i);
    }
    for (std::size_t i = 0; i < nd; ++i)
        if (!seen[i]) dem.dead_detectors.push_back(uint32_t(i));
    return dem;
}

namespace {

std::string symptom_str(const Symptom& s) {
    std::ostringstream os;
    for (uint32_t d : s.detectors) os << " D" << d;
    for (uint32_t o : s.observables) os << " L" << o;
    return os.str();
}

uint64_t obs_mask_of(const Symptom& s) {
    uint64_t m = 0;
    for (uint32_t o : s.observables) m |= uint64_t(1) << o;
    return m;
}

}  // namespace

MatchingGraph decompose_to_graph(const DetectorErrorModel& dem) {
    MatchingGraph graph;
    graph.num_detectors = dem.num_detectors;
    graph.num_observables = dem.num_observables;

    std::set<std::pair<std::vector<uint32_t>, uint64_t>> graph_like;
    for (const auto& m : dem.mechanisms)
        if (m.symptom.detectors.size() <= 2 && !m.symptom.detectors.empty())
            graph_like.insert({m.symptom.detectors, obs_mask_of(m.symptom)});

    // (a, b, mask) -> probability, XOR-combined
    std::map<std::tuple<int32_t, int32_t, uint64_t>, double> acc;
    auto add_edge = [&](const Symptom& s, double p) {
        int32_t a = int32_t(s.detectors[0]);
        int32_t b = s.detectors.size() == 2 ? int32_t(s.detectors[1]) : -1;
        if (b >= 0 && b < a) std::swap(a, b);
        auto key = std::make_tuple(a, b, obs_mask_of(s));
        auto [it, fresh] = acc.emplace(key, p);
        if (!fresh) it->second = xor_probability(it->second, p);
    };

    for (const auto& m : dem.mechanisms) {
        if (m.symptom.detectors.empty()) {
            ++graph.num_undetectable;
            continue;
        }
        if (m.symptom.detectors.size() <= 2) {
            add_edge(m.symptom, m.probability);
            continue;
        }
        if (m.components.empty())
            throw std::runtime_error("undecomposable mechanism:" +
                                     symptom_str(m.symptom));
        for (const auto& comp : m.components) {
            if (comp.detectors.empty()) continue;  // pure-observable piece
            if (comp.detectors.size() > 2 ||
                !graph_like.count({comp.detectors, obs_mask_of(comp)}))
                throw std::runtime_error(
                    "component does not match an existing symptom:" +
                    symptom_str(comp) + " from mechanism" +
                    symptom_str(m.symptom));
            add_edge(comp, m.probability);
        }
    }

    for (const auto& [key, p] : acc) {
        GraphEdge e;
        e.a = std::get<0>(key);
        e.b = std::get<1>(key);
        e.obs_mask = std::get<2>(key);
        e.probability = p;
        e.weight = -std::log(p / (1 - p));
        graph.edges.push_back(e);
    }
    std::sort(graph.edges.begin(), graph.edges.end(),
              [](const GraphEdge& x, const GraphEdge& y) {
                  return std::tie(x.a, x.b, x.obs_mask) <
                         std::tie(y.a, y.b, y.obs_mask);
              });
    return graph;
}

std::optional<int64_t> min_weight_logical(const MatchingGraph& graph) {
    if (graph.num_undetectable > 0) return 1;
    const std::size_t boundary = graph.num_detectors;
    const std::size_t n = graph.num_detectors + 1;

    struct Arc {
        uint32_t to;
        uint8_t odd;
    };
    std::vector<std::vector<Arc>> adj(n);
    bool any_odd = false;
    for (const auto& e : graph.edges) {
        uint32_t a = uint32_t(e.a);
        uint32_t b = e.b < 0 ? uint32_t(boundary) : uint32_t(e.b);
        uint8_t odd = uint8_t(std::popcount(e.obs_mask) & 1);
        any_odd |= odd;
        adj[a].push_back({b, odd});
        adj[b].push_back({a, odd});
    }
    if (!any_odd) return std::nullopt;

    // Shortest odd-parity closed walk: BFS on the parity-doubled graph from
    // each start node.
    int64_t best = -1;
    std::vector<int32_t> dist(2 * n);
    std::deque<uint32_t> queue;
    for (std::size_t s = 0; s < n; ++s) {
        std::fill(dist.begin(), dist.end(), -1);
        dist[2 * s] = 0;
        queue.clear();
        queue.push_back(uint32_t(2 * s));
        while (!queue.empty()) {
            uint32_t cur = queue.front();
            queue.pop_front();
            uint32_t node = cur >> 1;
            uint32_t parity = cur & 1;
            int32_t dcur = dist[cur];
            if (best >= 0 && dcur >= best) break;
            for (const Arc& arc : adj[node]) {
                uint32_t nxt = (arc.to << 1) | (parity ^ arc.odd);
                if (dist[nxt] < 0) {
                    dist[nxt] = dcur + 1;
                    queue.push_back(nxt);
                }
            }
        }
        int32_t dodd = dist[2 * s + 1];
        if (dodd >= 0 && (best < 0 || dodd < best)) best = dodd;
    }
    if (best < 0) return std::nullopt;
    return best;
}

std::string dem_text(const DetectorErrorModel& dem) {
    std::ostringstream os;
    os << "telesurg-dem v1\n";
    os << "detectors " << dem.num_detectors << "\n";
    os << "observables " << dem.num_observables << "\n";
    os.precision(12);
    for (const auto& m : dem.mechanisms)
        os << "error(" << m.probability << ")" << symptom_str(m.symptom) << "\n";
    for (uint32_t d : dem.dead_detectors) os << "dead D" << d << "\n";
    return os.str();
}

std::string graph_text(const MatchingGraph& graph) {
    std::ostringstream os;
    os << "telesurg-graph v1\n";
    os << "detectors " << graph.num_detectors << "\n";
    os.precision(12);
    for (const auto& e : graph.edges) {
        os << "edge D" << e.a << " ";
        if (e.b < 0) os << "B";
        else os << "D" << e.b;
        os << " w " << e.weight << " p " << e.probability;
        if (e.obs_mask) {
            for (std::size_t i = 0; i < 64; ++i)
                if ((e.obs_mask >> i) & 1) os << " L" << i;
        }
        os << "\n";
    }
    return os.str();
}

}  // namespace telesurg
