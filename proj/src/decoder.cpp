#include "telesurg/decoder.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <queue>
#include <stdexcept>
#include <thread>

#include "telesurg/matching.hpp"

namespace telesurg {

namespace {

int64_t scaled_weight(double w) {
    double s = std::round(w * double(kWeightScale));
    if (s < 0) s = 0;  // p just below 0.5 can round negative
    if (s > double(kWeightInf)) return kWeightInf;
    return int64_t(s);
}

}  // namespace

MwpmDecoder::MwpmDecoder(const MatchingGraph& graph, Options options)
    : num_detectors_(graph.num_detectors), options_(options) {
    boundary_w_.assign(num_detectors_, kWeightInf);
    boundary_mask_.assign(num_detectors_, 0);
    std::vector<std::vector<Arc>> adj(num_detectors_);
    for (const auto& e : graph.edges) {
        int64_t w = scaled_weight(e.weight);
        if (e.b < 0) {
            if (w < boundary_w_[e.a]) {
                boundary_w_[e.a] = w;
                boundary_mask_[e.a] = e.obs_mask;
            }
            continue;
        }
        adj[e.a].push_back(Arc{uint32_t(e.b), w, e.obs_mask});
        adj[e.b].push_back(Arc{uint32_t(e.a), w, e.obs_mask});
    }
    arc_start_.assign(num_detectors_ + 1, 0);
    for (std::size_t d = 0; d < num_detectors_; ++d)
        arc_start_[d + 1] = arc_start_[d] + uint32_t(adj[d].size());
    arcs_.resize(arc_start_.back());
    for (std::size_t d = 0; d < num_detectors_; ++d)
        std::copy(adj[d].begin(), adj[d].end(), arcs_.begin() + arc_start_[d]);
}

DecodeResult MwpmDecoder::decode(const std::vector<uint32_t>& defects) const {
    Scratch scratch;
    return decode(defects, scratch);
}

DecodeResult MwpmDecoder::decode(const std::vector<uint32_t>& defects,
                                 Scratch& scratch) const {
    DecodeResult result;
    const std::size_t k = defects.size();
    if (k == 0) return result;

    if (scratch.dist.size() < num_detectors_) {
        scratch.dist.assign(num_detectors_, 0);
        scratch.mask.assign(num_detectors_, 0);
        scratch.epoch.assign(num_detectors_, 0);
        scratch.defect_at.assign(num_detectors_, -1);
        scratch.epoch_counter = 0;
    }
    for (std::size_t i = 0; i < k; ++i) scratch.defect_at[defects[i]] = int32_t(i);

    // Other defects to discover from each source (k-1 = all of them).
    const uint32_t want = options_.exact
                              ? uint32_t(k - 1)
                              : std::min<uint32_t>(options_.neighbors, uint32_t(k - 1));

    struct Candidate {
        uint32_t i, j;
        int64_t w;
        uint64_t mask;
    };
    std::vector<Candidate> candidates;
    std::vector<int64_t> bdist(k, kWeightInf);
    std::vector<uint64_t> bmask(k, 0);

    using HeapItem = std::pair<int64_t, uint32_t>;
    std::priority_queue<HeapItem, std::vector<HeapItem>, std::greater<>> heap;

    for (std::size_t i = 0; i < k; ++i) {
        uint32_t epoch = ++scratch.epoch_counter;
        auto touch = [&](uint32_t node) {
            if (scratch.epoch[node] != epoch) {
                scratch.epoch[node] = epoch;
                scratch.dist[node] = kWeightInf;
                scratch.mask[node] = 0;
            }
        };
        while (!heap.empty()) heap.pop();
        touch(defects[i]);
        scratch.dist[defects[i]] = 0;
        heap.push({0, defects[i]});
        uint32_t found = 0;
        int64_t bbest = kWeightInf;
        while (!heap.empty()) {
            auto [du, u] = heap.top();
            heap.pop();
            touch(u);
            if (du > scratch.dist[u]) continue;  // stale entry
            if (found >= want && du >= bbest) break;
            int32_t as_defect = scratch.defect_at[u];
            if (as_defect >= 0 && uint32_t(as_defect) != i) {
                ++found;
                if (uint32_t(as_defect) > i)
                    candidates.push_back(
                        {uint32_t(i), uint32_t(as_defect), du, scratch.mask[u]});
            }
            if (boundary_w_[u] < kWeightInf) {
                int64_t bc = du + boundary_w_[u];
                if (bc < bbest) {
                    bbest = bc;
                    bdist[i] = bc;
                    bmask[i] = scratch.mask[u] ^ boundary_mask_[u];
                }
            }
            for (uint32_t a = arc_start_[u]; a < arc_start_[u + 1]; ++a) {
                const Arc& arc = arcs_[a];
                touch(arc.to);
                int64_t nd = du + arc.w;
                if (nd < scratch.dist[arc.to]) {
                    scratch.dist[arc.to] = nd;
                    scratch.mask[arc.to] = scratch.mask[u] ^ arc.mask;
                    heap.push({nd, arc.to});
                }
            }
        }
    }
    for (std::size_t i = 0; i < k; ++i) scratch.defect_at[defects[i]] = -1;

    // Keep the cheapest candidate per pair; drop edges a boundary route
    // dominates.
    std::sort(candidates.begin(), candidates.end(),
              [](const Candidate& a, const Candidate& b) {
                  return std::tie(a.i, a.j, a.w) < std::tie(b.i, b.j, b.w);
              });
    std::vector<Candidate> edges;
    for (const auto& c : candidates) {
        if (!edges.empty() && edges.back().i == c.i && edges.back().j == c.j)
            continue;
        if (c.w >= bdist[c.i] + bdist[c.j]) continue;
        edges.push_back(c);
    }

    // Connected components over kept edges.
    std::vector<uint32_t> parent(k);
    for (uint32_t i = 0; i < k; ++i) parent[i] = i;
    std::function<uint32_t(uint32_t)> find = [&](uint32_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (const auto& e : edges) parent[find(e.i)] = find(e.j);

    std::map<uint32_t, std::vector<uint32_t>> comps;
    for (uint32_t i = 0; i < k; ++i) comps[find(i)].push_back(i);
    std::map<uint32_t, std::vector<Candidate>> comp_edges;
    for (const auto& e : edges) comp_edges[find(e.i)].push_back(e);

    for (auto& [root, members] : comps) {
        const uint32_t m = uint32_t(members.size());
        std::vector<uint32_t> local(k);
        for (uint32_t li = 0; li < m; ++li) local[members[li]] = li;

        std::vector<MatchEdge> graph_edges;
        for (const auto& e : comp_edges[root])
            graph_edges.push_back({local[e.i], local[e.j], e.w});
        bool any_boundary = false;
        for (uint32_t li = 0; li < m; ++li) {
            int64_t b = bdist[members[li]];
            if (b < kWeightInf) {
                graph_edges.push_back({li, m + li, b});
                any_boundary = true;
            }
        }
        for (uint32_t a = 0; a < m; ++a)
            for (uint32_t b = a + 1; b < m; ++b)
                graph_edges.push_back({m + a, m + b, 0});
        if (m % 2 == 1 && !any_boundary)
            throw std::runtime_error(
                "infeasible syndrome: odd defect count with no boundary");

        PerfectMatching pm = min_weight_perfect_matching(2 * m, graph_edges);

        // Matched masks: defect-defect via the candidate edge, defect-boundary
        // via the recorded boundary path.
        std::map<std::pair<uint32_t, uint32_t>, uint64_t> edge_mask;
        for (const auto& e : comp_edges[root])
            edge_mask[{std::min(local[e.i], local[e.j]),
                       std::max(local[e.i], local[e.j])}] = e.mask;
        for (uint32_t li = 0; li < m; ++li) {
            int32_t mate = pm.mate[li];
            if (mate == int32_t(m + li)) {
                result.observables ^= bmask[members[li]];
            } else if (mate >= 0 && mate < int32_t(m) && int32_t(li) < mate) {
                result.observables ^=
                    edge_mask[{li, uint32_t(mate)}];
            }
        }
        result.weight += pm.total_weight;
    }
    return result;
}

ExhaustiveDecoder::ExhaustiveDecoder(const MatchingGraph& graph)
    : n_(graph.num_detectors) {
    dist_.assign(n_ * n_, kWeightInf);
    mask_.assign(n_ * n_, 0);
    boundary_.assign(n_, kWeightInf);
    boundary_mask_.assign(n_, 0);
    for (std::size_t i = 0; i < n_; ++i) dist_[i * n_ + i] = 0;
    for (const auto& e : graph.edges) {
        int64_t w = scaled_weight(e.weight);
        if (e.b < 0) {
            if (w < boundary_[e.a]) {
                boundary_[e.a] = w;
                boundary_mask_[e.a] = e.obs_mask;
            }
            continue;
        }
        auto& slot = dist_[std::size_t(e.a) * n_ + e.b];
        if (w < slot) {
            slot = w;
            dist_[std::size_t(e.b) * n_ + e.a] = w;
            mask_[std::size_t(e.a) * n_ + e.b] = e.obs_mask;
            mask_[std::size_t(e.b) * n_ + e.a] = e.obs_mask;
        }
    }
    for (std::size_t mid = 0; mid < n_; ++mid)
        for (std::size_t i = 0; i < n_; ++i) {
            int64_t dim = dist_[i * n_ + mid];
            if (dim >= kWeightInf) continue;
            for (std::size_t j = 0; j < n_; ++j) {
                int64_t cand = dim + dist_[mid * n_ + j];
                if (cand < dist_[i * n_ + j]) {
                    dist_[i * n_ + j] = cand;
                    mask_[i * n_ + j] = mask_[i * n_ + mid] ^ mask_[mid * n_ + j];
                }
            }
        }
    // boundary through intermediate nodes
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t v = 0; v < n_; ++v) {
            if (dist_[i * n_ + v] >= kWeightInf || boundary_[v] >= kWeightInf)
                continue;
            int64_t cand = dist_[i * n_ + v] + boundary_[v];
            if (cand < boundary_[i]) {
                // note: later i rows reuse updated boundary_, which is safe
                // because path relaxation is already complete
                boundary_[i] = cand;
                boundary_mask_[i] = mask_[i * n_ + v] ^ boundary_mask_[v];
            }
        }
}

DecodeResult ExhaustiveDecoder::decode(const std::vector<uint32_t>& defects) const {
    if (defects.size() > kMaxDefects)
        throw std::invalid_argument("instance too large for exhaustive decoding");
    DecodeResult best;
    best.weight = kWeightInf;
    uint64_t used = 0;
    const std::size_t k = defects.size();
    std::function<void(int64_t, uint64_t)> rec = [&](int64_t w, uint64_t obs) {
        if (w >= best.weight) return;
        std::size_t first = k;
        for (std::size_t i = 0; i < k; ++i)
            if (!((used >> i) & 1)) {
                first = i;
                break;
            }
        if (first == k) {
            best.weight = w;
            best.observables = obs;
            return;
        }
        used |= uint64_t(1) << first;
        if (boundary_[defects[first]] < kWeightInf)
            rec(w + boundary_[defects[first]], obs ^ boundary_mask_[defects[first]]);
        for (std::size_t j = first + 1; j < k; ++j) {
            if ((used >> j) & 1) continue;
            int64_t d = dist_[std::size_t(defects[first]) * n_ + defects[j]];
            if (d >= kWeightInf) continue;
            used |= uint64_t(1) << j;
            rec(w + d, obs ^ mask_[std::size_t(defects[first]) * n_ + defects[j]]);
            used &= ~(uint64_t(1) << j);
        }
        used &= ~(uint64_t(1) << first);
    };
    rec(0, 0);
    if (best.weight >= kWeightInf)
        throw std::runtime_error("infeasible syndrome in exhaustive decoder");
    return best;
}

DecodeResult decode_exact_mechanisms(const DetectorErrorModel& dem,
                                     const std::vector<uint32_t>& defects) {
    if (dem.mechanisms.size() > 25)
        throw std::invalid_argument("too many mechanisms for subset enumeration");
    const uint32_t m = uint32_t(dem.mechanisms.size());
    std::vector<int64_t> weights(m);
    std::vector<uint64_t> det_bits(m, 0), obs_bits(m, 0);
    if (dem.num_detectors > 64)
        throw std::invalid_argument("subset oracle limited to 64 detectors");
    for (uint32_t i = 0; i < m; ++i) {
        const auto& mech = dem.mechanisms[i];
        weights[i] =
            scaled_weight(-std::log(mech.probability / (1 - mech.probability)));
        for (uint32_t d : mech.symptom.detectors) det_bits[i] |= uint64_t(1) << d;
        for (uint32_t o : mech.symptom.observables) obs_bits[i] |= uint64_t(1) << o;
    }
    uint64_t target = 0;
    for (uint32_t d : defects) target |= uint64_t(1) << d;
    DecodeResult best;
    best.weight = kWeightInf;
    for (uint64_t subset = 0; subset < (uint64_t(1) << m); ++subset) {
        uint64_t dets = 0, obs = 0;
        int64_t w = 0;
        uint64_t s = subset;
        while (s) {
            uint32_t i = uint32_t(std::countr_zero(s));
            s &= s - 1;
            dets ^= det_bits[i];
            obs ^= obs_bits[i];
            w += weights[i];
            if (w >= best.weight) break;
        }
        if (s == 0 && dets == target && w < best.weight) {
            best.weight = w;
            best.observables = obs;
        }
    }
    if (best.weight >= kWeightInf)
        throw std::runtime_error("syndrome not reachable by any mechanism subset");
    return best;
}

ErrorRateEstimate estimate_error_rate(uint64_t failures, uint64_t shots) {
    if (shots == 0) throw std::invalid_argument("zero shots");
    ErrorRateEstimate est;
    est.failures = failures;
    est.shots = shots;
    est.p_l = double(failures) / double(shots);
    est.sigma = std::sqrt(est.p_l * (1 - est.p_l) / double(shots));
    est.p_upper3 = failures == 0 ? 3.0 / double(shots) : 0.0;
    return est;
}

ErrorRateEstimate estimate_error_rate(const SampleBatch& batch,
                                      const std::vector<DecodeResult>& results) {
    if (batch.shots != results.size())
        throw std::invalid_argument("batch and decode results differ in shots");
    uint64_t failures = 0;
    for (std::size_t s = 0; s < batch.shots; ++s) {
        uint64_t actual = 0;
        for (std::size_t o = 0; o < batch.observable_bits.cols(); ++o)
            if (batch.observable_bits.get(s, o)) actual |= uint64_t(1) << o;
        failures += actual != results[s].observables;
    }
    return estimate_error_rate(failures, batch.shots);
}

std::vector<DecodeResult> decode_batch(const MwpmDecoder& decoder,
                                       const SampleBatch& batch, int threads) {
    std::vector<DecodeResult> results(batch.shots);
    auto worker = [&](uint64_t lo, uint64_t hi) {
        MwpmDecoder::Scratch scratch;
        std::vector<uint32_t> defects;
        for (uint64_t s = lo; s < hi; ++s) {
            defects.clear();
            for (std::size_t d = 0; d < batch.detector_bits.cols(); ++d)
                if (batch.detector_bits.get(s, d)) defects.push_back(uint32_t(d));
            results[s] = decoder.decode(defects, scratch);
        }
    };
    if (threads <= 1) {
        worker(0, batch.shots);
    } else {
        std::vector<std::thread> pool;
        uint64_t chunk = (batch.shots + threads - 1) / threads;
        for (int t = 0; t < threads; ++t) {
            uint64_t lo = uint64_t(t) * chunk;
            uint64_t hi = std::min<uint64_t>(batch.shots, lo + chunk);
            if (lo >= hi) break;
            pool.emplace_back(worker, lo, hi);
        }
        for (auto& th : pool) th.join();
    }
    return results;
}

}  // namespace telesurg
