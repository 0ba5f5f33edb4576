#include "telesurg/matching.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <stdexcept>

namespace telesurg {

namespace {

// Maximum-weight matching with blossoms and dual variables, dense O(n^3).
// Vertices are 1..n, blossom ids n+1..2n. Edge weights must be positive;
// weight 0 marks a missing edge. Duals stay integral because edge weights
// are doubled inside the slack computation.
class BlossomMatcher {
public:
    explicit BlossomMatcher(int n)
        : n_(n),
          cap_(2 * n + 1),
          g_(std::size_t(cap_) * cap_),
          from_(std::size_t(cap_) * cap_, 0),
          lab_(cap_, 0),
          match_(cap_, 0),
          slack_(cap_, 0),
          st_(cap_, 0),
          pa_(cap_, 0),
          s_(cap_, -1),
          vis_(cap_, 0),
          flower_(cap_) {
        for (int u = 1; u <= 2 * n_; ++u)
            for (int v = 1; v <= 2 * n_; ++v) g(u, v) = Edge{u, v, 0};
    }

    void set_weight(int u, int v, long long w) {
        g(u, v).w = w;
        g(v, u).w = w;
    }

    // Returns matched pair count; mates readable via mate().
    int solve() {
        n_x_ = n_;
        long long w_max = 0;
        for (int u = 1; u <= n_; ++u) {
            st_[u] = u;
            flower_[u].clear();
            for (int v = 1; v <= n_; ++v) {
                from(u, v) = (u == v ? u : 0);
                w_max = std::max(w_max, g(u, v).w);
            }
        }
        for (int u = 1; u <= n_; ++u) lab_[u] = w_max;
        int n_matches = 0;
        while (matching()) ++n_matches;
        return n_matches;
    }

    int mate(int u) const { return match_[u]; }

private:
    struct Edge {
        int u, v;
        long long w;
    };

    int n_, cap_, n_x_ = 0;
    std::vector<Edge> g_;
    std::vector<int> from_;
    std::vector<long long> lab_;
    std::vector<int> match_, slack_, st_, pa_;
    std::vector<int> s_;  // -1 unvisited, 0 outer, 1 inner
    std::vector<int> vis_;
    std::vector<std::vector<int>> flower_;
    std::deque<int> q_;
    int timestamp_ = 0;

    Edge& g(int u, int v) { return g_[std::size_t(u) * cap_ + v]; }
    int& from(int u, int v) { return from_[std::size_t(u) * cap_ + v]; }

    long long e_delta(const Edge& e) {
        return lab_[e.u] + lab_[e.v] - g(e.u, e.v).w * 2;
    }

    void update_slack(int u, int x) {
        if (!slack_[x] || e_delta(g(u, x)) < e_delta(g(slack_[x], x)))
            slack_[x] = u;
    }

    void set_slack(int x) {
        slack_[x] = 0;
        for (int u = 1; u <= n_; ++u)
            if (g(u, x).w > 0 && st_[u] != x && s_[st_[u]] == 0) update_slack(u, x);
    }

    void q_push(int x) {
        if (x <= n_) {
            q_.push_back(x);
        } else {
            for (int i : flower_[x]) q_push(i);
        }
    }

    void set_st(int x, int b) {
        st_[x] = b;
        if (x > n_)
            for (int i : flower_[x]) set_st(i, b);
    }

    int get_pr(int b, int xr) {
        int pr = int(std::find(flower_[b].begin(), flower_[b].end(), xr) -
                     flower_[b].begin());
        if (pr % 2 == 1) {
            std::reverse(flower_[b].begin() + 1, flower_[b].end());
            return int(flower_[b].size()) - pr;
        }
        return pr;
    }

    void set_match(int u, int v) {
        match_[u] = g(u, v).v;
        if (u <= n_) return;
        Edge e = g(u, v);
        int xr = from(u, e.u);
        int pr = get_pr(u, xr);
        for (int i = 0; i < pr; ++i) set_match(flower_[u][i], flower_[u][i ^ 1]);
        set_match(xr, v);
        std::rotate(flower_[u].begin(), flower_[u].begin() + pr, flower_[u].end());
    }

    void augment(int u, int v) {
        while (true) {
            int xnv = st_[match_[u]];
            set_match(u, v);
            if (!xnv) return;
            set_match(xnv, st_[pa_[xnv]]);
            u = st_[pa_[xnv]];
            v = xnv;
        }
    }

    int get_lca(int u, int v) {
        for (++timestamp_; u || v; std::swap(u, v)) {
            if (u == 0) continue;
            if (vis_[u] == timestamp_) return u;
            vis_[u] = timestamp_;
            u = st_[match_[u]];
            if (u) u = st_[pa_[u]];
        }
        return 0;
    }

    void add_blossom(int u, int lca, int v) {
        int b = n_ + 1;
        while (b <= n_x_ && st_[b]) ++b;
        if (b > n_x_) ++n_x_;
        lab_[b] = 0;
        s_[b] = 0;
        match_[b] = match_[lca];
        flower_[b].clear();
        flower_[b].push_back(lca);
        for (int x = u, y; x != lca; x = st_[pa_[y]]) {
            flower_[b].push_back(x);
            flower_[b].push_back(y = st_[match_[x]]);
            q_push(y);
        }
        std::reverse(flower_[b].begin() + 1, flower_[b].end());
        for (int x = v, y; x != lca; x = st_[pa_[y]]) {
            flower_[b].push_back(x);
            flower_[b].push_back(y = st_[match_[x]]);
            q_push(y);
        }
        set_st(b, b);
        for (int x = 1; x <= n_x_; ++x) g(b, x).w = g(x, b).w = 0;
        for (int x = 1; x <= n_; ++x) from(b, x) = 0;
        for (int xs : flower_[b]) {
            for (int x = 1; x <= n_x_; ++x)
                if (g(b, x).w == 0 || e_delta(g(xs, x)) < e_delta(g(b, x))) {
                    g(b, x) = g(xs, x);
                    g(x, b) = g(x, xs);
                }
            for (int x = 1; x <= n_; ++x)
                if (from(xs, x)) from(b, x) = xs;
        }
        set_slack(b);
    }

    void expand_blossom(int b) {
        for (int i : flower_[b]) set_st(i, i);
        int xr = from(b, g(b, pa_[b]).u);
        int pr = get_pr(b, xr);
        for (int i = 0; i < pr; i += 2) {
            int xs = flower_[b][i];
            int xns = flower_[b][i + 1];
            pa_[xs] = g(xns, xs).u;
            s_[xs] = 1;
            s_[xns] = 0;
            slack_[xs] = 0;
            set_slack(xns);
            q_push(xns);
        }
        s_[xr] = 1;
        pa_[xr] = pa_[b];
        for (int i = pr + 1; i < int(flower_[b].size()); ++i) {
            int xs = flower_[b][i];
            s_[xs] = -1;
            set_slack(xs);
        }
        st_[b] = 0;
        flower_[b].clear();
    }

    bool on_found_edge(const Edge& e) {
        int u = st_[e.u];
        int v = st_[e.v];
        if (s_[v] == -1) {
            pa_[v] = e.u;
            s_[v] = 1;
            int nu = st_[match_[v]];
            slack_[v] = slack_[nu] = 0;
            s_[nu] = 0;
            q_push(nu);
        } else if (s_[v] == 0) {
            int lca = get_lca(u, v);
            if (!lca) {
                augment(u, v);
                augment(v, u);
                return true;
            }
            add_blossom(u, lca, v);
        }
        return false;
    }

    bool matching() {
        std::fill(s_.begin() + 1, s_.begin() + n_x_ + 1, -1);
        std::fill(slack_.begin() + 1, slack_.begin() + n_x_ + 1, 0);
        q_.clear();
        for (int x = 1; x <= n_x_; ++x)
            if (st_[x] == x && !match_[x]) {
                pa_[x] = 0;
                s_[x] = 0;
                q_push(x);
            }
        if (q_.empty()) return false;
        while (true) {
            while (!q_.empty()) {
                int u = q_.front();
                q_.pop_front();
                if (s_[st_[u]] == 1) continue;
                for (int v = 1; v <= n_; ++v)
                    if (g(u, v).w > 0 && st_[u] != st_[v]) {
                        if (e_delta(g(u, v)) == 0) {
                            if (on_found_edge(g(u, v))) return true;
                        } else {
                            update_slack(u, st_[v]);
                        }
                    }
            }
            long long d = std::numeric_limits<long long>::max();
            for (int b = n_ + 1; b <= n_x_; ++b)
                if (st_[b] == b && s_[b] == 1) d = std::min(d, lab_[b] / 2);
            for (int x = 1; x <= n_x_; ++x)
                if (st_[x] == x && slack_[x]) {
                    if (s_[x] == -1) d = std::min(d, e_delta(g(slack_[x], x)));
                    else if (s_[x] == 0) d = std::min(d, e_delta(g(slack_[x], x)) / 2);
                }
            for (int u = 1; u <= n_; ++u) {
                if (s_[st_[u]] == 0) {
                    if (lab_[u] <= d) return false;
                    lab_[u] -= d;
                } else if (s_[st_[u]] == 1) {
                    lab_[u] += d;
                }
            }
            for (int b = n_ + 1; b <= n_x_; ++b)
                if (st_[b] == b) {
                    if (s_[b] == 0) lab_[b] += d * 2;
                    else if (s_[b] == 1) lab_[b] -= d * 2;
                }
            q_.clear();
            for (int x = 1; x <= n_x_; ++x)
                if (st_[x] == x && slack_[x] && st_[slack_[x]] != x &&
                    e_delta(g(slack_[x], x)) == 0)
                    if (on_found_edge(g(slack_[x], x))) return true;
            for (int b = n_ + 1; b <= n_x_; ++b)
                if (st_[b] == b && s_[b] == 1 && lab_[b] == 0) expand_blossom(b);
        }
    }
};

}  // namespace

PerfectMatching min_weight_perfect_matching(uint32_t n,
                                            const std::vector<MatchEdge>& edges) {
    PerfectMatching result;
    result.mate.assign(n, -1);
    if (n == 0) return result;
    if (n % 2 != 0) throw std::runtime_error("odd vertex count");

    int64_t w_max = 0;
    for (const auto& e : edges) {
        if (e.w < 0) throw std::runtime_error("negative edge weight");
        w_max = std::max(w_max, e.w);
    }
    // Large per-edge bonus makes maximum-weight prefer maximum cardinality;
    // inverting against w_max turns minimization into maximization.
    const long long big = (long long)(n + 1) * (w_max + 1);

    BlossomMatcher matcher{int(n)};
    std::vector<int64_t> weight(std::size_t(n) * n,
                                std::numeric_limits<int64_t>::min());
    for (const auto& e : edges) {
        if (e.u == e.v || e.u >= n || e.v >= n)
            throw std::runtime_error("bad edge endpoints");
        // keep the cheapest parallel edge
        int64_t& slot = weight[std::size_t(e.u) * n + e.v];
        if (slot == std::numeric_limits<int64_t>::min() || e.w < slot) {
            slot = e.w;
            weight[std::size_t(e.v) * n + e.u] = e.w;
            matcher.set_weight(int(e.u) + 1, int(e.v) + 1, big + (w_max - e.w));
        }
    }

    int pairs = matcher.solve();
    if (pairs * 2 != int(n)) throw std::runtime_error("no perfect matching exists");
    for (uint32_t u = 0; u < n; ++u) {
        int m = matcher.mate(int(u) + 1);
        result.mate[u] = m - 1;
        if (int(u) < m - 1)
            result.total_weight += weight[std::size_t(u) * n + (m - 1)];
    }
    return result;
}

}  // namespace telesurg
