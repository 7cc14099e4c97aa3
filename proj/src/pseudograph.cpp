#include "mgr/pseudograph.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace mgr {

Pseudograph::Pseudograph(int n_vertices, std::vector<std::pair<int, int>> edges)
    : Pseudograph(n_vertices) {
    for (auto [u, v] : edges) add_edge(u, v);
}

void Pseudograph::add_edge(int u, int v) {
    if (u < 0 || v < 0 || u >= n_ || v >= n_)
        throw std::invalid_argument("Pseudograph::add_edge: vertex out of range");
    if (u > v) std::swap(u, v);
    auto it = std::lower_bound(edges_.begin(), edges_.end(), std::make_pair(u, v));
    edges_.insert(it, {u, v});
}

int Pseudograph::n_loops() const {
    int c = 0;
    for (auto& [u, v] : edges_)
        if (u == v) ++c;
    return c;
}

int Pseudograph::multiplicity(int u, int v) const {
    if (u > v) std::swap(u, v);
    auto [lo, hi] = std::equal_range(edges_.begin(), edges_.end(), std::make_pair(u, v));
    return static_cast<int>(hi - lo);
}

std::vector<int> degree_multiset(const Pseudograph& g) {
    std::vector<int> deg(g.n_vertices(), 0);
    for (auto& [u, v] : g.edges()) {
        deg[u] += 1;
        deg[v] += 1;  // a loop hits both branches: contributes 2
    }
    std::sort(deg.begin(), deg.end());
    return deg;
}

namespace {

struct GraphView {
    int n;
    std::vector<std::vector<int>> mult;           // n x n multiplicity matrix
    std::vector<std::vector<int>> nbrs;           // distinct neighbors (u != v)
    std::vector<std::vector<std::int64_t>> sig;   // per-vertex invariant signature
    std::vector<int> deg, loops;

    explicit GraphView(const Pseudograph& g) : n(g.n_vertices()) {
        mult.assign(n, std::vector<int>(n, 0));
        for (auto& [u, v] : g.edges()) mult[u][v] += 1, mult[v][u] += (u == v ? 0 : 1);
        nbrs.resize(n);
        deg.assign(n, 0);
        loops.assign(n, 0);
        for (int u = 0; u < n; ++u) {
            loops[u] = mult[u][u];
            deg[u] = 2 * loops[u];
            for (int v = 0; v < n; ++v)
                if (v != u && mult[u][v] > 0) {
                    nbrs[u].push_back(v);
                    deg[u] += mult[u][v];
                }
        }
        sig.resize(n);
        for (int u = 0; u < n; ++u) {
            std::vector<std::int64_t> s{loops[u], deg[u]};
            std::vector<std::int64_t> around;
            for (int v : nbrs[u])
                around.push_back((static_cast<std::int64_t>(mult[u][v]) << 40) |
                                 (static_cast<std::int64_t>(deg[v]) << 20) | loops[v]);
            std::sort(around.begin(), around.end());
            s.insert(s.end(), around.begin(), around.end());
            sig[u] = std::move(s);
        }
    }
};

bool extend(const GraphView& a, const GraphView& b,
            const std::vector<int>& order, std::size_t pos,
            std::vector<int>& img, std::vector<std::uint8_t>& used,
            const std::vector<std::vector<int>>& candidates) {
    if (pos == order.size()) return true;
    const int u = order[pos];
    for (int cand : candidates[u]) {
        if (used[cand]) continue;
        if (a.mult[u][u] != b.mult[cand][cand]) continue;
        bool ok = true;
        for (std::size_t q = 0; q < pos && ok; ++q) {
            const int w = order[q];
            ok = a.mult[u][w] == b.mult[cand][img[w]];
        }
        if (!ok) continue;
        img[u] = cand;
        used[cand] = 1;
        if (extend(a, b, order, pos + 1, img, used, candidates)) return true;
        used[cand] = 0;
    }
    return false;
}

}  // namespace

bool is_isomorphic(const Pseudograph& ga, const Pseudograph& gb) {
    if (ga.n_vertices() != gb.n_vertices()) return false;
    if (ga.n_edges() != gb.n_edges()) return false;
    if (ga.n_loops() != gb.n_loops()) return false;
    if (degree_multiset(ga) != degree_multiset(gb)) return false;
    const int n = ga.n_vertices();
    if (n == 0) return true;

    GraphView a(ga), b(gb);

    // Group by signature; class sizes must agree.
    std::map<std::vector<std::int64_t>, std::vector<int>> classes_b;
    for (int v = 0; v < n; ++v) classes_b[b.sig[v]].push_back(v);
    std::vector<std::vector<int>> candidates(n);
    for (int u = 0; u < n; ++u) {
        auto it = classes_b.find(a.sig[u]);
        if (it == classes_b.end()) return false;
        candidates[u] = it->second;
    }
    {
        std::map<std::vector<std::int64_t>, int> count_a;
        for (int u = 0; u < n; ++u) count_a[a.sig[u]] += 1;
        for (auto& [s, members] : classes_b) {
            auto it = count_a.find(s);
            if (it == count_a.end() || it->second != static_cast<int>(members.size()))
                return false;
        }
    }

    // Most constrained first: fewest candidates, then highest degree.
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int x, int y) {
        const auto cx = candidates[x].size(), cy = candidates[y].size();
        if (cx != cy) return cx < cy;
        if (a.deg[x] != a.deg[y]) return a.deg[x] > a.deg[y];
        return x < y;
    });

    std::vector<int> img(n, -1);
    std::vector<std::uint8_t> used(n, 0);
    return extend(a, b, order, 0, img, used, candidates);
}

}  // namespace mgr
