#pragma once

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

namespace mgr {

/// Undirected multigraph with loops: n vertices plus a multiset of
/// unordered vertex pairs (u == v is a loop). Isolated vertices are
/// significant.
class Pseudograph {
public:
    Pseudograph() = default;
    explicit Pseudograph(int n_vertices) : n_(n_vertices) {
        if (n_vertices < 0) throw std::invalid_argument("Pseudograph: negative vertex count");
    }
    Pseudograph(int n_vertices, std::vector<std::pair<int, int>> edges);

    int n_vertices() const { return n_; }
    int n_edges() const { return static_cast<int>(edges_.size()); }
    int n_loops() const;

    void add_edge(int u, int v);

    /// Edges normalized (u <= v) and sorted; stable identity for equality
    /// and serialization.
    const std::vector<std::pair<int, int>>& edges() const { return edges_; }

    /// Number of edges between u and v (loops if u == v).
    int multiplicity(int u, int v) const;

    bool operator==(const Pseudograph& other) const = default;

private:
    int n_ = 0;
    std::vector<std::pair<int, int>> edges_;  // kept sorted, u <= v
};

/// Degree sequence sorted ascending; a loop contributes 2 to its vertex.
std::vector<int> degree_multiset(const Pseudograph& g);

/// Exact isomorphism: a vertex bijection preserving every multiplicity.
/// Backtracking with degree / loop-count / neighborhood pruning.
bool is_isomorphic(const Pseudograph& a, const Pseudograph& b);

}  // namespace mgr
