#include "mgr/rips.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mgr/grid.hpp"

namespace mgr {
namespace {

// Brute-force union-find; used when the grid would need out-of-range cell
// coordinates (delta tiny relative to the cloud extent).
ComponentLabeling components_bruteforce(const PointCloud& cloud, double delta) {
    const std::size_t n = cloud.size();
    std::vector<std::uint32_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0u);
    auto find = [&](std::uint32_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };
    const double d2 = delta * delta;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (squared_dist(cloud[i], cloud[j]) <= d2) {
                auto a = find(static_cast<std::uint32_t>(i));
                auto b = find(static_cast<std::uint32_t>(j));
                if (a != b) parent[std::max(a, b)] = std::min(a, b);
            }
    ComponentLabeling out;
    out.labels.assign(n, -1);
    for (std::size_t i = 0; i < n; ++i) {
        const std::uint32_t r = find(static_cast<std::uint32_t>(i));
        if (out.labels[r] < 0) out.labels[r] = out.count++;
        out.labels[i] = out.labels[r];
    }
    return out;
}

bool grid_feasible(const PointCloud& cloud, double cell) {
    for (double v : cloud.data())
        if (std::abs(v) / cell >= 1e9) return false;
    return true;
}

}  // namespace

ComponentLabeling rips_components(const PointCloud& cloud, double delta) {
    if (!(delta > 0.0)) throw std::invalid_argument("rips_components: delta must be > 0");
    if (cloud.empty()) return {};
    const double cell = delta / (2.0 * std::sqrt(static_cast<double>(cloud.dim())));
    if (!grid_feasible(cloud, cell)) return components_bruteforce(cloud, delta);
    SpatialGrid grid(cloud, cell);
    ComponentLabeling out;
    std::vector<std::uint8_t> active(cloud.size(), 1);
    out.count = grid.components(active, delta, out.labels);
    return out;
}

ComponentLabeling rips_components(const PointCloud& cloud,
                                  std::span<const std::uint32_t> subset,
                                  double delta) {
    if (!(delta > 0.0)) throw std::invalid_argument("rips_components: delta must be > 0");
    if (subset.empty()) return {};
    std::vector<double> flat;
    flat.reserve(subset.size() * cloud.dim());
    for (std::uint32_t idx : subset) {
        auto p = cloud[idx];
        flat.insert(flat.end(), p.begin(), p.end());
    }
    PointCloud sub(std::move(flat), cloud.dim());
    return rips_components(sub, delta);
}

int count_components(const PointCloud& cloud, double delta) {
    return rips_components(cloud, delta).count;
}

int count_components(const PointCloud& cloud,
                     std::span<const std::uint32_t> subset, double delta) {
    return rips_components(cloud, subset, delta).count;
}

}  // namespace mgr
