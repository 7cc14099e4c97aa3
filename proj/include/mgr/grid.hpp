#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "mgr/geometry.hpp"

namespace mgr {

/// Uniform-grid index over a PointCloud. Cells are half-open boxes of side
/// `cell_size`; cell records are kept lexicographically sorted by integer
/// coordinates, so lookups are binary searches and the structure is fully
/// deterministic. Queries return exactly the same index sets as the linear
/// scans in geometry.hpp.
class SpatialGrid {
public:
    SpatialGrid(const PointCloud& cloud, double cell_size);

    const PointCloud& cloud() const { return *cloud_; }
    double cell_size() const { return cell_; }
    std::size_t cell_count() const { return cell_range_.size(); }

    void ball_query(std::span<const double> c, double rad,
                    std::vector<std::uint32_t>& out) const;

    void annulus_query(std::span<const double> c, double r, double delta,
                       std::vector<std::uint32_t>& out) const;

    /// Number of connected components of the Rips graph at scale
    /// `rips_delta` (edge iff distance <= rips_delta) on the points of the
    /// annulus r < d <= r+delta around c. Scratch buffers are caller-owned
    /// so the hot loop does not allocate.
    struct ShellScratch {
        std::vector<std::uint32_t> pts;        // shell point ids
        std::vector<std::uint32_t> group_off;  // group -> offset into pts
        std::vector<std::uint32_t> group_cell; // group -> cell record id
        std::vector<std::uint32_t> uf;         // union-find over groups
    };
    int shell_component_count(std::span<const double> c, double r,
                              double delta, double rips_delta,
                              ShellScratch& scratch) const;

    /// Same, against a precomputed candidate cell list (see
    /// occupied_near_cell); used by the batched per-cell hot loop.
    int shell_component_count(std::span<const double> c, double r, double delta,
                              double rips_delta, ShellScratch& scratch,
                              std::span<const std::uint32_t> candidate_cells) const;

    /// Occupied cells within coordinate reach ceil(rad/cell)+1 of `cell`;
    /// covers every ball of radius rad centered inside that cell.
    void occupied_near_cell(std::size_t cell, double rad,
                            std::vector<std::uint32_t>& out) const;

    /// Point ids of one cell record, in build order.
    std::span<const std::uint32_t> cell_points(std::size_t cell) const {
        const auto [b, e] = cell_range_[cell];
        return {order_.data() + b, static_cast<std::size_t>(e - b)};
    }

    /// Connected components of the Rips graph at scale rips_delta over the
    /// subset of points with active[i] != 0. Writes a component id into
    /// comp[i] for active points (untouched otherwise), ids dense in
    /// 0..count-1 ordered by smallest member index. Returns the count.
    /// Requires rips_delta >= cell_size * sqrt(D): within-cell merging
    /// assumes the cell diagonal does not exceed the Rips scale.
    int components(const std::vector<std::uint8_t>& active, double rips_delta,
                   std::vector<std::int32_t>& comp) const;

    /// All point ids within strict distance < rad of point id `center_pt`,
    /// excluding itself only if its distance is 0 (i.e. duplicates count).
    void strict_ball_query(std::span<const double> c, double rad,
                           std::vector<std::uint32_t>& out) const;

    /// Visits every pair (i, j) with from[i] != 0, to[j] != 0 and
    /// ||p_i - p_j|| < rad (strict), passing the squared distance.
    void for_label_pairs_within(
        const std::vector<std::uint8_t>& from, const std::vector<std::uint8_t>& to,
        double rad,
        const std::function<void(std::uint32_t, std::uint32_t, double)>& fn) const;

private:
    struct CellRange {
        std::uint32_t begin;
        std::uint32_t end;
    };

    const PointCloud* cloud_;
    double cell_;
    std::size_t dim_;
    std::vector<std::int32_t> cell_coords_;   // cell record id -> D ints
    std::vector<CellRange> cell_range_;       // into order_
    std::vector<std::uint32_t> order_;        // point ids grouped by cell
    std::vector<std::int32_t> coord_min_, coord_max_;

    std::int64_t find_cell(const std::int32_t* coords) const;
    void point_coords(std::span<const double> p, std::int32_t* out) const;

    // Squared distance bounds between a cell box and a point.
    void cell_point_bounds(std::size_t cell, std::span<const double> c,
                           double& lo2, double& hi2) const;
    // Squared distance bounds between two cell boxes from coord diffs.
    void cell_cell_bounds(std::size_t ca, std::size_t cb, double& lo2,
                          double& hi2) const;

    template <typename Fn>
    void for_cells_near(std::span<const double> c, double rad, Fn&& fn) const;
};

}  // namespace mgr
