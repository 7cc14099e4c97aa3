#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace mgr {

/// A point in R^D, D >= 2.
using Point = std::vector<double>;

/// Immutable set of n points in R^D, stored row-major in a flat buffer.
/// All queries are read-only and safe to call concurrently.
class PointCloud {
public:
    PointCloud() = default;

    PointCloud(std::vector<double> flat, std::size_t dim);

    explicit PointCloud(const std::vector<Point>& points);

    std::size_t size() const { return count_; }
    std::size_t dim() const { return dim_; }
    bool empty() const { return count_ == 0; }

    std::span<const double> operator[](std::size_t i) const {
        return {data_.data() + i * dim_, dim_};
    }

    Point point(std::size_t i) const {
        auto s = (*this)[i];
        return Point(s.begin(), s.end());
    }

    const std::vector<double>& data() const { return data_; }

    /// Axis-aligned bounding box, as (min corner, max corner).
    std::pair<Point, Point> bounding_box() const;

private:
    std::vector<double> data_;
    std::size_t count_ = 0;
    std::size_t dim_ = 0;
};

double squared_dist(std::span<const double> p, std::span<const double> q);

/// Euclidean distance; throws std::invalid_argument on dimension mismatch.
double euclidean_dist(std::span<const double> p, std::span<const double> q);

/// Indices i with ||p_i - c|| <= rad (closed ball). Linear scan; exact
/// floating comparisons, no epsilon slack.
std::vector<std::size_t> ball_query(const PointCloud& cloud,
                                    std::span<const double> c, double rad);

/// Indices i with r < ||p_i - c|| <= r + delta (inner boundary open,
/// outer closed).
std::vector<std::size_t> annulus_query(const PointCloud& cloud,
                                       std::span<const double> c, double r,
                                       double delta);

}  // namespace mgr
