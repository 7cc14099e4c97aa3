#include "mgr/geometry.hpp"

#include <cmath>
#include <limits>

namespace mgr {

PointCloud::PointCloud(std::vector<double> flat, std::size_t dim)
    : data_(std::move(flat)), dim_(dim) {
    if (dim_ < 2) throw std::invalid_argument("PointCloud: dimension must be >= 2");
    if (data_.size() % dim_ != 0)
        throw std::invalid_argument("PointCloud: buffer size not a multiple of dim");
    count_ = data_.size() / dim_;
    for (double v : data_)
        if (!std::isfinite(v))
            throw std::invalid_argument("PointCloud: non-finite coordinate");
}

PointCloud::PointCloud(const std::vector<Point>& points) {
    if (points.empty()) throw std::invalid_argument("PointCloud: empty point list");
    dim_ = points.front().size();
    if (dim_ < 2) throw std::invalid_argument("PointCloud: dimension must be >= 2");
    data_.reserve(points.size() * dim_);
    for (const auto& p : points) {
        if (p.size() != dim_)
            throw std::invalid_argument("PointCloud: inconsistent point dimension");
        for (double v : p) {
            if (!std::isfinite(v))
                throw std::invalid_argument("PointCloud: non-finite coordinate");
            data_.push_back(v);
        }
    }
    count_ = points.size();
}

std::pair<Point, Point> PointCloud::bounding_box() const {
    if (empty()) throw std::invalid_argument("bounding_box: empty cloud");
    Point lo((*this)[0].begin(), (*this)[0].end());
    Point hi = lo;
    for (std::size_t i = 1; i < count_; ++i) {
        auto p = (*this)[i];
        for (std::size_t d = 0; d < dim_; ++d) {
            lo[d] = std::min(lo[d], p[d]);
            hi[d] = std::max(hi[d], p[d]);
        }
    }
    return {lo, hi};
}

double squared_dist(std::span<const double> p, std::span<const double> q) {
    if (p.size() != q.size())
        throw std::invalid_argument("squared_dist: dimension mismatch");
    double acc = 0.0;
    for (std::size_t d = 0; d < p.size(); ++d) {
        const double diff = p[d] - q[d];
        acc += diff * diff;
    }
    return acc;
}

double euclidean_dist(std::span<const double> p, std::span<const double> q) {
    return std::sqrt(squared_dist(p, q));
}

std::vector<std::size_t> ball_query(const PointCloud& cloud,
                                    std::span<const double> c, double rad) {
    if (c.size() != cloud.dim())
        throw std::invalid_argument("ball_query: dimension mismatch");
    if (rad < 0.0) throw std::invalid_argument("ball_query: negative radius");
    std::vector<std::size_t> out;
    const double r2 = rad * rad;
    for (std::size_t i = 0; i < cloud.size(); ++i)
        if (squared_dist(cloud[i], c) <= r2) out.push_back(i);
    return out;
}

std::vector<std::size_t> annulus_query(const PointCloud& cloud,
                                       std::span<const double> c, double r,
                                       double delta) {
    if (c.size() != cloud.dim())
        throw std::invalid_argument("annulus_query: dimension mismatch");
    if (r < 0.0) throw std::invalid_argument("annulus_query: negative inner radius");
    if (delta <= 0.0) throw std::invalid_argument("annulus_query: delta must be > 0");
    std::vector<std::size_t> out;
    const double inner2 = r * r;
    const double outer = r + delta;
    const double outer2 = outer * outer;
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        const double d2 = squared_dist(cloud[i], c);
        if (d2 > inner2 && d2 <= outer2) out.push_back(i);
    }
    return out;
}

}  // namespace mgr
