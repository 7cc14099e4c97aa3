#include "mgr/grid.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numeric>

namespace mgr {
namespace {

// Safety margin for squared-distance cell bounds: cells are only skipped or
// bulk-accepted when clear of the boundary by more than accumulated double
// rounding, so results match the linear-scan predicates exactly.
inline double margin(double a, double b) { return 1e-12 * (a + b + 1.0); }

struct UF {
    std::vector<std::uint32_t>& p;
    explicit UF(std::vector<std::uint32_t>& buf) : p(buf) {}
    void reset(std::size_t n) {
        p.resize(n);
        std::iota(p.begin(), p.end(), 0u);
    }
    std::uint32_t find(std::uint32_t x) {
        while (p[x] != x) {
            p[x] = p[p[x]];
            x = p[x];
        }
        return x;
    }
    bool unite(std::uint32_t a, std::uint32_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        if (a < b) std::swap(a, b);  // keep smallest id as root
        p[a] = b;
        return true;
    }
};

}  // namespace

SpatialGrid::SpatialGrid(const PointCloud& cloud, double cell_size)
    : cloud_(&cloud), cell_(cell_size), dim_(cloud.dim()) {
    if (!(cell_size > 0.0)) throw std::invalid_argument("SpatialGrid: cell_size must be > 0");
    for (double v : cloud.data())
        if (std::abs(v) / cell_size >= 1073741824.0)
            throw std::invalid_argument("SpatialGrid: cell size too small for coordinate range");
    const std::size_t n = cloud.size();
    std::vector<std::int32_t> coords(n * dim_);
    for (std::size_t i = 0; i < n; ++i) point_coords(cloud[i], coords.data() + i * dim_);

    order_.resize(n);
    std::iota(order_.begin(), order_.end(), 0u);
    const std::size_t d = dim_;
    std::sort(order_.begin(), order_.end(), [&](std::uint32_t a, std::uint32_t b) {
        const std::int32_t* ca = coords.data() + a * d;
        const std::int32_t* cb = coords.data() + b * d;
        for (std::size_t k = 0; k < d; ++k)
            if (ca[k] != cb[k]) return ca[k] < cb[k];
        return a < b;
    });

    coord_min_.assign(d, 0);
    coord_max_.assign(d, 0);
    if (n > 0) {
        for (std::size_t k = 0; k < d; ++k)
            coord_min_[k] = coord_max_[k] = coords[order_[0] * d + k];
    }
    std::uint32_t start = 0;
    for (std::uint32_t i = 0; i <= n; ++i) {
        bool boundary = (i == n);
        if (!boundary && i > 0) {
            const std::int32_t* ca = coords.data() + order_[i - 1] * d;
            const std::int32_t* cb = coords.data() + order_[i] * d;
            boundary = !std::equal(ca, ca + d, cb);
        }
        if (boundary && i > 0) {
            const std::int32_t* cc = coords.data() + order_[start] * d;
            cell_coords_.insert(cell_coords_.end(), cc, cc + d);
            cell_range_.push_back({start, i});
            for (std::size_t k = 0; k < d; ++k) {
                coord_min_[k] = std::min(coord_min_[k], cc[k]);
                coord_max_[k] = std::max(coord_max_[k], cc[k]);
            }
            start = i;
        }
    }
}

void SpatialGrid::point_coords(std::span<const double> p, std::int32_t* out) const {
    for (std::size_t k = 0; k < dim_; ++k)
        out[k] = static_cast<std::int32_t>(std::floor(p[k] / cell_));
}

std::int64_t SpatialGrid::find_cell(const std::int32_t* coords) const {
    const std::size_t d = dim_;
    std::int64_t lo = 0, hi = static_cast<std::int64_t>(cell_range_.size()) - 1;
    while (lo <= hi) {
        const std::int64_t mid = (lo + hi) / 2;
        const std::int32_t* cc = cell_coords_.data() + mid * d;
        int cmp = 0;
        for (std::size_t k = 0; k < d; ++k) {
            if (cc[k] != coords[k]) {
                cmp = cc[k] < coords[k] ? -1 : 1;
                break;
            }
        }
        if (cmp == 0) return mid;
        if (cmp < 0)
            lo = mid + 1;
        else
            hi = mid - 1;
    }
    return -1;
}

void SpatialGrid::cell_point_bounds(std::size_t cell, std::span<const double> c,
                                    double& lo2, double& hi2) const {
    const std::int32_t* cc = cell_coords_.data() + cell * dim_;
    lo2 = 0.0;
    hi2 = 0.0;
    for (std::size_t k = 0; k < dim_; ++k) {
        const double lo = cc[k] * cell_;
        const double hi = lo + cell_;
        if (c[k] < lo) {
            const double a = lo - c[k], b = hi - c[k];
            lo2 += a * a;
            hi2 += b * b;
        } else if (c[k] > hi) {
            const double a = c[k] - hi, b = c[k] - lo;
            lo2 += a * a;
            hi2 += b * b;
        } else {
            const double b = std::max(c[k] - lo, hi - c[k]);
            hi2 += b * b;
        }
    }
}

void SpatialGrid::cell_cell_bounds(std::size_t ca, std::size_t cb, double& lo2,
                                   double& hi2) const {
    const std::int32_t* a = cell_coords_.data() + ca * dim_;
    const std::int32_t* b = cell_coords_.data() + cb * dim_;
    lo2 = 0.0;
    hi2 = 0.0;
    for (std::size_t k = 0; k < dim_; ++k) {
        const double diff = std::abs(a[k] - b[k]);
        const double lo = diff > 1.0 ? (diff - 1.0) * cell_ : 0.0;
        const double hi = (diff + 1.0) * cell_;
        lo2 += lo * lo;
        hi2 += hi * hi;
    }
}

template <typename Fn>
void SpatialGrid::for_cells_near(std::span<const double> c, double rad, Fn&& fn) const {
    if (cell_range_.empty()) return;
    const std::size_t d = dim_;
    std::int64_t window = 1;
    std::vector<std::int32_t> lo(d), hi(d), cur(d);
    for (std::size_t k = 0; k < d; ++k) {
        lo[k] = std::max<std::int32_t>(coord_min_[k],
                                       static_cast<std::int32_t>(std::floor((c[k] - rad) / cell_)));
        hi[k] = std::min<std::int32_t>(coord_max_[k],
                                       static_cast<std::int32_t>(std::floor((c[k] + rad) / cell_)));
        if (lo[k] > hi[k]) return;
        window *= (hi[k] - lo[k] + 1);
    }
    const std::int64_t ncells = static_cast<std::int64_t>(cell_range_.size());
    if (window <= 2 * ncells) {
        cur.assign(lo.begin(), lo.end());
        while (true) {
            const std::int64_t id = find_cell(cur.data());
            if (id >= 0) fn(static_cast<std::size_t>(id));
            std::size_t k = d;
            while (k > 0) {
                --k;
                if (++cur[k] <= hi[k]) break;
                cur[k] = lo[k];
                if (k == 0) return;
            }
        }
    } else {
        for (std::size_t cell = 0; cell < cell_range_.size(); ++cell) {
            const std::int32_t* cc = cell_coords_.data() + cell * d;
            bool in = true;
            for (std::size_t k = 0; k < d; ++k)
                if (cc[k] < lo[k] || cc[k] > hi[k]) {
                    in = false;
                    break;
                }
            if (in) fn(cell);
        }
    }
}

void SpatialGrid::ball_query(std::span<const double> c, double rad,
                             std::vector<std::uint32_t>& out) const {
    out.clear();
    if (rad < 0.0) return;
    const double r2 = rad * rad;
    const double eps = margin(r2, cell_ * cell_);
    const auto& cloud = *cloud_;
    for_cells_near(c, rad + cell_, [&](std::size_t cell) {
        double lo2, hi2;
        cell_point_bounds(cell, c, lo2, hi2);
        if (lo2 > r2 + eps) return;
        const auto [b, e] = cell_range_[cell];
        if (hi2 < r2 - eps) {
            out.insert(out.end(), order_.begin() + b, order_.begin() + e);
            return;
        }
        for (std::uint32_t i = b; i < e; ++i)
            if (squared_dist(cloud[order_[i]], c) <= r2) out.push_back(order_[i]);
    });
    std::sort(out.begin(), out.end());
}

void SpatialGrid::strict_ball_query(std::span<const double> c, double rad,
                                    std::vector<std::uint32_t>& out) const {
    out.clear();
    if (rad <= 0.0) return;
    const double r2 = rad * rad;
    const double eps = margin(r2, cell_ * cell_);
    const auto& cloud = *cloud_;
    for_cells_near(c, rad + cell_, [&](std::size_t cell) {
        double lo2, hi2;
        cell_point_bounds(cell, c, lo2, hi2);
        if (lo2 > r2 + eps) return;
        const auto [b, e] = cell_range_[cell];
        if (hi2 < r2 - eps) {
            out.insert(out.end(), order_.begin() + b, order_.begin() + e);
            return;
        }
        for (std::uint32_t i = b; i < e; ++i)
            if (squared_dist(cloud[order_[i]], c) < r2) out.push_back(order_[i]);
    });
    std::sort(out.begin(), out.end());
}

void SpatialGrid::annulus_query(std::span<const double> c, double r, double delta,
                                std::vector<std::uint32_t>& out) const {
    out.clear();
    const double inner2 = r * r;
    const double outer = r + delta;
    const double outer2 = outer * outer;
    const double eps = margin(outer2, cell_ * cell_);
    const auto& cloud = *cloud_;
    for_cells_near(c, outer + cell_, [&](std::size_t cell) {
        double lo2, hi2;
        cell_point_bounds(cell, c, lo2, hi2);
        if (lo2 > outer2 + eps || hi2 < inner2 - eps) return;
        const auto [b, e] = cell_range_[cell];
        if (lo2 > inner2 + eps && hi2 < outer2 - eps) {
            out.insert(out.end(), order_.begin() + b, order_.begin() + e);
            return;
        }
        for (std::uint32_t i = b; i < e; ++i) {
            const double d2 = squared_dist(cloud[order_[i]], c);
            if (d2 > inner2 && d2 <= outer2) out.push_back(order_[i]);
        }
    });
    std::sort(out.begin(), out.end());
}

int SpatialGrid::shell_component_count(std::span<const double> c, double r,
                                       double delta, double rips_delta,
                                       ShellScratch& s) const {
    std::vector<std::uint32_t> cells;
    for_cells_near(c, r + delta + cell_,
                   [&](std::size_t cell) { cells.push_back(static_cast<std::uint32_t>(cell)); });
    return shell_component_count(c, r, delta, rips_delta, s, cells);
}

void SpatialGrid::occupied_near_cell(std::size_t cell, double rad,
                                     std::vector<std::uint32_t>& out) const {
    out.clear();
    const std::size_t d = dim_;
    const std::int32_t reach = static_cast<std::int32_t>(std::ceil(rad / cell_)) + 1;
    const std::int32_t* cc = cell_coords_.data() + cell * d;
    std::int64_t window = 1;
    std::vector<std::int32_t> lo(d), hi(d), cur(d);
    for (std::size_t k = 0; k < d; ++k) {
        lo[k] = std::max(coord_min_[k], cc[k] - reach);
        hi[k] = std::min(coord_max_[k], cc[k] + reach);
        if (lo[k] > hi[k]) return;
        window *= (hi[k] - lo[k] + 1);
    }
    if (window <= 2 * static_cast<std::int64_t>(cell_range_.size())) {
        cur.assign(lo.begin(), lo.end());
        while (true) {
            const std::int64_t id = find_cell(cur.data());
            if (id >= 0) out.push_back(static_cast<std::uint32_t>(id));
            std::size_t k = d;
            bool done = false;
            while (k > 0) {
                --k;
                if (++cur[k] <= hi[k]) break;
                cur[k] = lo[k];
                if (k == 0) done = true;
            }
            if (done) break;
        }
    } else {
        for (std::size_t cb = 0; cb < cell_range_.size(); ++cb) {
            const std::int32_t* bc = cell_coords_.data() + cb * d;
            bool in = true;
            for (std::size_t k = 0; k < d; ++k)
                if (bc[k] < lo[k] || bc[k] > hi[k]) {
                    in = false;
                    break;
                }
            if (in) out.push_back(static_cast<std::uint32_t>(cb));
        }
    }
}

int SpatialGrid::shell_component_count(std::span<const double> c, double r, double delta,
                                       double rips_delta, ShellScratch& s,
                                       std::span<const std::uint32_t> candidate_cells) const {
    assert(cell_ * std::sqrt(static_cast<double>(dim_)) <= rips_delta * (1 + 1e-12));
    s.pts.clear();
    s.group_off.clear();
    s.group_cell.clear();

    const double inner2 = r * r;
    const double outer = r + delta;
    const double outer2 = outer * outer;
    const double eps = margin(outer2, cell_ * cell_);
    const auto& cloud = *cloud_;

    for (const std::uint32_t cell : candidate_cells) {
        double lo2, hi2;
        cell_point_bounds(cell, c, lo2, hi2);
        if (lo2 > outer2 + eps || hi2 < inner2 - eps) continue;
        const auto [b, e] = cell_range_[cell];
        const std::size_t before = s.pts.size();
        if (lo2 > inner2 + eps && hi2 < outer2 - eps) {
            s.pts.insert(s.pts.end(), order_.begin() + b, order_.begin() + e);
        } else {
            for (std::uint32_t i = b; i < e; ++i) {
                const double d2 = squared_dist(cloud[order_[i]], c);
                if (d2 > inner2 && d2 <= outer2) s.pts.push_back(order_[i]);
            }
        }
        if (s.pts.size() > before) {
            s.group_off.push_back(static_cast<std::uint32_t>(before));
            s.group_cell.push_back(cell);
        }
    }

    const std::size_t k = s.group_cell.size();
    if (k == 0) return 0;
    s.group_off.push_back(static_cast<std::uint32_t>(s.pts.size()));

    UF uf(s.uf);
    uf.reset(k);
    const double d2max = rips_delta * rips_delta;
    const double ueps = margin(d2max, cell_ * cell_);
    int comps = static_cast<int>(k);
    for (std::size_t a = 0; a + 1 < k && comps > 1; ++a) {
        for (std::size_t b = a + 1; b < k && comps > 1; ++b) {
            double lo2, hi2;
            cell_cell_bounds(s.group_cell[a], s.group_cell[b], lo2, hi2);
            if (lo2 > d2max + ueps) continue;
            if (uf.find(static_cast<std::uint32_t>(a)) ==
                uf.find(static_cast<std::uint32_t>(b)))
                continue;
            bool linked = false;
            if (hi2 < d2max - ueps) {
                linked = true;
            } else {
                for (std::uint32_t i = s.group_off[a]; i < s.group_off[a + 1] && !linked; ++i) {
                    auto pi = cloud[s.pts[i]];
                    for (std::uint32_t j = s.group_off[b]; j < s.group_off[b + 1]; ++j) {
                        if (squared_dist(pi, cloud[s.pts[j]]) <= d2max) {
                            linked = true;
                            break;
                        }
                    }
                }
            }
            if (linked && uf.unite(static_cast<std::uint32_t>(a),
                                   static_cast<std::uint32_t>(b)))
                --comps;
        }
    }
    return comps;
}

void SpatialGrid::for_label_pairs_within(
    const std::vector<std::uint8_t>& from, const std::vector<std::uint8_t>& to, double rad,
    const std::function<void(std::uint32_t, std::uint32_t, double)>& fn) const {
    const auto& cloud = *cloud_;
    const std::size_t n = cloud.size();
    if (from.size() != n || to.size() != n)
        throw std::invalid_argument("for_label_pairs_within: mask size mismatch");
    if (!(rad > 0.0)) return;

    std::vector<std::uint8_t> cell_has_to(cell_range_.size(), 0);
    for (std::size_t cell = 0; cell < cell_range_.size(); ++cell) {
        const auto [b, e] = cell_range_[cell];
        for (std::uint32_t i = b; i < e; ++i)
            if (to[order_[i]]) {
                cell_has_to[cell] = 1;
                break;
            }
    }

    const double r2 = rad * rad;
    const int reach = static_cast<int>(std::ceil(rad / cell_)) + 1;
    const std::size_t d = dim_;
    std::vector<std::int32_t> lo(d), hi(d), cur(d);
    for (std::size_t ca = 0; ca < cell_range_.size(); ++ca) {
        const auto [ab, ae] = cell_range_[ca];
        bool has_from = false;
        for (std::uint32_t i = ab; i < ae && !has_from; ++i) has_from = from[order_[i]];
        if (!has_from) continue;
        const std::int32_t* cc = cell_coords_.data() + ca * d;
        for (std::size_t q = 0; q < d; ++q) {
            lo[q] = cc[q] - reach;
            hi[q] = cc[q] + reach;
        }
        cur.assign(lo.begin(), lo.end());
        while (true) {
            const std::int64_t cb = find_cell(cur.data());
            if (cb >= 0 && cell_has_to[cb]) {
                double lo2, hi2;
                cell_cell_bounds(ca, static_cast<std::size_t>(cb), lo2, hi2);
                if (lo2 < r2 + margin(r2, cell_ * cell_)) {
                    const auto [bb, be] = cell_range_[cb];
                    for (std::uint32_t i = ab; i < ae; ++i) {
                        if (!from[order_[i]]) continue;
                        auto pi = cloud[order_[i]];
                        for (std::uint32_t j = bb; j < be; ++j) {
                            if (!to[order_[j]]) continue;
                            const double d2 = squared_dist(pi, cloud[order_[j]]);
                            if (d2 < r2) fn(order_[i], order_[j], d2);
                        }
                    }
                }
            }
            std::size_t q = d;
            bool done = false;
            while (q > 0) {
                --q;
                if (++cur[q] <= hi[q]) break;
                cur[q] = lo[q];
                if (q == 0) done = true;
            }
            if (done) break;
        }
    }
}

int SpatialGrid::components(const std::vector<std::uint8_t>& active, double rips_delta,
                            std::vector<std::int32_t>& comp) const {
    const auto& cloud = *cloud_;
    const std::size_t n = cloud.size();
    if (active.size() != n) throw std::invalid_argument("components: mask size mismatch");
    if (cell_ * std::sqrt(static_cast<double>(dim_)) > rips_delta * (1 + 1e-12))
        throw std::invalid_argument("components: grid too coarse for rips scale");
    comp.resize(n);

    // Active groups per cell.
    std::vector<std::uint32_t> gcell, gpts, goff;
    std::vector<std::int64_t> cell_to_group(cell_range_.size(), -1);
    for (std::size_t cell = 0; cell < cell_range_.size(); ++cell) {
        const auto [b, e] = cell_range_[cell];
        const std::size_t before = gpts.size();
        for (std::uint32_t i = b; i < e; ++i)
            if (active[order_[i]]) gpts.push_back(order_[i]);
        if (gpts.size() > before) {
            cell_to_group[cell] = static_cast<std::int64_t>(gcell.size());
            goff.push_back(static_cast<std::uint32_t>(before));
            gcell.push_back(static_cast<std::uint32_t>(cell));
        }
    }
    const std::size_t k = gcell.size();
    if (k == 0) return 0;
    goff.push_back(static_cast<std::uint32_t>(gpts.size()));

    std::vector<std::uint32_t> ufbuf;
    UF uf(ufbuf);
    uf.reset(k);
    const double d2max = rips_delta * rips_delta;
    const double ueps = margin(d2max, cell_ * cell_);
    const int reach = static_cast<int>(std::ceil(rips_delta / cell_)) + 1;
    const std::size_t d = dim_;
    std::vector<std::int32_t> lo(d), hi(d), cur(d);

    for (std::size_t ga = 0; ga < k; ++ga) {
        const std::int32_t* cc = cell_coords_.data() + gcell[ga] * d;
        for (std::size_t q = 0; q < d; ++q) {
            lo[q] = cc[q] - reach;
            hi[q] = cc[q] + reach;
        }
        cur.assign(lo.begin(), lo.end());
        while (true) {
            const std::int64_t cellb = find_cell(cur.data());
            if (cellb >= 0 && cell_to_group[cellb] > static_cast<std::int64_t>(ga)) {
                const std::size_t gb = static_cast<std::size_t>(cell_to_group[cellb]);
                double lo2, hi2;
                cell_cell_bounds(gcell[ga], gcell[gb], lo2, hi2);
                if (lo2 <= d2max + ueps &&
                    uf.find(static_cast<std::uint32_t>(ga)) !=
                        uf.find(static_cast<std::uint32_t>(gb))) {
                    bool linked = hi2 < d2max - ueps;
                    for (std::uint32_t i = goff[ga]; i < goff[ga + 1] && !linked; ++i) {
                        auto pi = cloud[gpts[i]];
                        for (std::uint32_t j = goff[gb]; j < goff[gb + 1]; ++j)
                            if (squared_dist(pi, cloud[gpts[j]]) <= d2max) {
                                linked = true;
                                break;
                            }
                    }
                    if (linked)
                        uf.unite(static_cast<std::uint32_t>(ga), static_cast<std::uint32_t>(gb));
                }
            }
            std::size_t q = d;
            bool done = false;
            while (q > 0) {
                --q;
                if (++cur[q] <= hi[q]) break;
                cur[q] = lo[q];
                if (q == 0) done = true;
            }
            if (done) break;
        }
    }

    // Dense component ids ordered by smallest member point index.
    std::vector<std::int32_t> root_label(k, -1);
    std::vector<std::uint32_t> point_group(n, 0);
    for (std::size_t g = 0; g < k; ++g)
        for (std::uint32_t i = goff[g]; i < goff[g + 1]; ++i)
            point_group[gpts[i]] = static_cast<std::uint32_t>(g);
    int next = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (!active[i]) continue;
        const std::uint32_t root = uf.find(point_group[i]);
        if (root_label[root] < 0) root_label[root] = next++;
        comp[i] = root_label[root];
    }
    return next;
}

}  // namespace mgr
