#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "mgr/geometry.hpp"
#include "mgr/grid.hpp"
#include "test_util.hpp"

using namespace mgr;

TEST_CASE("euclidean_dist basics") {
    CHECK(euclidean_dist(Point{0, 0}, Point{3, 4}) == doctest::Approx(5.0).epsilon(1e-15));
    const Point p{1.25, -2.5, 3.75};
    CHECK(euclidean_dist(p, p) == 0.0);
    CHECK_THROWS_AS(euclidean_dist(Point{0, 0}, Point{0, 0, 0}), std::invalid_argument);
}

TEST_CASE("euclidean_dist matches extended-precision evaluation") {
    std::mt19937_64 rng(7);
    for (int it = 0; it < 100; ++it) {
        Point p(5), q(5);
        for (int d = 0; d < 5; ++d) {
            p[d] = (uniform01(rng) - 0.5) * 200.0;
            q[d] = (uniform01(rng) - 0.5) * 200.0;
        }
        long double acc = 0.0L;
        for (int d = 0; d < 5; ++d) {
            const long double diff = static_cast<long double>(p[d]) - q[d];
            acc += diff * diff;
        }
        const double expect = static_cast<double>(std::sqrt(acc));
        CHECK(euclidean_dist(p, q) == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("euclidean_dist symmetry and triangle inequality") {
    auto cloud = testutil::random_cloud(30, 3, 11);
    for (std::size_t i = 0; i < cloud.size(); ++i)
        for (std::size_t j = 0; j < cloud.size(); ++j) {
            CHECK(euclidean_dist(cloud[i], cloud[j]) == euclidean_dist(cloud[j], cloud[i]));
            for (std::size_t k = 0; k < cloud.size(); ++k)
                CHECK(euclidean_dist(cloud[i], cloud[k]) <=
                      euclidean_dist(cloud[i], cloud[j]) + euclidean_dist(cloud[j], cloud[k]) +
                          1e-12);
        }
}

TEST_CASE("rigid motion invariance") {
    auto cloud = testutil::random_cloud(20, 3, 13);
    const auto rot = testutil::random_rotation(3, 99);
    const Point shift{0.3, -1.7, 2.2};
    auto apply = [&](std::span<const double> p) {
        Point out(3, 0.0);
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) out[i] += rot[i][j] * p[j];
            out[i] += shift[i];
        }
        return out;
    };
    for (std::size_t i = 0; i + 1 < cloud.size(); ++i) {
        const double before = euclidean_dist(cloud[i], cloud[i + 1]);
        const double after = euclidean_dist(apply(cloud[i]), apply(cloud[i + 1]));
        CHECK(after == doctest::Approx(before).epsilon(1e-9));
    }
}

TEST_CASE("ball_query examples") {
    PointCloud cloud(std::vector<Point>{{0, 0}, {2, 0}});
    CHECK(ball_query(cloud, Point{0, 0}, 1.0) == std::vector<std::size_t>{0});
    CHECK(ball_query(cloud, Point{2, 0}, 0.0) == std::vector<std::size_t>{1});
    CHECK_THROWS_AS(ball_query(cloud, Point{0, 0, 0}, 1.0), std::invalid_argument);
}

TEST_CASE("annulus_query examples and boundary convention") {
    PointCloud cloud(std::vector<Point>{{0.5, 0}, {1.5, 0}, {3, 0}});
    CHECK(annulus_query(cloud, Point{0, 0}, 1.0, 1.0) == std::vector<std::size_t>{1});
    // point exactly at distance r is excluded (inner boundary open)
    PointCloud c2(std::vector<Point>{{1.0, 0}, {1.5, 0}});
    CHECK(annulus_query(c2, Point{0, 0}, 1.0, 1.0) == std::vector<std::size_t>{1});
    // point exactly at distance r+delta is included (outer closed)
    PointCloud c3(std::vector<Point>{{2.0, 0}});
    CHECK(annulus_query(c3, Point{0, 0}, 1.0, 1.0) == std::vector<std::size_t>{0});
}

namespace {

std::vector<std::size_t> scan_ball(const PointCloud& cloud, const Point& c, double rad) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        double s = 0;
        for (std::size_t d = 0; d < c.size(); ++d)
            s += (cloud[i][d] - c[d]) * (cloud[i][d] - c[d]);
        if (s <= rad * rad) out.push_back(i);
    }
    return out;
}

}  // namespace

TEST_CASE("queries agree with exhaustive scan and with each other") {
    for (std::size_t dim : {2u, 3u, 5u}) {
        auto cloud = testutil::random_cloud(400, dim, 1000 + dim);
        std::mt19937_64 rng(17 * dim);
        for (int it = 0; it < 25; ++it) {
            Point c(dim);
            for (auto& x : c) x = (uniform01(rng) - 0.5) * 2.2;
            const double r = uniform01(rng) * 0.8;
            const double delta = 0.05 + uniform01(rng) * 0.6;

            const auto ball = ball_query(cloud, c, r + delta);
            CHECK(ball == scan_ball(cloud, c, r + delta));

            const auto inner = ball_query(cloud, c, r);
            const auto ann = annulus_query(cloud, c, r, delta);
            std::vector<std::size_t> diff;
            std::set_difference(ball.begin(), ball.end(), inner.begin(), inner.end(),
                                std::back_inserter(diff));
            CHECK(ann == diff);

            // monotonicity in radius
            std::vector<std::size_t> sub;
            std::set_difference(inner.begin(), inner.end(), ball.begin(), ball.end(),
                                std::back_inserter(sub));
            CHECK(sub.empty());
        }
    }
}

TEST_CASE("grid queries match linear-scan queries exactly") {
    for (std::size_t dim : {2u, 3u}) {
        auto cloud = testutil::random_cloud(600, dim, 55 + dim);
        std::mt19937_64 rng(23 * dim);
        for (double cell : {0.03, 0.11, 0.45}) {
            SpatialGrid grid(cloud, cell);
            std::vector<std::uint32_t> got;
            for (int it = 0; it < 20; ++it) {
                Point c(dim);
                for (auto& x : c) x = (uniform01(rng) - 0.5) * 2.4;
                const double r = uniform01(rng) * 0.7;
                const double delta = 0.02 + uniform01(rng) * 0.5;

                grid.ball_query(c, r + delta, got);
                const auto want_ball = ball_query(cloud, c, r + delta);
                REQUIRE(got.size() == want_ball.size());
                for (std::size_t k = 0; k < got.size(); ++k) CHECK(got[k] == want_ball[k]);

                grid.annulus_query(c, r, delta, got);
                const auto want_ann = annulus_query(cloud, c, r, delta);
                REQUIRE(got.size() == want_ann.size());
                for (std::size_t k = 0; k < got.size(); ++k) CHECK(got[k] == want_ann[k]);
            }
        }
    }
}

TEST_CASE("PointCloud validation") {
    CHECK_THROWS_AS(PointCloud(std::vector<Point>{{1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(PointCloud(std::vector<Point>{{1.0, 2.0}, {1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(PointCloud({1.0, std::numeric_limits<double>::infinity()}, 2),
                    std::invalid_argument);
    CHECK_THROWS_AS(PointCloud({1.0, 2.0, 3.0}, 2), std::invalid_argument);
}
