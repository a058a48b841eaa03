#include <cmath>

#include "doctest.h"
#include "enclosure/geometry.hpp"

using namespace enclosure;

TEST_CASE("orthonormal frame follows the fixed rotation convention") {
    auto d = orthonormal_frame({0.0, 1.0});
    CHECK(d.eta.x == doctest::Approx(-1.0));
    CHECK(d.eta.y == doctest::Approx(0.0));

    d = orthonormal_frame({1.0, 0.0});
    CHECK(d.eta.x == doctest::Approx(0.0));
    CHECK(d.eta.y == doctest::Approx(1.0));

    d = orthonormal_frame({0.6, 0.8});
    CHECK(d.eta.x == doctest::Approx(-0.8));
    CHECK(d.eta.y == doctest::Approx(0.6));

    CHECK(std::abs(d.omega.dot(d.eta)) < 1e-12);
    CHECK(std::abs(d.omega.norm() - 1.0) < 1e-12);
    CHECK(std::abs(d.eta.norm() - 1.0) < 1e-12);

    CHECK_THROWS_AS(orthonormal_frame({0.0, 0.0}), InvalidDirectionError);
    CHECK_THROWS_AS(orthonormal_frame({2.0, 0.0}), InvalidDirectionError);
}

TEST_CASE("support function is the vertex minimum") {
    const auto square = PolygonalDomain::rectangle({0, 0}, {1, 1});
    CHECK(support_function_true(square, orthonormal_frame({0, 1})) ==
          doctest::Approx(0.0));
    const double s = 1.0 / std::sqrt(2.0);
    CHECK(support_function_true(square, orthonormal_frame({s, s})) ==
          doctest::Approx(0.0));

    const PolygonalDomain tri({{1, 1}, {2, 1}, {1, 2}});
    CHECK(support_function_true(tri, orthonormal_frame({0, -1})) ==
          doctest::Approx(-2.0));
}

TEST_CASE("hull from support: axis-aligned box") {
    std::vector<Direction> dirs = {orthonormal_frame({1, 0}), orthonormal_frame({-1, 0}),
                                   orthonormal_frame({0, 1}), orthonormal_frame({0, -1})};
    std::vector<double> hs = {-1, -1, -1, -1};
    auto est = hull_from_support(dirs, hs);
    REQUIRE(!est.hull_empty);
    CHECK(est.hull.area() == doctest::Approx(4.0));
    Vec2 lo, hi;
    est.hull.bounding_box(lo, hi);
    CHECK(lo.x == doctest::Approx(-1.0));
    CHECK(hi.y == doctest::Approx(1.0));

    CHECK_THROWS_AS(hull_from_support({dirs[0], dirs[1]}, {0.0, 0.0}),
                    InsufficientDataError);
}

TEST_CASE("hull from exact disk supports matches the inscribed polygon bound") {
    const double r = 0.5;
    std::vector<Direction> dirs;
    std::vector<double> hs;
    for (int i = 0; i < 64; ++i) {
        const double a = 2.0 * M_PI * i / 64;
        dirs.push_back(orthonormal_frame({std::cos(a), std::sin(a)}));
        hs.push_back(-r);  // support of the disk centered at the origin
    }
    auto est = hull_from_support(dirs, hs);
    REQUIRE(!est.hull_empty);
    // The hull circumscribes the disk; its Hausdorff distance to the disk is
    // r(1/cos(pi/64) - 1), below the stated inscribed-polygon bound scale.
    auto disk = PolygonalDomain::regular_polygon({0, 0}, r, 1024, 0.0);
    const double d = hausdorff_distance(est.hull, disk, 2e-4);
    CHECK(d < r * (1.0 / std::cos(M_PI / 64) - 1.0) + 5e-4);
}

TEST_CASE("hull from support at a polygon's inward edge normals reproduces it") {
    const PolygonalDomain poly({{0, 0}, {2, 0}, {2.5, 1.2}, {1, 2.2}, {-0.5, 1.0}});
    std::vector<Direction> dirs;
    std::vector<double> hs;
    const auto& v = poly.vertices();
    for (std::size_t i = 0; i < v.size(); ++i) {
        const Vec2 e = v[(i + 1) % v.size()] - v[i];
        const Vec2 inward = Vec2{-e.y, e.x} / e.norm();
        dirs.push_back(orthonormal_frame(inward));
        hs.push_back(support_function_true(poly, dirs.back()));
    }
    auto est = hull_from_support(dirs, hs);
    REQUIRE(!est.hull_empty);
    REQUIRE(est.hull.size() == poly.size());
    // Same vertex set up to rotation of the index.
    double worst = 1e9;
    for (std::size_t shift = 0; shift < poly.size(); ++shift) {
        double m = 0.0;
        for (std::size_t i = 0; i < poly.size(); ++i)
            m = std::max(m,
                         (est.hull.vertices()[(i + shift) % poly.size()] - v[i]).norm());
        worst = std::min(worst, m);
    }
    CHECK(worst < 1e-9);
}

TEST_CASE("hausdorff distance basics") {
    const auto a = PolygonalDomain::rectangle({0, 0}, {1, 1});
    CHECK(hausdorff_distance(a, a, 0.01) == doctest::Approx(0.0));

    const auto b = PolygonalDomain::rectangle({0.1, 0}, {1.1, 1});
    CHECK(hausdorff_distance(a, b, 0.005) == doctest::Approx(0.1).epsilon(1e-6));

    // disk vs inscribed 64-gon: closed-form r(1-cos(pi/64))
    const double r = 0.5;
    auto disk = PolygonalDomain::regular_polygon({0, 0}, r, 4096, 0.0);
    auto gon = PolygonalDomain::regular_polygon({0, 0}, r, 64, 0.0);
    const double expect = r * (1.0 - std::cos(M_PI / 64));
    CHECK(hausdorff_distance(disk, gon, 1e-4) == doctest::Approx(expect).epsilon(5e-3));
}

TEST_CASE("slices nest") {
    const auto dir = orthonormal_frame({0, 1});
    HalfSpaceSlice s1{dir, 0.2}, s2{dir, 0.5};
    for (double x = 0; x <= 1.0; x += 0.1)
        for (double y = 0; y <= 1.0; y += 0.1)
            if (s2.contains({x, y})) CHECK(s1.contains({x, y}));
}

TEST_CASE("convex hull oracle for an L-shape") {
    std::vector<Vec2> pts = {{0, 0}, {1, 0}, {1, 0.4}, {0.4, 0.4}, {0.4, 1}, {0, 1}};
    auto hull = convex_hull_of(pts);
    CHECK(hull.size() == 5);  // the inner corner drops out
    CHECK(hull.area() == doctest::Approx(1.0 - 0.5 * 0.6 * 0.6));
}
