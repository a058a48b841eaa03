#include <cmath>

#include "doctest.h"
#include "enclosure/mesh.hpp"

using namespace enclosure;

TEST_CASE("rectangle mesh is conforming with the expected boundary") {
    const auto dom = PolygonalDomain::rectangle({0, 0}, {1, 1});
    MeshOptions opts;
    opts.h = 1.0 / 16;
    const Mesh m = generate_mesh(dom, nullptr, opts);
    CHECK(m.n_triangles() == 2 * 16 * 16);
    CHECK(m.n_nodes() == 17 * 17);
    CHECK(m.boundary_loop.size() == 4 * 16);
    m.validate();
    double area = 0.0;
    for (std::size_t t = 0; t < m.n_triangles(); ++t) area += m.tri_area(t);
    CHECK(area == doctest::Approx(1.0));
}

TEST_CASE("inclusion fitting attributes elements consistently") {
    const auto dom = PolygonalDomain::rectangle({0, 0}, {1, 1});
    const auto disk = PolygonalDomain::regular_polygon({0.5, 0.6}, 0.15, 64, -M_PI / 2);
    MeshOptions opts;
    opts.h = 1.0 / 64;
    const Mesh m = generate_mesh(dom, &disk, opts);
    m.validate();
    double in_area = 0.0;
    for (std::size_t t = 0; t < m.n_triangles(); ++t)
        if (m.tri_in_inclusion[t]) in_area += m.tri_area(t);
    const double disk_area = disk.area();
    CHECK(std::abs(in_area - disk_area) / disk_area < 0.02);

    // Attribution fidelity is O(h): inside elements must not poke out of the
    // polygon by more than an element.
    for (std::size_t t = 0; t < m.n_triangles(); ++t) {
        if (!m.tri_in_inclusion[t]) continue;
        for (int v = 0; v < 3; ++v) {
            const Vec2 p = m.nodes[m.triangles[t][v]];
            if (!disk.contains(p)) CHECK(disk.distance_to_boundary(p) < 0.9 * opts.h);
        }
    }
}

TEST_CASE("convex clipped domain meshes cleanly") {
    // Circle segment: the kind of slice domain the probe solver uses.
    const auto circle = PolygonalDomain::regular_polygon({0.5, 0.5}, 1.0, 256, 0.0);
    const auto seg = circle.clip_halfplane({0, 1}, 0.55);
    REQUIRE(!seg.empty());
    MeshOptions opts;
    opts.h = 1.0 / 32;
    const Mesh m = generate_mesh(seg, nullptr, opts);
    m.validate();
    double area = 0.0;
    for (std::size_t t = 0; t < m.n_triangles(); ++t) area += m.tri_area(t);
    CHECK(area == doctest::Approx(seg.area()).epsilon(1e-6));
}

TEST_CASE("red refinement preserves area and attribution") {
    const auto dom = PolygonalDomain::rectangle({0, 0}, {1, 1});
    const auto sq = PolygonalDomain::rectangle({0.3, 0.3}, {0.7, 0.7});
    MeshOptions opts;
    opts.h = 1.0 / 8;
    const Mesh m = generate_mesh(dom, &sq, opts);
    const Mesh f = refine_mesh(m);
    CHECK(f.n_triangles() == 4 * m.n_triangles());
    CHECK(f.h_mesh == doctest::Approx(m.h_mesh / 2));
    double a0 = 0, a1 = 0;
    for (std::size_t t = 0; t < m.n_triangles(); ++t)
        if (m.tri_in_inclusion[t]) a0 += m.tri_area(t);
    for (std::size_t t = 0; t < f.n_triangles(); ++t)
        if (f.tri_in_inclusion[t]) a1 += f.tri_area(t);
    CHECK(a0 == doctest::Approx(a1));
}

TEST_CASE("mesh json round-trip") {
    const auto dom = PolygonalDomain::rectangle({0, 0}, {1, 1});
    MeshOptions opts;
    opts.h = 0.25;
    const Mesh m = generate_mesh(dom, nullptr, opts);
    const Mesh m2 = mesh_from_json(mesh_to_json(m));
    CHECK(m2.n_nodes() == m.n_nodes());
    CHECK(m2.n_triangles() == m.n_triangles());
    CHECK(m2.boundary_loop == m.boundary_loop);
}
