#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "enclosure/geometry.hpp"

namespace enclosure {

/// Conforming P1 triangle mesh. Triangles are CCW; the boundary loop is a
/// single closed CCW cycle of node indices. Every triangle carries an
/// in/out attribution for the inclusion so coefficients never mix within an
/// element.
struct Mesh {
    std::vector<Vec2> nodes;
    std::vector<std::array<int, 3>> triangles;
    std::vector<uint8_t> tri_in_inclusion;  // per triangle
    std::vector<int> boundary_loop;         // ordered, closed (implicitly)
    std::vector<uint8_t> node_on_boundary;  // per node
    double h_mesh = 0.0;                    // max edge length

    std::size_t n_nodes() const { return nodes.size(); }
    std::size_t n_triangles() const { return triangles.size(); }

    double tri_area(std::size_t t) const {
        const Vec2& a = nodes[triangles[t][0]];
        const Vec2& b = nodes[triangles[t][1]];
        const Vec2& c = nodes[triangles[t][2]];
        return 0.5 * (b - a).cross(c - a);
    }
    Vec2 tri_centroid(std::size_t t) const {
        const Vec2& a = nodes[triangles[t][0]];
        const Vec2& b = nodes[triangles[t][1]];
        const Vec2& c = nodes[triangles[t][2]];
        return (a + b + c) / 3.0;
    }

    /// Gradients of the three nodal hats on triangle t (constant on t).
    std::array<Vec2, 3> hat_gradients(std::size_t t) const;

    /// Throws MeshError if non-conforming or inverted.
    void validate() const;
};

struct MeshOptions {
    double h = 1.0 / 32.0;        // target grid spacing
    double snap_tol_factor = 0.3; // snap nodes within factor*h of the interface
    bool fit_inclusion = true;
};

/// Structured triangulation of a convex polygonal domain: uniform grid cells
/// fully inside become two triangles, cells cut by the boundary are clipped
/// and fan-triangulated. Optionally snaps nodes to the inclusion boundary and
/// attributes every element to inside/outside.
Mesh generate_mesh(const PolygonalDomain& domain, const PolygonalDomain* inclusion,
                   const MeshOptions& opts);

/// Uniform red refinement (each triangle into four). Attribution inherited.
Mesh refine_mesh(const Mesh& m);

std::string mesh_to_json(const Mesh& m);
Mesh mesh_from_json(const std::string& text);

}  // namespace enclosure
