#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "enclosure/errors.hpp"

namespace enclosure {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2() = default;
    Vec2(double x_, double y_) : x(x_), y(y_) {}

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    Vec2 operator/(double s) const { return {x / s, y / s}; }

    double dot(const Vec2& o) const { return x * o.x + y * o.y; }
    double cross(const Vec2& o) const { return x * o.y - y * o.x; }
    double norm() const { return std::hypot(x, y); }
    double norm2() const { return x * x + y * y; }
};

inline Vec2 operator*(double s, const Vec2& v) { return v * s; }

/// Probe frame: unit direction omega and the fixed 90-degree rotation
/// eta = (-omega.y, omega.x). The tangential coordinate along a level set
/// {x.omega = t} is x' = x.eta.
struct Direction {
    Vec2 omega;
    Vec2 eta;
};

/// Frame for a (near-)unit vector. The eta convention is global so that
/// cutoff supports and probe phases are reproducible across runs.
Direction orthonormal_frame(const Vec2& omega);

/// Simple, positively oriented, closed polygon. Vertices are stored CCW;
/// edge i runs from vertex i to vertex (i+1) mod n.
class PolygonalDomain {
   public:
    PolygonalDomain() = default;
    explicit PolygonalDomain(std::vector<Vec2> vertices);

    static PolygonalDomain rectangle(const Vec2& lo, const Vec2& hi);
    /// Inscribed regular polygon of a circle; first vertex at angle
    /// phase0 so support directions can be matched exactly.
    static PolygonalDomain regular_polygon(const Vec2& center, double radius,
                                           int segments, double phase0);

    bool empty() const { return verts_.empty(); }
    std::size_t size() const { return verts_.size(); }
    const std::vector<Vec2>& vertices() const { return verts_; }

    double area() const;
    double diameter() const;
    Vec2 centroid() const;
    bool contains(const Vec2& p) const;          // boundary counts as inside
    double distance_to_boundary(const Vec2& p) const;
    Vec2 closest_boundary_point(const Vec2& p) const;
    void bounding_box(Vec2& lo, Vec2& hi) const;
    bool is_convex(double tol = 1e-12) const;

    /// Boundary polyline sampled at spacing <= `spacing`, vertices included.
    std::vector<Vec2> sample_boundary(double spacing) const;

    /// Clip against the half-plane {x.n >= c}. Result is empty if the
    /// intersection vanishes. Intended for convex inputs.
    PolygonalDomain clip_halfplane(const Vec2& n, double c) const;

   private:
    std::vector<Vec2> verts_;
};

/// h_D(omega) = inf over D of x.omega; exact for polygons (vertex minimum).
double support_function_true(const PolygonalDomain& shape, const Direction& dir);

/// Slab predicate for Omega_t(omega) = Omega intersect {x.omega > t}.
struct HalfSpaceSlice {
    Direction dir;
    double t = 0.0;

    bool contains(const Vec2& p) const { return p.dot(dir.omega) > t; }
    double depth(const Vec2& p) const { return p.dot(dir.omega) - t; }
};

/// Per-direction support estimates plus the polygon they carve out.
struct SupportEstimate {
    std::vector<Direction> directions;
    std::vector<double> h_values;
    PolygonalDomain hull;
    bool hull_empty = false;
};

/// Intersect the half-planes {x.omega >= h(omega)}. Throws
/// InsufficientDataError for fewer than 3 directions. Sets hull_empty (and
/// leaves hull empty) when the intersection is void.
SupportEstimate hull_from_support(std::vector<Direction> directions,
                                  std::vector<double> h_values);

/// Symmetric Hausdorff distance between boundary polylines, sampled at the
/// given spacing.
double hausdorff_distance(const PolygonalDomain& a, const PolygonalDomain& b,
                          double spacing);

/// Convex hull (monotone chain); used as the ground-truth oracle for
/// non-convex inclusions.
PolygonalDomain convex_hull_of(const std::vector<Vec2>& points);

/// Tangential extent of the cross-section {x.omega = t} of a convex polygon:
/// the interval of x' = x.eta over the chord. Returns false when the level
/// set misses the polygon.
bool chord_interval(const PolygonalDomain& poly, const Direction& dir, double t,
                    double& lo, double& hi);

}  // namespace enclosure
