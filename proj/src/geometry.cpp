#include "enclosure/geometry.hpp"

#include <algorithm>
#include <limits>

namespace enclosure {

Direction orthonormal_frame(const Vec2& omega) {
    const double n = omega.norm();
    if (n < 1e-12) throw InvalidDirectionError("orthonormal_frame: zero direction");
    if (std::abs(n - 1.0) > 1e-6)
        throw InvalidDirectionError("orthonormal_frame: |omega| must be 1, got " +
                                    std::to_string(n));
    Vec2 w = omega / n;
    return Direction{w, Vec2{-w.y, w.x}};
}

PolygonalDomain::PolygonalDomain(std::vector<Vec2> vertices) : verts_(std::move(vertices)) {
    if (verts_.size() < 3) throw DomainError("polygon needs at least 3 vertices");
    // Enforce positive orientation.
    double twice_area = 0.0;
    for (std::size_t i = 0; i < verts_.size(); ++i) {
        const Vec2& a = verts_[i];
        const Vec2& b = verts_[(i + 1) % verts_.size()];
        twice_area += a.cross(b);
    }
    if (twice_area < 0.0) std::reverse(verts_.begin(), verts_.end());
    if (std::abs(twice_area) < 1e-300) throw DomainError("degenerate polygon");
}

PolygonalDomain PolygonalDomain::rectangle(const Vec2& lo, const Vec2& hi) {
    return PolygonalDomain({{lo.x, lo.y}, {hi.x, lo.y}, {hi.x, hi.y}, {lo.x, hi.y}});
}

PolygonalDomain PolygonalDomain::regular_polygon(const Vec2& center, double radius,
                                                 int segments, double phase0) {
    if (segments < 3) throw DomainError("regular_polygon: need >= 3 segments");
    std::vector<Vec2> v;
    v.reserve(static_cast<std::size_t>(segments));
    for (int i = 0; i < segments; ++i) {
        const double a = phase0 + 2.0 * M_PI * i / segments;
        v.push_back({center.x + radius * std::cos(a), center.y + radius * std::sin(a)});
    }
    return PolygonalDomain(std::move(v));
}

double PolygonalDomain::area() const {
    double s = 0.0;
    for (std::size_t i = 0; i < verts_.size(); ++i)
        s += verts_[i].cross(verts_[(i + 1) % verts_.size()]);
    return 0.5 * s;
}

double PolygonalDomain::diameter() const {
    double d2 = 0.0;
    for (std::size_t i = 0; i < verts_.size(); ++i)
        for (std::size_t j = i + 1; j < verts_.size(); ++j)
            d2 = std::max(d2, (verts_[i] - verts_[j]).norm2());
    return std::sqrt(d2);
}

Vec2 PolygonalDomain::centroid() const {
    double a = 0.0;
    Vec2 c{0, 0};
    for (std::size_t i = 0; i < verts_.size(); ++i) {
        const Vec2& p = verts_[i];
        const Vec2& q = verts_[(i + 1) % verts_.size()];
        const double w = p.cross(q);
        a += w;
        c = c + (p + q) * w;
    }
    return c / (3.0 * a);
}

bool PolygonalDomain::contains(const Vec2& p) const {
    // Crossing count with boundary tolerance.
    if (verts_.empty()) return false;
    const double tol = 1e-12 * (1.0 + std::abs(p.x) + std::abs(p.y));
    bool inside = false;
    for (std::size_t i = 0, j = verts_.size() - 1; i < verts_.size(); j = i++) {
        const Vec2& a = verts_[j];
        const Vec2& b = verts_[i];
        // On-segment check.
        const Vec2 ab = b - a;
        const double len2 = ab.norm2();
        if (len2 > 0) {
            const double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
            const Vec2 proj = a + ab * t;
            if ((p - proj).norm() <= tol) return true;
        }
        const bool crosses = ((b.y > p.y) != (a.y > p.y));
        if (crosses) {
            const double x_at = b.x + (p.y - b.y) * (a.x - b.x) / (a.y - b.y);
            if (p.x < x_at) inside = !inside;
        }
    }
    return inside;
}

Vec2 PolygonalDomain::closest_boundary_point(const Vec2& p) const {
    double best = std::numeric_limits<double>::infinity();
    Vec2 bp = p;
    for (std::size_t i = 0; i < verts_.size(); ++i) {
        const Vec2& a = verts_[i];
        const Vec2& b = verts_[(i + 1) % verts_.size()];
        const Vec2 ab = b - a;
        const double len2 = ab.norm2();
        const double t = len2 > 0 ? std::clamp((p - a).dot(ab) / len2, 0.0, 1.0) : 0.0;
        const Vec2 q = a + ab * t;
        const double d = (p - q).norm();
        if (d < best) {
            best = d;
            bp = q;
        }
    }
    return bp;
}

double PolygonalDomain::distance_to_boundary(const Vec2& p) const {
    return (p - closest_boundary_point(p)).norm();
}

void PolygonalDomain::bounding_box(Vec2& lo, Vec2& hi) const {
    lo = {std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    hi = {-lo.x, -lo.y};
    for (const Vec2& v : verts_) {
        lo.x = std::min(lo.x, v.x);
        lo.y = std::min(lo.y, v.y);
        hi.x = std::max(hi.x, v.x);
        hi.y = std::max(hi.y, v.y);
    }
}

bool PolygonalDomain::is_convex(double tol) const {
    const std::size_t n = verts_.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2& a = verts_[i];
        const Vec2& b = verts_[(i + 1) % n];
        const Vec2& c = verts_[(i + 2) % n];
        if ((b - a).cross(c - b) < -tol) return false;
    }
    return true;
}

std::vector<Vec2> PolygonalDomain::sample_boundary(double spacing) const {
    if (spacing <= 0) throw DomainError("sample_boundary: spacing must be positive");
    std::vector<Vec2> pts;
    for (std::size_t i = 0; i < verts_.size(); ++i) {
        const Vec2& a = verts_[i];
        const Vec2& b = verts_[(i + 1) % verts_.size()];
        const double len = (b - a).norm();
        const int n = std::max(1, static_cast<int>(std::ceil(len / spacing)));
        for (int k = 0; k < n; ++k) pts.push_back(a + (b - a) * (double(k) / n));
    }
    return pts;
}

PolygonalDomain PolygonalDomain::clip_halfplane(const Vec2& n, double c) const {
    // Sutherland-Hodgman, keep side x.n >= c.
    std::vector<Vec2> out;
    const std::size_t m = verts_.size();
    for (std::size_t i = 0; i < m; ++i) {
        const Vec2& a = verts_[i];
        const Vec2& b = verts_[(i + 1) % m];
        const double da = a.dot(n) - c;
        const double db = b.dot(n) - c;
        if (da >= 0) out.push_back(a);
        if ((da > 0 && db < 0) || (da < 0 && db > 0)) {
            const double s = da / (da - db);
            out.push_back(a + (b - a) * s);
        }
    }
    // Drop duplicate consecutive points.
    std::vector<Vec2> dedup;
    for (const Vec2& p : out) {
        if (dedup.empty() || (p - dedup.back()).norm() > 1e-14) dedup.push_back(p);
    }
    while (dedup.size() > 1 && (dedup.front() - dedup.back()).norm() <= 1e-14)
        dedup.pop_back();
    PolygonalDomain r;
    if (dedup.size() >= 3) {
        double twice_area = 0.0;
        for (std::size_t i = 0; i < dedup.size(); ++i)
            twice_area += dedup[i].cross(dedup[(i + 1) % dedup.size()]);
        if (std::abs(twice_area) > 1e-20) r = PolygonalDomain(std::move(dedup));
    }
    return r;
}

double support_function_true(const PolygonalDomain& shape, const Direction& dir) {
    if (shape.empty()) throw DomainError("support_function_true: empty shape");
    double h = std::numeric_limits<double>::infinity();
    for (const Vec2& v : shape.vertices()) h = std::min(h, v.dot(dir.omega));
    return h;
}

SupportEstimate hull_from_support(std::vector<Direction> directions,
                                  std::vector<double> h_values) {
    if (directions.size() != h_values.size())
        throw InsufficientDataError("hull_from_support: size mismatch");
    if (directions.size() < 3)
        throw InsufficientDataError("hull_from_support: need >= 3 directions");

    // Start from a box guaranteed to contain the intersection if bounded.
    double bound = 1.0;
    for (double h : h_values) bound = std::max(bound, std::abs(h));
    bound *= 1e3;
    PolygonalDomain poly =
        PolygonalDomain::rectangle({-bound, -bound}, {bound, bound});

    SupportEstimate est;
    est.directions = std::move(directions);
    est.h_values = std::move(h_values);
    for (std::size_t i = 0; i < est.directions.size(); ++i) {
        poly = poly.clip_halfplane(est.directions[i].omega, est.h_values[i]);
        if (poly.empty()) {
            est.hull_empty = true;
            return est;
        }
    }
    est.hull = poly;
    return est;
}

namespace {
double directed_hausdorff(const std::vector<Vec2>& from, const PolygonalDomain& to) {
    double worst = 0.0;
    const auto& tv = to.vertices();
    for (const Vec2& p : from) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < tv.size(); ++i) {
            const Vec2& a = tv[i];
            const Vec2& b = tv[(i + 1) % tv.size()];
            const Vec2 ab = b - a;
            const double len2 = ab.norm2();
            const double t = len2 > 0 ? std::clamp((p - a).dot(ab) / len2, 0.0, 1.0) : 0.0;
            best = std::min(best, (p - (a + ab * t)).norm());
        }
        worst = std::max(worst, best);
    }
    return worst;
}
}  // namespace

double hausdorff_distance(const PolygonalDomain& a, const PolygonalDomain& b,
                          double spacing) {
    if (a.empty() || b.empty()) throw DomainError("hausdorff_distance: empty input");
    const auto pa = a.sample_boundary(spacing);
    const auto pb = b.sample_boundary(spacing);
    return std::max(directed_hausdorff(pa, b), directed_hausdorff(pb, a));
}

bool chord_interval(const PolygonalDomain& poly, const Direction& dir, double t,
                    double& lo, double& hi) {
    lo = std::numeric_limits<double>::infinity();
    hi = -lo;
    const auto& v = poly.vertices();
    for (std::size_t i = 0; i < v.size(); ++i) {
        const Vec2& a = v[i];
        const Vec2& b = v[(i + 1) % v.size()];
        const double da = a.dot(dir.omega) - t;
        const double db = b.dot(dir.omega) - t;
        auto take = [&](const Vec2& p) {
            const double xp = p.dot(dir.eta);
            lo = std::min(lo, xp);
            hi = std::max(hi, xp);
        };
        if (std::abs(da) < 1e-14) take(a);
        if ((da > 0 && db < 0) || (da < 0 && db > 0)) take(a + (b - a) * (da / (da - db)));
    }
    return lo <= hi;
}

PolygonalDomain convex_hull_of(const std::vector<Vec2>& points) {
    if (points.size() < 3) throw DomainError("convex_hull_of: need >= 3 points");
    std::vector<Vec2> pts = points;
    std::sort(pts.begin(), pts.end(), [](const Vec2& p, const Vec2& q) {
        return p.x < q.x || (p.x == q.x && p.y < q.y);
    });
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](const Vec2& p, const Vec2& q) {
                              return (p - q).norm() < 1e-14;
                          }),
              pts.end());
    const std::size_t n = pts.size();
    std::vector<Vec2> hull(2 * n);
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) {
        while (k >= 2 && (hull[k - 1] - hull[k - 2]).cross(pts[i] - hull[k - 2]) <= 0) --k;
        hull[k++] = pts[i];
    }
    for (std::size_t i = n - 1, t = k + 1; i-- > 0;) {
        while (k >= t && (hull[k - 1] - hull[k - 2]).cross(pts[i] - hull[k - 2]) <= 0) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    return PolygonalDomain(std::move(hull));
}

}  // namespace enclosure
