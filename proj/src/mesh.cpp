#include "enclosure/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>

#include "vendor_json.hpp"

namespace enclosure {

std::array<Vec2, 3> Mesh::hat_gradients(std::size_t t) const {
    const Vec2& a = nodes[triangles[t][0]];
    const Vec2& b = nodes[triangles[t][1]];
    const Vec2& c = nodes[triangles[t][2]];
    const double inv2A = 1.0 / ((b - a).cross(c - a));
    return {Vec2{(b.y - c.y) * inv2A, (c.x - b.x) * inv2A},
            Vec2{(c.y - a.y) * inv2A, (a.x - c.x) * inv2A},
            Vec2{(a.y - b.y) * inv2A, (b.x - a.x) * inv2A}};
}

void Mesh::validate() const {
    std::map<std::pair<int, int>, int> edge_count;
    for (std::size_t t = 0; t < triangles.size(); ++t) {
        if (tri_area(t) <= 0.0) throw MeshError("inverted or degenerate element");
        for (int e = 0; e < 3; ++e) {
            int u = triangles[t][e], v = triangles[t][(e + 1) % 3];
            edge_count[{std::min(u, v), std::max(u, v)}]++;
        }
    }
    for (const auto& [edge, cnt] : edge_count)
        if (cnt > 2) throw MeshError("non-conforming edge");
}

namespace {

struct NodeBank {
    std::unordered_map<uint64_t, int> lookup;
    std::vector<Vec2>* nodes;
    double q;  // quantization step

    uint64_t key(const Vec2& p) const {
        const int64_t ix = llround(p.x / q);
        const int64_t iy = llround(p.y / q);
        return (static_cast<uint64_t>(static_cast<uint32_t>(ix)) << 32) |
               static_cast<uint64_t>(static_cast<uint32_t>(iy));
    }
    int get(const Vec2& p) {
        const uint64_t k = key(p);
        auto it = lookup.find(k);
        if (it != lookup.end()) return it->second;
        const int id = static_cast<int>(nodes->size());
        nodes->push_back(p);
        lookup.emplace(k, id);
        return id;
    }
};

void extract_boundary(Mesh& m) {
    std::map<std::pair<int, int>, int> directed;
    for (const auto& tri : m.triangles)
        for (int e = 0; e < 3; ++e) directed[{tri[e], tri[(e + 1) % 3]}]++;

    std::unordered_map<int, int> next;
    for (const auto& [edge, cnt] : directed) {
        if (directed.find({edge.second, edge.first}) == directed.end()) {
            if (next.count(edge.first)) throw MeshError("branching boundary");
            next[edge.first] = edge.second;
        }
    }
    if (next.empty()) throw MeshError("no boundary found");
    m.boundary_loop.clear();
    m.node_on_boundary.assign(m.nodes.size(), 0);
    int start = next.begin()->first;
    int cur = start;
    do {
        m.boundary_loop.push_back(cur);
        m.node_on_boundary[cur] = 1;
        auto it = next.find(cur);
        if (it == next.end()) throw MeshError("open boundary loop");
        cur = it->second;
        if (m.boundary_loop.size() > m.nodes.size()) throw MeshError("boundary walk stuck");
    } while (cur != start);
    if (m.boundary_loop.size() != next.size())
        throw MeshError("boundary has more than one loop");
}

void compute_h(Mesh& m) {
    double h = 0.0;
    for (const auto& tri : m.triangles)
        for (int e = 0; e < 3; ++e)
            h = std::max(h, (m.nodes[tri[e]] - m.nodes[tri[(e + 1) % 3]]).norm());
    m.h_mesh = h;
}

}  // namespace

Mesh generate_mesh(const PolygonalDomain& domain, const PolygonalDomain* inclusion,
                   const MeshOptions& opts) {
    if (domain.empty()) throw MeshError("generate_mesh: empty domain");
    if (!domain.is_convex(1e-9))
        throw MeshError("generate_mesh: only convex domains are supported");

    Vec2 lo, hi;
    domain.bounding_box(lo, hi);
    const double h = opts.h;
    const int nx = std::max(1, static_cast<int>(std::ceil((hi.x - lo.x) / h - 1e-9)));
    const int ny = std::max(1, static_cast<int>(std::ceil((hi.y - lo.y) / h - 1e-9)));
    const double dx = (hi.x - lo.x) / nx;
    const double dy = (hi.y - lo.y) / ny;

    Mesh m;
    NodeBank bank{{}, &m.nodes, 1e-9 * std::max({1.0, hi.x - lo.x, hi.y - lo.y})};

    auto corner = [&](int i, int j) { return Vec2{lo.x + i * dx, lo.y + j * dy}; };
    const double area_floor = 1e-12 * dx * dy;

    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const std::array<Vec2, 4> cell = {corner(i, j), corner(i + 1, j),
                                              corner(i + 1, j + 1), corner(i, j + 1)};
            int n_in = 0;
            for (const Vec2& p : cell) n_in += domain.contains(p) ? 1 : 0;
            std::vector<std::array<Vec2, 3>> tris;
            if (n_in == 4) {
                // Alternate the diagonal for a symmetric union-jack-free pattern.
                if ((i + j) % 2 == 0) {
                    tris.push_back({cell[0], cell[1], cell[2]});
                    tris.push_back({cell[0], cell[2], cell[3]});
                } else {
                    tris.push_back({cell[0], cell[1], cell[3]});
                    tris.push_back({cell[1], cell[2], cell[3]});
                }
            } else {
                PolygonalDomain clipped(
                    std::vector<Vec2>(cell.begin(), cell.end()));
                bool alive = true;
                const auto& dv = domain.vertices();
                for (std::size_t e = 0; e < dv.size() && alive; ++e) {
                    const Vec2& a = dv[e];
                    const Vec2& b = dv[(e + 1) % dv.size()];
                    const Vec2 edge = b - a;
                    // Inward normal of a CCW polygon edge.
                    const Vec2 n{-edge.y, edge.x};
                    clipped = clipped.clip_halfplane(n, n.dot(a));
                    alive = !clipped.empty();
                }
                if (!alive) continue;
                const auto& cv = clipped.vertices();
                for (std::size_t v = 1; v + 1 < cv.size(); ++v)
                    tris.push_back({cv[0], cv[v], cv[v + 1]});
            }
            for (const auto& tv : tris) {
                const double a2 = 0.5 * (tv[1] - tv[0]).cross(tv[2] - tv[0]);
                if (a2 <= area_floor) continue;
                m.triangles.push_back(
                    {bank.get(tv[0]), bank.get(tv[1]), bank.get(tv[2])});
            }
        }
    }
    if (m.triangles.empty()) throw MeshError("generate_mesh: produced no elements");

    extract_boundary(m);

    if (inclusion && opts.fit_inclusion && !inclusion->empty()) {
        // Snap interior nodes near the interface onto it, then revert any
        // snap that degenerates an adjacent element.
        const double snap_tol = opts.snap_tol_factor * std::min(dx, dy);
        std::vector<Vec2> original = m.nodes;
        std::vector<int> snapped;
        for (std::size_t n = 0; n < m.nodes.size(); ++n) {
            if (m.node_on_boundary[n]) continue;
            const Vec2 p = m.nodes[n];
            const Vec2 cb = inclusion->closest_boundary_point(p);
            if ((p - cb).norm() <= snap_tol) {
                m.nodes[n] = cb;
                snapped.push_back(static_cast<int>(n));
            }
        }
        std::vector<std::vector<int>> node_tris(m.nodes.size());
        for (std::size_t t = 0; t < m.triangles.size(); ++t)
            for (int e = 0; e < 3; ++e) node_tris[m.triangles[t][e]].push_back((int)t);
        const double min_area = 0.05 * 0.5 * dx * dy;
        for (int pass = 0; pass < 4; ++pass) {
            bool reverted = false;
            for (int n : snapped) {
                if ((m.nodes[n] - original[n]).norm() == 0.0) continue;
                for (int t : node_tris[n]) {
                    if (m.tri_area(t) < min_area) {
                        m.nodes[n] = original[n];
                        reverted = true;
                        break;
                    }
                }
            }
            if (!reverted) break;
        }
    }

    m.tri_in_inclusion.assign(m.triangles.size(), 0);
    if (inclusion && !inclusion->empty()) {
        for (std::size_t t = 0; t < m.triangles.size(); ++t)
            m.tri_in_inclusion[t] = inclusion->contains(m.tri_centroid(t)) ? 1 : 0;
    }

    compute_h(m);
    m.validate();
    return m;
}

Mesh refine_mesh(const Mesh& coarse) {
    Mesh fine;
    fine.nodes = coarse.nodes;
    std::map<std::pair<int, int>, int> midpoint;
    auto mid = [&](int u, int v) {
        auto key = std::make_pair(std::min(u, v), std::max(u, v));
        auto it = midpoint.find(key);
        if (it != midpoint.end()) return it->second;
        const int id = static_cast<int>(fine.nodes.size());
        fine.nodes.push_back((coarse.nodes[u] + coarse.nodes[v]) / 2.0);
        midpoint.emplace(key, id);
        return id;
    };
    for (std::size_t t = 0; t < coarse.triangles.size(); ++t) {
        const auto& tri = coarse.triangles[t];
        const int ab = mid(tri[0], tri[1]);
        const int bc = mid(tri[1], tri[2]);
        const int ca = mid(tri[2], tri[0]);
        const uint8_t flag = coarse.tri_in_inclusion.empty() ? 0 : coarse.tri_in_inclusion[t];
        fine.triangles.push_back({tri[0], ab, ca});
        fine.triangles.push_back({ab, tri[1], bc});
        fine.triangles.push_back({ca, bc, tri[2]});
        fine.triangles.push_back({ab, bc, ca});
        for (int c = 0; c < 4; ++c) fine.tri_in_inclusion.push_back(flag);
    }
    extract_boundary(fine);
    compute_h(fine);
    fine.validate();
    return fine;
}

std::string mesh_to_json(const Mesh& m) {
    nlohmann::json j;
    auto& nodes = j["nodes"];
    for (const Vec2& p : m.nodes) nodes.push_back({p.x, p.y});
    auto& tris = j["triangles"];
    for (const auto& t : m.triangles) tris.push_back({t[0], t[1], t[2]});
    j["boundary_loop"] = m.boundary_loop;
    j["in_inclusion"] = m.tri_in_inclusion;
    j["h_mesh"] = m.h_mesh;
    return j.dump();
}

Mesh mesh_from_json(const std::string& text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    Mesh m;
    for (const auto& p : j.at("nodes")) m.nodes.push_back({p.at(0), p.at(1)});
    for (const auto& t : j.at("triangles"))
        m.triangles.push_back({t.at(0).get<int>(), t.at(1).get<int>(), t.at(2).get<int>()});
    m.boundary_loop = j.at("boundary_loop").get<std::vector<int>>();
    m.tri_in_inclusion = j.at("in_inclusion").get<std::vector<uint8_t>>();
    m.h_mesh = j.at("h_mesh").get<double>();
    m.node_on_boundary.assign(m.nodes.size(), 0);
    for (int n : m.boundary_loop) m.node_on_boundary[n] = 1;
    m.validate();
    return m;
}

}  // namespace enclosure
