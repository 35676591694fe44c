#ifndef POLYQ_MESH_HPP
#define POLYQ_MESH_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <memory>
#include <unordered_map>
#include <vector>

#include "polyq/common.hpp"
#include "polyq/errors.hpp"
#include "polyq/polygon.hpp"

namespace polyq {

struct MeshQuality {
    double min_angle = 0.0;  // radians
    double max_angle = 0.0;
    double h = 0.0;
    std::size_t n_nodes = 0;
    std::size_t n_tri = 0;
};

// Conforming triangulation of a simple polygon. Triangles are ccw index
// triples; boundary nodes are exactly the nodes on the polygon boundary.
struct TriangleMesh {
    std::vector<Vec2> nodes;
    std::vector<std::array<int, 3>> triangles;
    std::vector<int> boundary_nodes;  // ascending
    std::vector<char> node_on_boundary;
    double h = 0.0;  // max edge length
    int level = 0;   // refinement generation
    std::shared_ptr<const RationalPolygon> polygon;

    double triangle_area(std::size_t t) const {
        const auto& tri = triangles[t];
        return 0.5 * cross(nodes[tri[1]] - nodes[tri[0]], nodes[tri[2]] - nodes[tri[0]]);
    }

    double total_area() const {
        double area = 0.0;
        for (std::size_t t = 0; t < triangles.size(); ++t) area += triangle_area(t);
        return area;
    }

    std::size_t interior_count() const { return nodes.size() - boundary_nodes.size(); }
};

namespace meshdetail {

inline std::uint64_t edge_key(int a, int b) {
    const std::uint64_t lo = static_cast<std::uint32_t>(std::min(a, b));
    const std::uint64_t hi = static_cast<std::uint32_t>(std::max(a, b));
    return (hi << 32) | lo;
}

// edge -> up to two adjacent triangle indices
using EdgeMap = std::unordered_map<std::uint64_t, std::array<int, 2>>;

inline void add_edge(EdgeMap& edges, int a, int b, int tri) {
    auto [it, fresh] = edges.try_emplace(edge_key(a, b), std::array<int, 2>{tri, -1});
    if (!fresh) {
        if (it->second[1] != -1) throw DegenerateInput("edge shared by more than 2 triangles");
        it->second[1] = tri;
    }
}

inline void remove_edge(EdgeMap& edges, int a, int b, int tri) {
    auto it = edges.find(edge_key(a, b));
    if (it == edges.end()) return;
    if (it->second[0] == tri) it->second[0] = it->second[1];
    else if (it->second[1] != tri) return;
    it->second[1] = -1;
    if (it->second[0] == -1) edges.erase(it);
}

inline int neighbor_across(const EdgeMap& edges, int a, int b, int tri) {
    auto it = edges.find(edge_key(a, b));
    if (it == edges.end()) return -1;
    if (it->second[0] == tri) return it->second[1];
    return it->second[0];
}

struct Builder {
    std::vector<Vec2> nodes;
    std::vector<std::array<int, 3>> triangles;
    EdgeMap edges;
    std::size_t bisections = 0;

    double edge_len(int a, int b) const { return distance(nodes[a], nodes[b]); }

    // Longest edge of a triangle as a local index (edge i is opposite vertex i,
    // i.e. connects vertices i+1 and i+2). Ties break toward the smallest node
    // pair so that neighbors agree on shared-edge choices.
    int longest_edge(int t) const {
        const auto& tri = triangles[static_cast<std::size_t>(t)];
        int best = 0;
        double best_len = -1.0;
        std::uint64_t best_key = 0;
        for (int e = 0; e < 3; ++e) {
            const int a = tri[(e + 1) % 3];
            const int b = tri[(e + 2) % 3];
            const double len = edge_len(a, b);
            const std::uint64_t key = edge_key(a, b);
            if (len > best_len + 1e-15 ||
                (std::abs(len - best_len) <= 1e-15 && key < best_key)) {
                best = e;
                best_len = len;
                best_key = key;
            }
        }
        return best;
    }

    double longest_edge_len(int t) const {
        const auto& tri = triangles[static_cast<std::size_t>(t)];
        const int e = longest_edge(t);
        return edge_len(tri[(e + 1) % 3], tri[(e + 2) % 3]);
    }

    void register_triangle(int t) {
        const auto& tri = triangles[static_cast<std::size_t>(t)];
        add_edge(edges, tri[0], tri[1], t);
        add_edge(edges, tri[1], tri[2], t);
        add_edge(edges, tri[2], tri[0], t);
    }

    void unregister_triangle(int t) {
        const auto& tri = triangles[static_cast<std::size_t>(t)];
        remove_edge(edges, tri[0], tri[1], t);
        remove_edge(edges, tri[1], tri[2], t);
        remove_edge(edges, tri[2], tri[0], t);
    }

    // Midpoint node of edge (a, b); reused if an earlier split created it.
    int midpoint_node(int a, int b) {
        auto it = midpoints.find(edge_key(a, b));
        if (it != midpoints.end()) return it->second;
        const Vec2 m = (nodes[a] + nodes[b]) * 0.5;
        nodes.push_back(m);
        const int id = static_cast<int>(nodes.size()) - 1;
        midpoints.emplace(edge_key(a, b), id);
        return id;
    }

    // Split triangle t by the edge (a, b) at node m; apex c stays.
    void split(int t, int a, int b, int c, int m) {
        unregister_triangle(t);
        triangles[static_cast<std::size_t>(t)] = {a, m, c};
        register_triangle(t);
        triangles.push_back({m, b, c});
        register_triangle(static_cast<int>(triangles.size()) - 1);
        ++bisections;
    }

    // Rivara longest-edge bisection: recurse into the neighbor until the
    // shared edge is also its longest, then split the compatible pair.
    void bisect_by_longest(int t, int depth = 0) {
        if (depth > 200) throw DegenerateInput("longest-edge propagation chain too deep");
        const auto tri = triangles[static_cast<std::size_t>(t)];
        const int e = longest_edge(t);
        const int a = tri[(e + 1) % 3];
        const int b = tri[(e + 2) % 3];
        const int c = tri[e];
        int nb = neighbor_across(edges, a, b, t);
        while (nb >= 0 && longest_edge_key(nb) != edge_key(a, b)) {
            bisect_by_longest(nb, depth + 1);
            nb = neighbor_across(edges, a, b, t);
        }
        const int m = midpoint_node(a, b);
        if (nb >= 0) {
            const auto ntri = triangles[static_cast<std::size_t>(nb)];
            int nc = -1;
            for (int v : ntri) {
                if (v != a && v != b) nc = v;
            }
            // Orientation: in the neighbor the shared edge runs b -> a.
            split(nb, b, a, nc, m);
        }
        split(t, a, b, c, m);
    }

    std::uint64_t longest_edge_key(int t) const {
        const auto& tri = triangles[static_cast<std::size_t>(t)];
        const int e = longest_edge(t);
        return edge_key(tri[(e + 1) % 3], tri[(e + 2) % 3]);
    }

    std::unordered_map<std::uint64_t, int> midpoints;
};

inline double triangle_min_angle(const Vec2& a, const Vec2& b, const Vec2& c) {
    auto angle_at = [](const Vec2& v, const Vec2& p, const Vec2& q) {
        const Vec2 u = p - v, w = q - v;
        return std::atan2(std::abs(cross(u, w)), dot(u, w));
    };
    return std::min({angle_at(a, b, c), angle_at(b, c, a), angle_at(c, a, b)});
}

}  // namespace meshdetail

// Ear clipping of the polygon ring. Returns triangles over the polygon's own
// vertex indices.
inline std::vector<std::array<int, 3>> ear_clip(const RationalPolygon& poly) {
    const auto& pts = poly.vertices();
    std::vector<int> ring(pts.size());
    for (std::size_t i = 0; i < ring.size(); ++i) ring[i] = static_cast<int>(i);

    std::vector<std::array<int, 3>> out;
    while (ring.size() > 3) {
        bool clipped = false;
        for (std::size_t i = 0; i < ring.size(); ++i) {
            const int ia = ring[(i + ring.size() - 1) % ring.size()];
            const int ib = ring[i];
            const int ic = ring[(i + 1) % ring.size()];
            const Vec2& a = pts[ia];
            const Vec2& b = pts[ib];
            const Vec2& c = pts[ic];
            if (detail::orient(a, b, c) <= 1e-14) continue;  // reflex or flat corner
            bool blocked = false;
            for (int other : ring) {
                if (other == ia || other == ib || other == ic) continue;
                const Vec2& p = pts[other];
                const double w0 = detail::orient(a, b, p);
                const double w1 = detail::orient(b, c, p);
                const double w2 = detail::orient(c, a, p);
                if (w0 >= -1e-14 && w1 >= -1e-14 && w2 >= -1e-14) {
                    blocked = true;
                    break;
                }
            }
            if (blocked) continue;
            out.push_back({ia, ib, ic});
            ring.erase(ring.begin() + static_cast<std::ptrdiff_t>(i));
            clipped = true;
            break;
        }
        if (!clipped) throw DegenerateInput("ear clipping found no ear (collinear input?)");
    }
    out.push_back({ring[0], ring[1], ring[2]});
    return out;
}

namespace meshdetail {

inline void finalize(TriangleMesh& mesh) {
    EdgeMap edges;
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
        if (mesh.triangle_area(t) <= 0.0) throw DegenerateInput("non-positive triangle area");
        const auto& tri = mesh.triangles[t];
        add_edge(edges, tri[0], tri[1], static_cast<int>(t));
        add_edge(edges, tri[1], tri[2], static_cast<int>(t));
        add_edge(edges, tri[2], tri[0], static_cast<int>(t));
    }
    mesh.node_on_boundary.assign(mesh.nodes.size(), 0);
    double h = 0.0;
    for (const auto& [key, tris] : edges) {
        const int a = static_cast<int>(key & 0xffffffffu);
        const int b = static_cast<int>(key >> 32);
        h = std::max(h, distance(mesh.nodes[a], mesh.nodes[b]));
        if (tris[1] == -1) {
            mesh.node_on_boundary[static_cast<std::size_t>(a)] = 1;
            mesh.node_on_boundary[static_cast<std::size_t>(b)] = 1;
        }
    }
    mesh.h = h;
    mesh.boundary_nodes.clear();
    for (std::size_t i = 0; i < mesh.nodes.size(); ++i) {
        if (mesh.node_on_boundary[i]) mesh.boundary_nodes.push_back(static_cast<int>(i));
    }
}

// Lawson-style min-angle flips; only flips that keep the mesh inside the
// target edge length are allowed, so triangulate()'s h guarantee survives.
inline void improve_by_flips(Builder& builder, double h_target) {
    for (int pass = 0; pass < 50; ++pass) {
        bool changed = false;
        for (std::size_t t1 = 0; t1 < builder.triangles.size(); ++t1) {
            for (int e = 0; e < 3; ++e) {
                const auto tri1 = builder.triangles[t1];
                const int a = tri1[(e + 1) % 3];
                const int b = tri1[(e + 2) % 3];
                const int c1 = tri1[e];
                const int t2 = neighbor_across(builder.edges, a, b, static_cast<int>(t1));
                if (t2 < 0 || static_cast<std::size_t>(t2) <= t1) continue;
                const auto tri2 = builder.triangles[static_cast<std::size_t>(t2)];
                int c2 = -1;
                for (int v : tri2) {
                    if (v != a && v != b) c2 = v;
                }
                const Vec2& pa = builder.nodes[a];
                const Vec2& pb = builder.nodes[b];
                const Vec2& p1 = builder.nodes[c1];
                const Vec2& p2 = builder.nodes[c2];
                // Strictly convex quad: the diagonals must properly cross.
                if (detail::orient(p1, p2, pa) * detail::orient(p1, p2, pb) >= 0) continue;
                if (distance(p1, p2) > h_target) continue;
                const double before = std::min(triangle_min_angle(pa, pb, p1),
                                               triangle_min_angle(pb, pa, p2));
                const double after = std::min(triangle_min_angle(pa, p2, p1),
                                              triangle_min_angle(pb, p1, p2));
                if (after <= before + 1e-12) continue;
                builder.unregister_triangle(static_cast<int>(t1));
                builder.unregister_triangle(t2);
                builder.triangles[t1] = {a, c2, c1};
                builder.triangles[static_cast<std::size_t>(t2)] = {b, c1, c2};
                builder.register_triangle(static_cast<int>(t1));
                builder.register_triangle(t2);
                changed = true;
            }
        }
        if (!changed) break;
    }
}

}  // namespace meshdetail

// Ear clipping followed by longest-edge bisection until max edge <= h_target,
// then a min-angle flip pass. Polygon vertices (reflex corners included)
// always become mesh nodes.
inline TriangleMesh triangulate(const RationalPolygon& poly, double h_target) {
    // h_target >= diameter simply yields the unrefined ear-clip triangulation.
    if (!(h_target > 0.0)) throw Error("triangulate: h_target must be positive");

    meshdetail::Builder builder;
    builder.nodes = poly.vertices();
    builder.triangles = ear_clip(poly);
    for (std::size_t t = 0; t < builder.triangles.size(); ++t)
        builder.register_triangle(static_cast<int>(t));

    const std::size_t expected =
        static_cast<std::size_t>(8.0 * poly.area() / (h_target * h_target) + 64.0);
    for (int pass = 0; pass < 200; ++pass) {
        bool found = false;
        for (std::size_t t = 0; t < builder.triangles.size(); ++t) {
            if (builder.longest_edge_len(static_cast<int>(t)) > h_target) {
                builder.bisect_by_longest(static_cast<int>(t));
                found = true;
            }
            if (builder.bisections > 64 * expected)
                throw DegenerateInput("bisection did not converge");
        }
        if (!found) break;
    }

    meshdetail::improve_by_flips(builder, h_target);

    TriangleMesh mesh;
    mesh.nodes = std::move(builder.nodes);
    mesh.triangles = std::move(builder.triangles);
    mesh.level = 0;
    mesh.polygon = std::make_shared<RationalPolygon>(poly);
    meshdetail::finalize(mesh);
    return mesh;
}

// Red (midpoint) refinement: every triangle splits into 4; nodes nest.
inline TriangleMesh refine(const TriangleMesh& mesh) {
    TriangleMesh out;
    out.nodes = mesh.nodes;
    out.level = mesh.level + 1;
    out.polygon = mesh.polygon;

    std::unordered_map<std::uint64_t, int> midpoints;
    auto midpoint = [&](int a, int b) {
        const auto key = meshdetail::edge_key(a, b);
        auto it = midpoints.find(key);
        if (it != midpoints.end()) return it->second;
        out.nodes.push_back((out.nodes[a] + out.nodes[b]) * 0.5);
        const int id = static_cast<int>(out.nodes.size()) - 1;
        midpoints.emplace(key, id);
        return id;
    };

    out.triangles.reserve(mesh.triangles.size() * 4);
    for (const auto& tri : mesh.triangles) {
        const int m01 = midpoint(tri[0], tri[1]);
        const int m12 = midpoint(tri[1], tri[2]);
        const int m20 = midpoint(tri[2], tri[0]);
        out.triangles.push_back({tri[0], m01, m20});
        out.triangles.push_back({m01, tri[1], m12});
        out.triangles.push_back({m20, m12, tri[2]});
        out.triangles.push_back({m01, m12, m20});
    }
    meshdetail::finalize(out);
    return out;
}

inline MeshQuality mesh_quality(const TriangleMesh& mesh) {
    MeshQuality q;
    q.h = mesh.h;
    q.n_nodes = mesh.nodes.size();
    q.n_tri = mesh.triangles.size();
    q.min_angle = kPi;
    q.max_angle = 0.0;
    for (const auto& tri : mesh.triangles) {
        for (int v = 0; v < 3; ++v) {
            const Vec2& p = mesh.nodes[tri[v]];
            const Vec2 u = mesh.nodes[tri[(v + 1) % 3]] - p;
            const Vec2 w = mesh.nodes[tri[(v + 2) % 3]] - p;
            const double angle = std::atan2(std::abs(cross(u, w)), dot(u, w));
            q.min_angle = std::min(q.min_angle, angle);
            q.max_angle = std::max(q.max_angle, angle);
        }
    }
    return q;
}

}  // namespace polyq

#endif  // POLYQ_MESH_HPP
