#pragma once

#include "element_pool.hpp"
#include "geometry.hpp"
#include "spec_lock.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <bit>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace taskweave {

using VertexId = std::uint32_t;
inline constexpr VertexId no_vertex = std::numeric_limits<VertexId>::max();

/// Pool payload. Vertices are counterclockwise; nbr[i] is the triangle across
/// the edge opposite v[i], or the null handle on the domain boundary. Fields
/// are atomics because speculative walks read them without locks; every
/// write happens with all three vertex locks held.
struct Triangle {
    std::array<std::atomic<VertexId>, 3> v{};
    std::array<std::atomic<std::uint64_t>, 3> nbr{};
};

struct Vertex {
    std::atomic<double> x{0.0};
    std::atomic<double> y{0.0};
    SpecLock lock;
};

/// 2D triangulation of an axis-aligned rectangle. Triangles live in a
/// per-worker ElementPool and are referenced by generation-tagged handles.
/// Mutation is only legal while holding the vertex locks of every affected
/// triangle (or at a quiescent point).
class Mesh {
public:
    Mesh(Rect domain, int nworkers) : domain_(domain), triangles_(nworkers)
    {
        if (!(domain.width() > 0.0) || !(domain.height() > 0.0))
            throw std::invalid_argument("mesh domain must have positive area");
    }

    Mesh(Mesh&&) = default;

    const Rect& domain() const noexcept { return domain_; }
    int workers() const noexcept { return triangles_.workers(); }

    VertexId add_vertex(Point p)
    {
        const std::size_t i = vertices_.append();
        Vertex& v = vertices_[i];
        v.x.store(p.x, std::memory_order_relaxed);
        v.y.store(p.y, std::memory_order_relaxed);
        return static_cast<VertexId>(i);
    }

    std::size_t vertex_count() const noexcept { return vertices_.size(); }

    bool vertex_exists(VertexId v) const noexcept { return v < vertices_.size() && vertices_.get(v) != nullptr; }

    Point point(VertexId v) const noexcept
    {
        const Vertex& vx = vertices_[v];
        return {vx.x.load(std::memory_order_relaxed), vx.y.load(std::memory_order_relaxed)};
    }

    void set_point(VertexId v, Point p) noexcept
    {
        Vertex& vx = vertices_[v];
        vx.x.store(p.x, std::memory_order_relaxed);
        vx.y.store(p.y, std::memory_order_relaxed);
    }

    SpecLock& lock(VertexId v) const noexcept { return vertices_[v].lock; }

    bool on_boundary(VertexId v) const noexcept { return domain_.on_boundary(point(v)); }

    ElementPool<Triangle>& pool() noexcept { return triangles_; }
    const ElementPool<Triangle>& pool() const noexcept { return triangles_; }

    std::array<VertexId, 3> vertices(SlotId t) const noexcept
    {
        const Triangle& tri = triangles_[t];
        return {tri.v[0].load(std::memory_order_relaxed), tri.v[1].load(std::memory_order_relaxed), tri.v[2].load(std::memory_order_relaxed)};
    }

    std::array<Point, 3> corners(SlotId t) const noexcept
    {
        const auto v = vertices(t);
        return {point(v[0]), point(v[1]), point(v[2])};
    }

    Handle neighbor(SlotId t, int i) const noexcept
    {
        return Handle::unpack(triangles_[t].nbr[static_cast<std::size_t>(i)].load(std::memory_order_relaxed));
    }

    void set_vertices(SlotId t, VertexId a, VertexId b, VertexId c) noexcept
    {
        Triangle& tri = triangles_[t];
        tri.v[0].store(a, std::memory_order_relaxed);
        tri.v[1].store(b, std::memory_order_relaxed);
        tri.v[2].store(c, std::memory_order_relaxed);
    }

    void set_neighbor(SlotId t, int i, Handle n) noexcept
    {
        triangles_[t].nbr[static_cast<std::size_t>(i)].store(n.pack(), std::memory_order_relaxed);
    }

    bool is_live(Handle t) const noexcept { return triangles_.is_live(t); }
    std::size_t triangle_count() const noexcept { return static_cast<std::size_t>(triangles_.live_count()); }

    /// Live triangles in slot order. Quiescent use only.
    std::vector<Handle> live_triangles() const
    {
        std::vector<Handle> out;
        triangles_.for_each_live([&](Handle h, const Triangle&) { out.push_back(h); });
        return out;
    }

private:
    Rect domain_;
    ChunkedArray<Vertex> vertices_;
    ElementPool<Triangle> triangles_;
};

/// Local index (0..2) of vertex v in triangle t, or -1.
inline int index_of(const std::array<VertexId, 3>& tri, VertexId v) noexcept
{
    for (int i = 0; i < 3; ++i)
        if (tri[static_cast<std::size_t>(i)] == v)
            return i;
    return -1;
}

/// Two triangles over the rectangle's corners, split along the lo-hi diagonal.
inline Mesh init_mesh(Rect domain, int nworkers = 1)
{
    Mesh mesh(domain, nworkers);
    const VertexId v0 = mesh.add_vertex(domain.lo);
    const VertexId v1 = mesh.add_vertex({domain.hi.x, domain.lo.y});
    const VertexId v2 = mesh.add_vertex(domain.hi);
    const VertexId v3 = mesh.add_vertex({domain.lo.x, domain.hi.y});

    const Handle lower = mesh.pool().alloc(0);
    const Handle upper = mesh.pool().alloc(0);
    mesh.set_vertices(lower.slot, v0, v1, v2);
    mesh.set_vertices(upper.slot, v0, v2, v3);
    // Shared edge v0-v2 is opposite v1 in `lower` and opposite v3 in `upper`.
    for (int i = 0; i < 3; ++i) {
        mesh.set_neighbor(lower.slot, i, null_handle);
        mesh.set_neighbor(upper.slot, i, null_handle);
    }
    mesh.set_neighbor(lower.slot, 1, upper);
    mesh.set_neighbor(upper.slot, 2, lower);
    return mesh;
}

struct StructureReport {
    std::size_t vertices = 0;
    std::size_t triangles = 0;
    std::size_t edges = 0;
    std::size_t boundary_edges = 0;
    bool edge_count_ok = true;       // 2E = 3T + B
    bool adjacency_symmetric = true;
    bool all_ccw = true;
    bool references_live = true;
    std::string first_error;

    bool ok() const noexcept { return edge_count_ok && adjacency_symmetric && all_ccw && references_live; }
};

/// Full structural audit. Quiescent use only.
inline StructureReport check_structure(const Mesh& mesh)
{
    StructureReport r;
    r.vertices = mesh.vertex_count();
    auto fail = [&](bool& flag, const std::string& msg) {
        flag = false;
        if (r.first_error.empty())
            r.first_error = msg;
    };

    std::unordered_map<std::uint64_t, int> edge_uses;
    const auto tris = mesh.live_triangles();
    r.triangles = tris.size();
    for (const Handle& h : tris) {
        const auto v = mesh.vertices(h.slot);
        for (VertexId id : v)
            if (!mesh.vertex_exists(id))
                fail(r.references_live, "triangle references a missing vertex");
        const auto c = mesh.corners(h.slot);
        if (!(orient2d(c[0], c[1], c[2]) > 0.0))
            fail(r.all_ccw, "triangle " + std::to_string(h.slot) + " is not counterclockwise");
        for (int i = 0; i < 3; ++i) {
            const VertexId a = v[static_cast<std::size_t>((i + 1) % 3)];
            const VertexId b = v[static_cast<std::size_t>((i + 2) % 3)];
            const std::uint64_t key = (std::uint64_t{std::min(a, b)} << 32) | std::max(a, b);
            ++edge_uses[key];

            const Handle n = mesh.neighbor(h.slot, i);
            if (n.is_null()) {
                ++r.boundary_edges;
                continue;
            }
            if (!mesh.is_live(n)) {
                fail(r.references_live, "triangle " + std::to_string(h.slot) + " has a stale neighbor");
                continue;
            }
            // The neighbor must point back across the same edge.
            const auto nv = mesh.vertices(n.slot);
            const int ia = index_of(nv, a);
            const int ib = index_of(nv, b);
            if (ia < 0 || ib < 0) {
                fail(r.adjacency_symmetric, "neighbor does not share the edge");
                continue;
            }
            const int opposite = 3 - ia - ib;
            if (!(mesh.neighbor(n.slot, opposite) == h))
                fail(r.adjacency_symmetric, "adjacency is not symmetric");
        }
    }
    r.edges = edge_uses.size();
    for (const auto& [key, uses] : edge_uses)
        if (uses > 2)
            fail(r.adjacency_symmetric, "edge shared by more than two triangles");
    if (2 * r.edges != 3 * r.triangles + r.boundary_edges)
        fail(r.edge_count_ok, "2E != 3T + B");
    return r;
}

/// Brute-force empty-circumcircle check: counts (triangle, vertex) pairs
/// where the vertex is strictly inside the triangle's circumcircle.
inline std::size_t count_delaunay_violations(const Mesh& mesh, double eps = 1e-9)
{
    std::vector<Point> pts(mesh.vertex_count());
    for (VertexId v = 0; v < pts.size(); ++v)
        pts[v] = mesh.point(v);
    std::size_t violations = 0;
    for (const Handle& h : mesh.live_triangles()) {
        const auto v = mesh.vertices(h.slot);
        const Point a = pts[v[0]], b = pts[v[1]], c = pts[v[2]];
        for (VertexId q = 0; q < pts.size(); ++q) {
            if (q == v[0] || q == v[1] || q == v[2])
                continue;
            if (in_circle_unchecked(a, b, c, pts[q], eps))
                ++violations;
        }
    }
    return violations;
}

/// Vertices whose lock word is not free.
inline std::size_t count_locked_vertices(const Mesh& mesh)
{
    std::size_t held = 0;
    for (VertexId v = 0; v < mesh.vertex_count(); ++v)
        if (!mesh.lock(v).is_free())
            ++held;
    return held;
}

/// FNV-1a over vertex coordinates, live triangle slots, generations,
/// vertex triples and adjacency. Equal hashes before and after an operation
/// mean the operation left the mesh untouched.
inline std::uint64_t structural_hash(const Mesh& mesh)
{
    std::uint64_t h = 1469598103934665603ULL;
    auto mix = [&](std::uint64_t word) {
        for (int i = 0; i < 8; ++i) {
            h ^= (word >> (8 * i)) & 0xffu;
            h *= 1099511628211ULL;
        }
    };
    mix(mesh.vertex_count());
    for (VertexId v = 0; v < mesh.vertex_count(); ++v) {
        const Point p = mesh.point(v);
        mix(std::bit_cast<std::uint64_t>(p.x));
        mix(std::bit_cast<std::uint64_t>(p.y));
    }
    mesh.pool().for_each_live([&](Handle t, const Triangle& tri) {
        mix(t.pack());
        for (int i = 0; i < 3; ++i) {
            mix(tri.v[static_cast<std::size_t>(i)].load(std::memory_order_relaxed));
            mix(tri.nbr[static_cast<std::size_t>(i)].load(std::memory_order_relaxed));
        }
    });
    return h;
}

/// Plain-text node/element format:
///   V T B
///   id x y        (V lines)
///   id v0 v1 v2   (T lines, counterclockwise)
/// Triangles are renumbered 0..T-1 in slot order.
inline void write_mesh(std::ostream& out, const Mesh& mesh)
{
    const auto tris = mesh.live_triangles();
    std::size_t boundary = 0;
    for (const Handle& h : tris)
        for (int i = 0; i < 3; ++i)
            if (mesh.neighbor(h.slot, i).is_null())
                ++boundary;
    out << mesh.vertex_count() << ' ' << tris.size() << ' ' << boundary << '\n';
    char buf[96];
    for (VertexId v = 0; v < mesh.vertex_count(); ++v) {
        const Point p = mesh.point(v);
        std::snprintf(buf, sizeof buf, "%u %.17g %.17g\n", v, p.x, p.y);
        out << buf;
    }
    std::size_t id = 0;
    for (const Handle& h : tris) {
        const auto v = mesh.vertices(h.slot);
        out << id++ << ' ' << v[0] << ' ' << v[1] << ' ' << v[2] << '\n';
    }
}

/// Reads the format written by write_mesh. The domain is the bounding box of
/// the vertices; triangles given clockwise are reoriented. Throws
/// std::runtime_error on malformed input.
inline Mesh read_mesh(std::istream& in, int nworkers = 1)
{
    auto bad = [](const std::string& what) { return std::runtime_error("mesh format: " + what); };
    std::size_t nv = 0, nt = 0, nb = 0;
    if (!(in >> nv >> nt >> nb))
        throw bad("missing header");
    std::vector<Point> pts(nv);
    for (std::size_t i = 0; i < nv; ++i) {
        std::size_t id;
        if (!(in >> id >> pts[i].x >> pts[i].y))
            throw bad("truncated vertex list");
        if (id != i)
            throw bad("vertex ids must be 0..V-1 in order");
    }
    if (nv < 3)
        throw bad("need at least three vertices");
    Rect box{pts[0], pts[0]};
    for (const Point& p : pts) {
        box.lo = {std::min(box.lo.x, p.x), std::min(box.lo.y, p.y)};
        box.hi = {std::max(box.hi.x, p.x), std::max(box.hi.y, p.y)};
    }
    Mesh mesh(box, nworkers);
    for (const Point& p : pts)
        mesh.add_vertex(p);

    std::vector<Handle> handles;
    handles.reserve(nt);
    std::map<std::pair<VertexId, VertexId>, std::pair<Handle, int>> open_edges;
    for (std::size_t i = 0; i < nt; ++i) {
        std::size_t id;
        std::array<VertexId, 3> v{};
        if (!(in >> id >> v[0] >> v[1] >> v[2]))
            throw bad("truncated triangle list");
        for (VertexId x : v)
            if (x >= nv)
                throw bad("triangle references unknown vertex");
        const double o = orient2d(pts[v[0]], pts[v[1]], pts[v[2]]);
        if (o == 0.0)
            throw bad("degenerate triangle");
        if (o < 0.0)
            std::swap(v[1], v[2]);
        const Handle h = mesh.pool().alloc(0);
        mesh.set_vertices(h.slot, v[0], v[1], v[2]);
        for (int k = 0; k < 3; ++k)
            mesh.set_neighbor(h.slot, k, null_handle);
        for (int k = 0; k < 3; ++k) {
            const VertexId a = v[static_cast<std::size_t>((k + 1) % 3)];
            const VertexId b = v[static_cast<std::size_t>((k + 2) % 3)];
            const auto twin = open_edges.find({b, a});
            if (twin != open_edges.end()) {
                const auto [other, ok] = twin->second;
                mesh.set_neighbor(h.slot, k, other);
                mesh.set_neighbor(other.slot, ok, h);
                open_edges.erase(twin);
            } else if (!open_edges.emplace(std::pair{a, b}, std::pair{h, k}).second) {
                throw bad("edge used twice with the same orientation");
            }
        }
        handles.push_back(h);
    }
    if (open_edges.size() != nb)
        throw bad("boundary edge count does not match header");
    return mesh;
}

} // namespace taskweave
