#pragma once

#include "backend.hpp"
#include "mesh.hpp"
#include "quality.hpp"
#include "task_for.hpp"

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <limits>
#include <vector>

namespace taskweave {

/// Incident triangles and 1-ring neighbors of every vertex. Smoothing moves
/// vertices but never changes connectivity, so this is built once.
class VertexStars {
public:
    explicit VertexStars(const Mesh& mesh)
        : tris_(mesh.vertex_count()), neighbors_(mesh.vertex_count())
    {
        for (const Handle& h : mesh.live_triangles()) {
            const auto v = mesh.vertices(h.slot);
            for (int i = 0; i < 3; ++i) {
                const VertexId x = v[static_cast<std::size_t>(i)];
                tris_[x].push_back(h.slot);
                for (int k = 1; k < 3; ++k) {
                    const VertexId y = v[static_cast<std::size_t>((i + k) % 3)];
                    auto& ring = neighbors_[x];
                    if (std::find(ring.begin(), ring.end(), y) == ring.end())
                        ring.push_back(y);
                }
            }
        }
        for (VertexId v = 0; v < mesh.vertex_count(); ++v)
            if (!mesh.on_boundary(v) && !tris_[v].empty())
                interior_.push_back(v);
    }

    const std::vector<SlotId>& triangles(VertexId v) const noexcept { return tris_[v]; }
    const std::vector<VertexId>& neighbors(VertexId v) const noexcept { return neighbors_[v]; }
    const std::vector<VertexId>& interior() const noexcept { return interior_; }

private:
    std::vector<std::vector<SlotId>> tris_;
    std::vector<std::vector<VertexId>> neighbors_;
    std::vector<VertexId> interior_;
};

enum class SmoothOutcome { improved, rejected, aborted };

/// Laplacian move with a quality gate. Locks v and its 1-ring (all or
/// nothing); moves v to the centroid of its neighbors only if no incident
/// triangle inverts and the worst incident quality strictly improves.
inline SmoothOutcome smooth_vertex(Mesh& mesh, const VertexStars& stars, VertexId v, ThreadId tid,
                                   QualityMetric metric = QualityMetric::mean_ratio)
{
    if (mesh.on_boundary(v))
        return SmoothOutcome::rejected;
    const auto& ring = stars.neighbors(v);
    if (ring.empty())
        return SmoothOutcome::rejected;

    LockSet locks;
    std::vector<SpecLock*> wanted;
    wanted.reserve(ring.size() + 1);
    wanted.push_back(&mesh.lock(v));
    for (VertexId n : ring)
        wanted.push_back(&mesh.lock(n));
    if (!locks.acquire_all(wanted, tid))
        return SmoothOutcome::aborted;

    Point centroid{};
    for (VertexId n : ring)
        centroid = centroid + mesh.point(n);
    centroid = (1.0 / static_cast<double>(ring.size())) * centroid;

    double old_min = std::numeric_limits<double>::infinity();
    double new_min = std::numeric_limits<double>::infinity();
    bool valid = true;
    for (SlotId t : stars.triangles(v)) {
        const auto tv = mesh.vertices(t);
        std::array<Point, 3> c = mesh.corners(t);
        old_min = std::min(old_min, triangle_quality(metric, c[0], c[1], c[2]));
        c[static_cast<std::size_t>(index_of(tv, v))] = centroid;
        if (!(orient2d(c[0], c[1], c[2]) > 0.0)) {
            valid = false;
            break;
        }
        new_min = std::min(new_min, triangle_quality(metric, c[0], c[1], c[2]));
    }

    const bool accept = valid && new_min > old_min;
    if (accept)
        mesh.set_point(v, centroid);
    locks.release_all(tid);
    return accept ? SmoothOutcome::improved : SmoothOutcome::rejected;
}

struct SmoothOptions {
    Strategy strategy = Strategy::two_level;
    std::size_t grainsize = 64;
    std::size_t passes = 1;
    QualityMetric metric = QualityMetric::mean_ratio;
};

struct SmoothStats {
    std::uint64_t improved = 0;
    std::uint64_t rejected = 0;
    std::uint64_t aborts = 0;
    std::uint64_t tasks_created = 0;
    std::uint64_t tasks_executed = 0;
    /// Global minimum quality before the first pass and after each pass.
    std::vector<double> min_quality;
};

/// Runs `passes` sweeps of smooth_vertex over all interior vertices through
/// task_for. Aborted vertices are simply skipped in that sweep.
inline SmoothStats smooth_pass(Backend& backend, Mesh& mesh, const SmoothOptions& options)
{
    const VertexStars stars(mesh);
    const auto& interior = stars.interior();
    SmoothStats stats;
    stats.min_quality.push_back(summarize_quality(mesh, options.metric).min);

    std::atomic<std::uint64_t> improved{0}, rejected{0}, aborts{0};
    for (std::size_t pass = 0; pass < options.passes; ++pass) {
        const auto fs = task_for_index(backend, interior.size(), [&](std::size_t i) {
            const ThreadId tid = backend.thread_id() == external_thread ? 0 : backend.thread_id();
            switch (smooth_vertex(mesh, stars, interior[i], tid, options.metric)) {
            case SmoothOutcome::improved: improved.fetch_add(1, std::memory_order_relaxed); break;
            case SmoothOutcome::rejected: rejected.fetch_add(1, std::memory_order_relaxed); break;
            case SmoothOutcome::aborted: aborts.fetch_add(1, std::memory_order_relaxed); break;
            }
        }, {options.grainsize, options.strategy});
        stats.tasks_created += fs.tasks_created;
        stats.tasks_executed += fs.tasks_executed;
        stats.min_quality.push_back(summarize_quality(mesh, options.metric).min);
    }
    stats.improved = improved.load();
    stats.rejected = rejected.load();
    stats.aborts = aborts.load();
    return stats;
}

} // namespace taskweave
