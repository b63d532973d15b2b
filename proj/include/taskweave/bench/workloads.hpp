#pragma once

#include "../backend.hpp"
#include "../delaunay.hpp"
#include "../mesh.hpp"
#include "../quality.hpp"
#include "../smoothing.hpp"
#include "record.hpp"
#include "synthetic.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>

namespace taskweave::bench {

struct MeshWorkloadConfig {
    std::uint64_t seed = 1;
    /// Random interior points inserted into the unit square before refinement.
    std::size_t initial_points = 16;
    RefineCriteria criteria{1e-3, 0.0};
    RefineOptions refine{};
    SmoothOptions smooth{Strategy::two_level, 64, 5, QualityMetric::mean_ratio};
    /// Replaces the unit square when set. Must return a fresh copy each call.
    std::function<Mesh(int nworkers)> input;
};

inline Mesh build_input(const MeshWorkloadConfig& cfg, int nworkers)
{
    if (cfg.input)
        return cfg.input(nworkers);
    Mesh mesh = init_mesh(Rect{{0.0, 0.0}, {1.0, 1.0}}, nworkers);
    insert_random_points(mesh, cfg.initial_points, cfg.seed);
    return mesh;
}

struct MeshRun {
    Mesh mesh;
    BenchRecord record;
    std::optional<RefineStats> refine;
    std::optional<SmoothStats> smooth;
};

inline void fill_quality(BenchRecord& r, const Mesh& mesh)
{
    const auto q = summarize_quality(mesh, QualityMetric::mean_ratio);
    r.min_quality = q.min;
    r.mean_quality = q.mean;
}

/// Refinement of the configured input on `backend`; `grainsize` in the
/// record is the schedule_limit.
inline MeshRun run_delaunay(Backend& backend, const MeshWorkloadConfig& cfg)
{
    Mesh mesh = build_input(cfg, backend.num_threads());
    RefineOptions opts = cfg.refine;
    opts.seed = cfg.seed;
    const std::uint64_t steals_before = backend.steal_attempts();
    const auto t0 = Clock::now();
    const RefineStats st = run_refinement(backend, mesh, cfg.criteria, opts);
    BenchRecord r;
    r.wall_time_ns = elapsed_ns(t0);
    r.workload = "delaunay";
    r.backend = std::string(to_string(backend.kind()));
    r.strategy = "flat";
    r.threads = backend.num_threads();
    r.grainsize = opts.schedule_limit;
    r.tasks_created = st.tasks_created();
    r.tasks_executed = st.tasks_executed;
    r.aborts = st.aborts;
    r.retries = st.retries;
    r.steal_attempts = backend.steal_attempts() - steals_before;
    fill_quality(r, mesh);
    return {std::move(mesh), r, st, std::nullopt};
}

/// Serial refinement of the input followed by timed smoothing passes on
/// `backend`. The refined input is identical for every backend.
inline MeshRun run_smoothing(Backend& backend, const MeshWorkloadConfig& cfg)
{
    Mesh mesh = build_input(cfg, backend.num_threads());
    SequentialBackend serial;
    RefineOptions opts = cfg.refine;
    opts.seed = cfg.seed;
    run_refinement(serial, mesh, cfg.criteria, opts);

    const std::uint64_t steals_before = backend.steal_attempts();
    const auto t0 = Clock::now();
    const SmoothStats st = smooth_pass(backend, mesh, cfg.smooth);
    BenchRecord r;
    r.wall_time_ns = elapsed_ns(t0);
    r.workload = "smoothing";
    r.backend = std::string(to_string(backend.kind()));
    r.strategy = std::string(to_string(cfg.smooth.strategy));
    r.threads = backend.num_threads();
    r.grainsize = cfg.smooth.grainsize;
    r.tasks_created = st.tasks_created;
    r.tasks_executed = st.tasks_executed;
    r.aborts = st.aborts;
    r.steal_attempts = backend.steal_attempts() - steals_before;
    fill_quality(r, mesh);
    return {std::move(mesh), r, std::nullopt, st};
}

} // namespace taskweave::bench
