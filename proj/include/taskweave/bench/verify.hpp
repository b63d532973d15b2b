#pragma once

#include "../backend.hpp"
#include "../mesh.hpp"
#include "../quality.hpp"
#include "workloads.hpp"

#include <algorithm>
#include <atomic>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

namespace taskweave::bench {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct VerifyReport {
    std::vector<CheckResult> checks;

    bool ok() const noexcept
    {
        return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
    }

    void add(std::string name, bool passed, std::string detail = {})
    {
        checks.push_back({std::move(name), passed, std::move(detail)});
    }

    void print(std::ostream& out) const
    {
        for (const auto& c : checks) {
            out << (c.passed ? "PASS " : "FAIL ") << c.name;
            if (!c.detail.empty())
                out << "  (" << c.detail << ')';
            out << '\n';
        }
    }
};

inline constexpr std::size_t stability_bins = 100;
inline constexpr double stability_max_emd = 0.02;
inline constexpr double oracle_eps = 1e-9;

inline void check_mesh(VerifyReport& report, const Mesh& mesh, const RefineCriteria* criteria)
{
    const auto s = check_structure(mesh);
    report.add("structure", s.ok(),
               "V=" + std::to_string(s.vertices) + " T=" + std::to_string(s.triangles) + " E=" + std::to_string(s.edges) +
                   " B=" + std::to_string(s.boundary_edges) + (s.first_error.empty() ? "" : " " + s.first_error));
    const auto held = count_locked_vertices(mesh);
    report.add("lock_residue", held == 0, std::to_string(held) + " vertex locks still held");
    const auto live = mesh.pool().live_count();
    report.add("pool_conservation", live == s.triangles && mesh.pool().allocs() - mesh.pool().frees() == live,
               "allocs-frees=" + std::to_string(live));
    if (criteria) {
        const auto violations = count_delaunay_violations(mesh, oracle_eps);
        report.add("delaunay_oracle", violations == 0, std::to_string(violations) + " empty-circle violations");
        std::size_t bad = 0;
        for (const Handle& h : mesh.live_triangles())
            if (is_bad(mesh, h, *criteria))
                ++bad;
        report.add("no_bad_triangles", bad == 0, std::to_string(bad) + " bad triangles");
    }
}

inline void check_exactly_once(VerifyReport& report, Backend& backend, std::uint64_t seed)
{
    constexpr std::size_t n = 100000;
    const SpinLoop spin(1.0);
    bool ok = true;
    std::string detail;
    for (Strategy s : {Strategy::flat, Strategy::two_level, Strategy::hierarchical}) {
        std::vector<std::atomic<std::uint32_t>> tally(n);
        const std::size_t grain = 1 + seed % 13;
        const auto rec = run_synthetic(backend, {n, 0, grain, s}, spin, tally);
        const bool all_ones = std::all_of(tally.begin(), tally.end(), [](const auto& t) { return t.load() == 1; });
        const bool counts = backend.sequential() || rec.tasks_created == expected_task_count(s, n, grain, backend.num_threads());
        if (!all_ones || !counts || rec.tasks_created != rec.tasks_executed) {
            ok = false;
            detail += std::string(to_string(s)) + " ";
        }
    }
    report.add("exactly_once", ok, ok ? "all strategies" : "failed: " + detail);
}

inline double stability_emd(const Mesh& a, const Mesh& b)
{
    return earth_movers_distance(quality_histogram(a, QualityMetric::mean_ratio, stability_bins),
                                 quality_histogram(b, QualityMetric::mean_ratio, stability_bins));
}

/// Parallel refinement checked against the brute-force oracles and against
/// a serial run of the same input.
inline VerifyReport verify_delaunay(Backend& backend, const MeshWorkloadConfig& cfg)
{
    VerifyReport report;
    const MeshRun run = run_delaunay(backend, cfg);
    check_mesh(report, run.mesh, &cfg.criteria);
    report.add("termination", run.refine->dropped == 0, std::to_string(run.refine->dropped) + " elements dropped");
    check_exactly_once(report, backend, cfg.seed);

    SequentialBackend serial;
    const MeshRun base = run_delaunay(serial, cfg);
    const double emd = stability_emd(run.mesh, base.mesh);
    report.add("stability", emd <= stability_max_emd, "mean-ratio EMD vs serial = " + format_double(emd));
    return report;
}

inline VerifyReport verify_smoothing(Backend& backend, const MeshWorkloadConfig& cfg)
{
    VerifyReport report;
    const MeshRun run = run_smoothing(backend, cfg);
    check_mesh(report, run.mesh, nullptr);
    const auto& mq = run.smooth->min_quality;
    const bool monotone = std::is_sorted(mq.begin(), mq.end());
    report.add("monotone_min_quality", monotone, "min mean-ratio " + format_double(mq.front()) + " -> " + format_double(mq.back()));
    check_exactly_once(report, backend, cfg.seed);

    SequentialBackend serial;
    const MeshRun base = run_smoothing(serial, cfg);
    const double emd = stability_emd(run.mesh, base.mesh);
    report.add("stability", emd <= stability_max_emd, "mean-ratio EMD vs serial = " + format_double(emd));
    return report;
}

inline VerifyReport verify_synthetic(Backend& backend, std::uint64_t seed)
{
    VerifyReport report;
    check_exactly_once(report, backend, seed);
    return report;
}

} // namespace taskweave::bench
