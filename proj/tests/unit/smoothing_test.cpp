#include <taskweave/backend.hpp>
#include <taskweave/delaunay.hpp>
#include <taskweave/quality.hpp>
#include <taskweave/smoothing.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>
#include <vector>

using namespace taskweave;

namespace {

// Fan of triangles around vertex 0 placed at `center`; `ring` is counterclockwise.
Mesh fan(Point center, const std::vector<Point>& ring)
{
    std::ostringstream s;
    s.precision(17);
    s << ring.size() + 1 << ' ' << ring.size() << ' ' << ring.size() << "\n0 " << center.x << ' ' << center.y << '\n';
    for (std::size_t k = 0; k < ring.size(); ++k)
        s << k + 1 << ' ' << ring[k].x << ' ' << ring[k].y << '\n';
    for (std::size_t k = 0; k < ring.size(); ++k)
        s << k << " 0 " << k + 1 << ' ' << (k + 1) % ring.size() + 1 << '\n';
    std::istringstream in(s.str());
    return read_mesh(in);
}

Mesh hexagon(Point center)
{
    const double h = std::sqrt(3.0) / 2;
    return fan(center, {{1, 0}, {0.5, h}, {-0.5, h}, {-1, 0}, {-0.5, -h}, {0.5, -h}});
}

// Ring coordinates sum exactly, so the centroid is exactly the origin.
Mesh diamond(Point center)
{
    return fan(center, {{1, 0}, {0, 1}, {-1, 0}, {0, -1}});
}

Mesh refined_square(double max_area, int workers)
{
    Mesh m = init_mesh(Rect{{0, 0}, {1, 1}}, workers);
    insert_random_points(m, 16, 1);
    SequentialBackend serial;
    run_refinement(serial, m, {max_area, 0.0});
    return m;
}

bool any_inverted(const Mesh& m)
{
    for (const Handle& h : m.live_triangles()) {
        const auto c = m.corners(h.slot);
        if (!(orient2d(c[0], c[1], c[2]) > 0.0))
            return true;
    }
    return false;
}

} // namespace

TEST(Quality, MeanRatioValues)
{
    EXPECT_NEAR(mean_ratio({0, 0}, {1, 0}, {0.5, std::sqrt(3.0) / 2}), 1.0, 1e-12);
    // Right isosceles, legs 1: 4*sqrt(3)*0.5 / (1 + 1 + 2).
    EXPECT_NEAR(mean_ratio({0, 0}, {1, 0}, {0, 1}), 4.0 * std::sqrt(3.0) * 0.5 / 4.0, 1e-15);
    EXPECT_NEAR(mean_ratio({0, 0}, {1, 0}, {0, 1}), std::sqrt(3.0) / 2, 1e-15);
    EXPECT_EQ(mean_ratio({0, 0}, {1, 1}, {2, 2}), 0.0);
    EXPECT_EQ(mean_ratio({0, 0}, {0, 0}, {0, 0}), 0.0);
}

TEST(Quality, MeanRatioIsScaleAndOrientationInvariant)
{
    const double q = mean_ratio({0, 0}, {3, 0}, {1, 2});
    EXPECT_NEAR(mean_ratio({0, 0}, {30, 0}, {10, 20}), q, 1e-14);
    EXPECT_NEAR(mean_ratio({0, 0}, {1, 2}, {3, 0}), q, 1e-14);
}

TEST(Smoothing, PerturbedCenterMovesToCentroid)
{
    Mesh m = hexagon({0.3, -0.2});
    const VertexStars stars(m);
    ASSERT_EQ(stars.interior(), std::vector<VertexId>{0});
    const double before = summarize_quality(m, QualityMetric::mean_ratio).min;
    EXPECT_EQ(smooth_vertex(m, stars, 0, 0), SmoothOutcome::improved);
    EXPECT_NEAR(m.point(0).x, 0.0, 1e-12);
    EXPECT_NEAR(m.point(0).y, 0.0, 1e-12);
    EXPECT_GT(summarize_quality(m, QualityMetric::mean_ratio).min, before);
    EXPECT_EQ(count_locked_vertices(m), 0u);
}

TEST(Smoothing, LocalOptimumIsRejected)
{
    Mesh m = diamond({0.0, 0.0});
    const VertexStars stars(m);
    const auto h = structural_hash(m);
    EXPECT_EQ(smooth_vertex(m, stars, 0, 0), SmoothOutcome::rejected);
    EXPECT_EQ(structural_hash(m), h);
}

TEST(Smoothing, LockedNeighborAborts)
{
    Mesh m = hexagon({0.3, -0.2});
    const VertexStars stars(m);
    ASSERT_TRUE(try_lock(m.lock(4), 1));
    const auto h = structural_hash(m);
    EXPECT_EQ(smooth_vertex(m, stars, 0, 0), SmoothOutcome::aborted);
    EXPECT_EQ(structural_hash(m), h);
    EXPECT_TRUE(m.lock(0).is_free());
    unlock(m.lock(4), 1);
}

TEST(Smoothing, BoundaryVerticesNeverMove)
{
    Mesh m = hexagon({0.3, -0.2});
    const VertexStars stars(m);
    EXPECT_EQ(smooth_vertex(m, stars, 1, 0), SmoothOutcome::rejected);
}

TEST(Smoothing, ZeroPassesLeaveMeshUnchanged)
{
    Mesh m = refined_square(0.01, 1);
    const auto h = structural_hash(m);
    SequentialBackend b;
    const auto st = smooth_pass(b, m, {Strategy::two_level, 64, 0, QualityMetric::mean_ratio});
    EXPECT_EQ(structural_hash(m), h);
    EXPECT_EQ(st.min_quality.size(), 1u);
}

TEST(Smoothing, SequentialRunsAreBitIdentical)
{
    Mesh a = refined_square(0.002, 1);
    Mesh b = refined_square(0.002, 1);
    ASSERT_EQ(structural_hash(a), structural_hash(b));
    SequentialBackend seq;
    smooth_pass(seq, a, {Strategy::sequential, 1, 3, QualityMetric::mean_ratio});
    smooth_pass(seq, b, {Strategy::sequential, 1, 3, QualityMetric::mean_ratio});
    EXPECT_EQ(structural_hash(a), structural_hash(b));
}

TEST(Smoothing, FivePassesMonotoneOnFourWorkers)
{
    Scheduler s(4);
    WorkStealingBackend b(s);
    for (Strategy strat : {Strategy::flat, Strategy::two_level, Strategy::hierarchical, Strategy::sequential}) {
        Mesh m = refined_square(5e-4, 4);
        const VertexStars stars(m);
        const auto st = smooth_pass(b, m, {strat, 64, 5, QualityMetric::mean_ratio});
        ASSERT_EQ(st.min_quality.size(), 6u);
        for (std::size_t i = 1; i < st.min_quality.size(); ++i)
            EXPECT_GE(st.min_quality[i], st.min_quality[i - 1]) << to_string(strat) << " pass " << i;
        EXPECT_FALSE(any_inverted(m));
        EXPECT_EQ(count_locked_vertices(m), 0u);
        EXPECT_GT(st.improved, 0u);
        EXPECT_EQ(st.tasks_created, st.tasks_executed);
    }
    s.shutdown();
}
