#include <taskweave/bench/record.hpp>
#include <taskweave/bench/synthetic.hpp>
#include <taskweave/bench/verify.hpp>
#include <taskweave/bench/workloads.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

using namespace taskweave;
using namespace taskweave::bench;

TEST(BenchCsv, HeaderMatchesFieldOrder)
{
    EXPECT_EQ(csv_header,
              "workload,backend,strategy,threads,grainsize,repetition,wall_time_ns,tasks_created,tasks_executed,aborts,"
              "retries,steal_attempts,min_quality,mean_quality");
}

TEST(BenchCsv, RandomRecordsRoundTrip)
{
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> q(0.0, 1.0);
    const char* workloads[] = {"delaunay", "smoothing", "synthetic"};
    for (int i = 0; i < 2000; ++i) {
        BenchRecord r;
        r.workload = workloads[rng() % 3];
        r.backend = rng() % 2 ? "workstealing" : "sequential";
        r.strategy = std::string(to_string(static_cast<Strategy>(rng() % 4)));
        r.threads = 1 + static_cast<int>(rng() % 64);
        r.grainsize = rng() % 100000;
        r.repetition = rng() % 5 == 0 ? summary_repetition : static_cast<int>(rng() % 100);
        r.wall_time_ns = 1 + rng() % 1000000000000ULL;
        r.tasks_created = rng();
        r.tasks_executed = r.tasks_created;
        r.aborts = rng() % 1000;
        r.retries = rng() % 1000;
        r.steal_attempts = rng();
        r.min_quality = q(rng);
        r.mean_quality = std::nextafter(q(rng), 2.0);
        ASSERT_EQ(parse_csv(to_csv(r)), r) << to_csv(r);
    }
}

TEST(BenchCsv, MalformedRowsRejected)
{
    EXPECT_THROW(parse_csv("a,b,c"), std::invalid_argument);
    EXPECT_THROW(parse_csv("synthetic,workstealing,flat,x,1,0,1,1,1,0,0,0,0,0"), std::invalid_argument);
    EXPECT_THROW(parse_csv("synthetic,workstealing,flat,1,1,0,1,1,1,0,0,0,0,0.5z"), std::invalid_argument);
}

TEST(BenchCsv, SummaryRowIsGeometricMean)
{
    std::vector<BenchRecord> reps(4);
    const std::uint64_t t[] = {100, 400, 1600, 6400};
    for (int i = 0; i < 4; ++i) {
        reps[static_cast<std::size_t>(i)].wall_time_ns = t[i];
        reps[static_cast<std::size_t>(i)].repetition = i;
    }
    const BenchRecord s = summarize(reps);
    EXPECT_EQ(s.repetition, summary_repetition);
    // Fourth root of the product.
    EXPECT_EQ(s.wall_time_ns, static_cast<std::uint64_t>(std::llround(std::pow(100.0 * 400 * 1600 * 6400, 0.25))));
    EXPECT_NE(to_csv(s).find(",geomean,"), std::string::npos);
}

TEST(BenchCsv, GeometricMeanMatchesProductRoot)
{
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(1.0, 1000.0);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> xs(1 + rng() % 12);
        double product = 1.0;
        for (auto& x : xs) {
            x = u(rng);
            product *= x;
        }
        const double root = std::pow(product, 1.0 / static_cast<double>(xs.size()));
        EXPECT_NEAR(geometric_mean(xs), root, 1e-9 * root);
    }
}

TEST(Histogram, EquilateralLandsInTopBin)
{
    const auto h = make_histogram({mean_ratio({0, 0}, {1, 0}, {0.5, std::sqrt(3.0) / 2})}, 10, 0.0, 1.0);
    ASSERT_EQ(h.counts.size(), 10u);
    EXPECT_EQ(h.counts[9], 1u);
    EXPECT_EQ(h.total(), 1u);
}

TEST(Histogram, ZeroBinsRejected)
{
    EXPECT_THROW(make_histogram({0.5}, 0, 0.0, 1.0), std::invalid_argument);
}

TEST(Histogram, EmptyInputGivesEmptyHistogram)
{
    const auto h = make_histogram({}, 5, 0.0, 1.0);
    EXPECT_EQ(h.total(), 0u);
}

TEST(Histogram, EarthMoversDistance)
{
    Histogram a{0.0, 1.0, {1, 0, 0, 0}};
    Histogram b{0.0, 1.0, {0, 0, 0, 1}};
    EXPECT_NEAR(earth_movers_distance(a, a), 0.0, 1e-15);
    // All mass moves three bins of width 1/4.
    EXPECT_NEAR(earth_movers_distance(a, b), 0.75, 1e-15);
    Histogram c{0.0, 1.0, {2, 2, 0, 0}};
    EXPECT_NEAR(earth_movers_distance(a, c), 0.125, 1e-15);
    Histogram d{0.0, 1.0, {1, 0, 0}};
    EXPECT_THROW(earth_movers_distance(a, d), std::invalid_argument);
}

TEST(Histogram, WriteFormat)
{
    std::ostringstream out;
    write_histogram(out, Histogram{0.0, 1.0, {3, 4}});
    EXPECT_EQ(out.str(), "bin_lo,bin_hi,count\n0,0.5,3\n0.5,1,4\n");
}

TEST(Synthetic, SpinCalibratedWithinTenPercent)
{
    const SpinLoop spin = SpinLoop::calibrate();
    EXPECT_LE(spin.relative_error(std::chrono::milliseconds(2), 7), 0.10);
}

TEST(Synthetic, CountsFollowStrategyFormulas)
{
    Scheduler s(4);
    WorkStealingBackend b(s);
    const SpinLoop spin(1.0);
    EXPECT_EQ(run_synthetic(b, {1000, 0, 1, Strategy::two_level}, spin).tasks_created, 1008u);
    EXPECT_EQ(run_synthetic(b, {1000, 0, 1, Strategy::hierarchical}, spin).tasks_created, 1999u);
    EXPECT_EQ(run_synthetic(b, {40, 0, 10, Strategy::flat}, spin).tasks_created, 4u);
    const auto empty = run_synthetic(b, {0, 0, 1, Strategy::flat}, spin);
    EXPECT_EQ(empty.tasks_created, 0u);
    EXPECT_GT(empty.wall_time_ns, 0u);
    s.shutdown();
}

TEST(Workloads, SequentialRunsIdenticalModuloTime)
{
    SequentialBackend b;
    MeshWorkloadConfig cfg;
    cfg.seed = 5;
    const MeshRun x = run_delaunay(b, cfg);
    const MeshRun y = run_delaunay(b, cfg);
    EXPECT_EQ(to_csv_without_time(x.record), to_csv_without_time(y.record));
    std::ostringstream mx, my;
    write_mesh(mx, x.mesh);
    write_mesh(my, y.mesh);
    EXPECT_EQ(mx.str(), my.str());
}

TEST(Verify, DelaunaySerialPasses)
{
    SequentialBackend b;
    MeshWorkloadConfig cfg;
    const auto report = verify_delaunay(b, cfg);
    std::ostringstream out;
    report.print(out);
    EXPECT_TRUE(report.ok()) << out.str();
}

TEST(Verify, DelaunayFourThreadsPasses)
{
    Scheduler s(4);
    WorkStealingBackend b(s);
    MeshWorkloadConfig cfg;
    cfg.seed = 3;
    const auto report = verify_delaunay(b, cfg);
    std::ostringstream out;
    report.print(out);
    EXPECT_TRUE(report.ok()) << out.str();
    s.shutdown();
}

TEST(Verify, FaultInjectionFailsResidueCheck)
{
    Scheduler s(4);
    WorkStealingBackend b(s);
    MeshWorkloadConfig cfg;
    cfg.refine.fault_skip_release_once = true;
    const auto report = verify_delaunay(b, cfg);
    EXPECT_FALSE(report.ok());
    bool residue_failed = false;
    for (const auto& c : report.checks)
        if (c.name == "lock_residue")
            residue_failed = !c.passed;
    EXPECT_TRUE(residue_failed);
    s.shutdown();
}
