#include <taskweave/task_for.hpp>

#include <gtest/gtest.h>

#include <algorithm>
#include <atomic>
#include <functional>
#include <mutex>
#include <utility>
#include <vector>

using namespace taskweave;

namespace {

// Independent model of the bisection: split len into ceil(len/2) and
// floor(len/2) until len <= g, counting every node.
std::pair<std::size_t, std::size_t> simulate_bisection(std::size_t n, std::size_t g)
{
    std::size_t leaves = 0, nodes = 0;
    std::vector<std::size_t> stack{n};
    while (!stack.empty()) {
        const std::size_t len = stack.back();
        stack.pop_back();
        ++nodes;
        if (len <= g) {
            ++leaves;
            continue;
        }
        stack.push_back((len + 1) / 2);
        stack.push_back(len / 2);
    }
    return {leaves, nodes};
}

class TaskForFixture : public ::testing::Test {
protected:
    static void SetUpTestSuite() { scheduler_ = new Scheduler(4); }
    static void TearDownTestSuite()
    {
        scheduler_->shutdown();
        delete scheduler_;
    }

    WorkStealingBackend backend() { return WorkStealingBackend(*scheduler_); }

    static Scheduler* scheduler_;
};

Scheduler* TaskForFixture::scheduler_ = nullptr;

// Deterministic four-"thread" backend that records the range of every task
// it is handed and runs them on the caller.
class RecordingBackend final : public Backend {
public:
    BackendKind kind() const noexcept override { return BackendKind::workstealing; }
    int num_threads() const noexcept override { return 4; }
    ThreadId thread_id() const noexcept override { return 0; }
    void spawn(TaskGroup& group, Task& task) override
    {
        ranges.emplace_back(task.begin, task.end);
        inner_.spawn(group, task);
    }
    void wait(TaskGroup& group) override { inner_.wait(group); }
    void run(const std::function<void()>& fn) override { fn(); }

    std::vector<std::pair<std::size_t, std::size_t>> ranges;

private:
    SequentialBackend inner_;
};

std::vector<std::uint32_t> tally_run(Backend& b, std::size_t n, TaskForOptions o, TaskForStats* stats = nullptr)
{
    std::vector<std::atomic<std::uint32_t>> tally(n);
    const auto st = task_for_index(b, n, [&](std::size_t i) { tally[i].fetch_add(1); }, o);
    if (stats)
        *stats = st;
    std::vector<std::uint32_t> out;
    for (auto& t : tally)
        out.push_back(t.load());
    return out;
}

} // namespace

TEST(TaskForCounts, ClosedForms)
{
    EXPECT_EQ(expected_task_count(Strategy::flat, 40, 10, 4), 4u);
    EXPECT_EQ(expected_task_count(Strategy::two_level, 1000, 1, 4), 1008u);
    EXPECT_EQ(expected_task_count(Strategy::hierarchical, 1000, 1, 4), 1999u);
    EXPECT_EQ(expected_task_count(Strategy::hierarchical, 80, 10, 4), 15u);
    EXPECT_EQ(expected_task_count(Strategy::hierarchical, 1, 1, 4), 1u);
    EXPECT_EQ(expected_task_count(Strategy::sequential, 1000, 1, 4), 0u);
    EXPECT_EQ(expected_task_count(Strategy::flat, 0, 1, 4), 0u);
}

TEST(TaskForCounts, BisectionMatchesSimulation)
{
    for (std::size_t n = 1; n <= 300; ++n)
        for (std::size_t g = 1; g <= 12; ++g) {
            const auto [leaves, nodes] = simulate_bisection(n, g);
            ASSERT_EQ(bisection_leaves(n, g), leaves) << n << '/' << g;
            ASSERT_EQ(expected_task_count(Strategy::hierarchical, n, g, 1), nodes) << n << '/' << g;
            ASSERT_GE(leaves, (n + g - 1) / g);
            // Once split, every leaf keeps at least half of g + 1 indices.
            if (n > g) {
                ASSERT_LE(leaves * ((g + 1) / 2), n);
            }
        }
}

TEST(TaskForCounts, HundredByGrainSeven)
{
    // Bisection of 100 with grainsize 7: the level-3 ranges are 13 and 12,
    // both above 7, so every one of the 8 splits again into 16 leaves.
    const auto [leaves, nodes] = simulate_bisection(100, 7);
    EXPECT_EQ(leaves, 16u);
    EXPECT_EQ(nodes, 31u);
    EXPECT_EQ(bisection_leaves(100, 7), 16u);
}

TEST_F(TaskForFixture, FlatFortyByTen)
{
    auto b = backend();
    TaskForStats st;
    const auto t = tally_run(b, 40, {10, Strategy::flat}, &st);
    EXPECT_EQ(st.tasks_created, 4u);
    EXPECT_EQ(st.tasks_executed, 4u);
    EXPECT_EQ(t, std::vector<std::uint32_t>(40, 1));
}

TEST(TaskForRanges, FlatIsCeilingPartition)
{
    RecordingBackend b;
    task_for_index(b, 7, [](std::size_t) {}, {3, Strategy::flat});
    EXPECT_EQ(b.ranges, (std::vector<std::pair<std::size_t, std::size_t>>{{0, 3}, {3, 6}, {6, 7}}));
}

TEST(TaskForRanges, FlatSingleChunk)
{
    RecordingBackend b;
    task_for_index(b, 7, [](std::size_t) {}, {7, Strategy::flat});
    EXPECT_EQ(b.ranges.size(), 1u);
}

TEST(TaskForRanges, TwoLevelPartitionsByChunk)
{
    // 4 chunks over 8 partitions: half of the partitions are empty.
    RecordingBackend b;
    task_for_index(b, 4, [](std::size_t) {}, {1, Strategy::two_level});
    std::size_t empty = 0;
    for (std::size_t i = 0; i < 8; ++i)
        if (b.ranges[i].first == b.ranges[i].second)
            ++empty;
    EXPECT_EQ(empty, 4u);
    EXPECT_EQ(b.ranges.size(), 12u);
}

TEST(TaskForRanges, HierarchicalHalves)
{
    RecordingBackend b;
    task_for_index(b, 5, [](std::size_t) {}, {2, Strategy::hierarchical});
    // 5 -> 3 + 2, 3 -> 2 + 1.
    std::vector<std::pair<std::size_t, std::size_t>> want{{0, 5}, {0, 3}, {3, 5}, {0, 2}, {2, 3}};
    auto got = b.ranges;
    std::sort(got.begin(), got.end());
    std::sort(want.begin(), want.end());
    EXPECT_EQ(got, want);
}

TEST_F(TaskForFixture, TwoLevelThousand)
{
    auto b = backend();
    TaskForStats st;
    const auto t = tally_run(b, 1000, {1, Strategy::two_level}, &st);
    EXPECT_EQ(st.tasks_created, 1008u);
    EXPECT_EQ(st.tasks_executed, 1008u);
    EXPECT_EQ(t, std::vector<std::uint32_t>(1000, 1));
}

TEST_F(TaskForFixture, TwoLevelMoreParitionsThanChunks)
{
    auto b = backend();
    TaskForStats st;
    tally_run(b, 4, {1, Strategy::two_level}, &st);
    EXPECT_EQ(st.tasks_created, 8u + 4u);
}

TEST_F(TaskForFixture, TwoLevelLevelTwoCount)
{
    auto b = backend();
    TaskForStats st;
    const auto t = tally_run(b, 100000, {10, Strategy::two_level}, &st);
    EXPECT_EQ(st.tasks_created - 8u, 10000u);
    EXPECT_EQ(t, std::vector<std::uint32_t>(100000, 1));
}

TEST_F(TaskForFixture, HierarchicalCounts)
{
    auto b = backend();
    TaskForStats st;
    tally_run(b, 80, {10, Strategy::hierarchical}, &st);
    EXPECT_EQ(st.tasks_created, 15u);
    tally_run(b, 1, {1, Strategy::hierarchical}, &st);
    EXPECT_EQ(st.tasks_created, 1u);
    tally_run(b, 1000, {1, Strategy::hierarchical}, &st);
    EXPECT_EQ(st.tasks_created, 1999u);
    tally_run(b, 100, {7, Strategy::hierarchical}, &st);
    EXPECT_EQ(st.tasks_created, simulate_bisection(100, 7).second);
    EXPECT_EQ(st.tasks_executed, st.tasks_created);
}

TEST_F(TaskForFixture, EveryStrategyAppliesEachIndexOnce)
{
    auto b = backend();
    for (Strategy s : {Strategy::flat, Strategy::two_level, Strategy::hierarchical, Strategy::sequential})
        for (std::size_t g : {1u, 3u, 64u, 5000u}) {
            TaskForStats st;
            const auto t = tally_run(b, 4099, {g, s}, &st);
            ASSERT_EQ(t, std::vector<std::uint32_t>(4099, 1)) << to_string(s) << " g=" << g;
            ASSERT_EQ(st.tasks_created, expected_task_count(s, 4099, g, 4));
            ASSERT_EQ(st.tasks_created, st.tasks_executed);
        }
}

TEST_F(TaskForFixture, EmptyRangeCreatesNothing)
{
    auto b = backend();
    for (Strategy s : {Strategy::flat, Strategy::two_level, Strategy::hierarchical, Strategy::sequential}) {
        const auto st = task_for_index(b, 0, [](std::size_t) { FAIL(); }, {1, s});
        EXPECT_EQ(st.tasks_created, 0u);
    }
}

TEST_F(TaskForFixture, ZeroGrainsizeRejected)
{
    auto b = backend();
    EXPECT_THROW(task_for_index(b, 10, [](std::size_t) {}, {0, Strategy::flat}), std::invalid_argument);
    SequentialBackend s;
    EXPECT_THROW(task_for_index(s, 10, [](std::size_t) {}, {0, Strategy::flat}), std::invalid_argument);
}

TEST_F(TaskForFixture, SequentialStrategyIsOrdered)
{
    auto b = backend();
    std::vector<std::size_t> order;
    const auto st = task_for_index(b, 5, [&](std::size_t i) { order.push_back(i); }, {1, Strategy::sequential});
    EXPECT_EQ(order, (std::vector<std::size_t>{0, 1, 2, 3, 4}));
    EXPECT_EQ(st.tasks_created, 0u);
}

TEST_F(TaskForFixture, OverArgumentVector)
{
    auto b = backend();
    std::vector<int> args(1000, 1);
    std::atomic<int> sum{0};
    task_for(b, args, [&](int& a) { sum += a; }, {16, Strategy::two_level});
    EXPECT_EQ(sum.load(), 1000);
}

TEST_F(TaskForFixture, NestedTaskFor)
{
    auto b = backend();
    std::atomic<int> count{0};
    task_for_index(b, 10, [&](std::size_t) {
        task_for_index(b, 10, [&](std::size_t) { ++count; }, {2, Strategy::hierarchical});
    }, {1, Strategy::two_level});
    EXPECT_EQ(count.load(), 100);
}

TEST(TaskForSequentialBackend, LoopsInOrderWithoutTasks)
{
    SequentialBackend b;
    for (Strategy s : {Strategy::flat, Strategy::two_level, Strategy::hierarchical}) {
        std::vector<std::size_t> trace;
        const auto st = task_for_index(b, 5, [&](std::size_t i) { trace.push_back(i); }, {2, s});
        EXPECT_EQ(trace, (std::vector<std::size_t>{0, 1, 2, 3, 4}));
        EXPECT_EQ(st.tasks_created, 0u);
    }
}

TEST(TaskForStrategy, ParseRoundTrip)
{
    for (Strategy s : {Strategy::flat, Strategy::two_level, Strategy::hierarchical, Strategy::sequential})
        EXPECT_EQ(parse_strategy(to_string(s)), s);
    EXPECT_FALSE(parse_strategy("bogus"));
}
