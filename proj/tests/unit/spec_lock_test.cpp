#include <taskweave/spec_lock.hpp>

#include <gtest/gtest.h>

#include <array>
#include <atomic>
#include <thread>
#include <vector>

using namespace taskweave;

TEST(SpecLock, OwnerWordEncodesTidPlusOne)
{
    SpecLock l;
    EXPECT_TRUE(l.is_free());
    EXPECT_TRUE(try_lock(l, 3));
    EXPECT_EQ(l.owner_word(), 4u);
    EXPECT_TRUE(l.held_by(3));
}

TEST(SpecLock, OtherTidFailsWithoutSideEffect)
{
    SpecLock l;
    ASSERT_TRUE(try_lock(l, 3));
    EXPECT_FALSE(try_lock(l, 5));
    EXPECT_EQ(l.owner_word(), 4u);
}

TEST(SpecLock, ReentrantForOwner)
{
    SpecLock l;
    EXPECT_EQ(l.acquire(3), SpecLock::Acquire::acquired);
    EXPECT_EQ(l.acquire(3), SpecLock::Acquire::reentrant);
    EXPECT_TRUE(try_lock(l, 3));
    EXPECT_EQ(l.owner_word(), 4u);
}

TEST(SpecLock, UnlockFreesForOthers)
{
    SpecLock l;
    ASSERT_TRUE(try_lock(l, 3));
    unlock(l, 3);
    EXPECT_TRUE(l.is_free());
    EXPECT_TRUE(try_lock(l, 7));
    EXPECT_EQ(l.owner_word(), 8u);
}

TEST(SpecLockDeathTest, DoubleUnlockAborts)
{
    ::testing::FLAGS_gtest_death_test_style = "threadsafe";
    SpecLock l;
    ASSERT_TRUE(try_lock(l, 0));
    unlock(l, 0);
    EXPECT_DEATH(unlock(l, 0), "not held by the caller");
}

TEST(SpecLockDeathTest, UnlockByNonOwnerAborts)
{
    ::testing::FLAGS_gtest_death_test_style = "threadsafe";
    SpecLock l;
    ASSERT_TRUE(try_lock(l, 1));
    EXPECT_DEATH(unlock(l, 2), "not held by the caller");
}

TEST(LockSet, AllFreeAcquiresAll)
{
    std::array<SpecLock, 5> locks;
    std::array<SpecLock*, 5> ptrs{&locks[0], &locks[1], &locks[2], &locks[3], &locks[4]};
    auto set = acquire_all(ptrs, 2);
    ASSERT_TRUE(set);
    EXPECT_EQ(set->size(), 5u);
    for (auto& l : locks)
        EXPECT_TRUE(l.held_by(2));
    release_all(*set, 2);
    for (auto& l : locks)
        EXPECT_TRUE(l.is_free());
}

TEST(LockSet, ThirdOfFiveHeldRollsBack)
{
    std::array<SpecLock, 5> locks;
    std::array<SpecLock*, 5> ptrs{&locks[0], &locks[1], &locks[2], &locks[3], &locks[4]};
    ASSERT_TRUE(try_lock(locks[2], 9));
    EXPECT_FALSE(acquire_all(ptrs, 2));
    EXPECT_TRUE(locks[0].is_free());
    EXPECT_TRUE(locks[1].is_free());
    EXPECT_TRUE(locks[2].held_by(9));
    EXPECT_TRUE(locks[3].is_free());
    EXPECT_TRUE(locks[4].is_free());
}

TEST(LockSet, DuplicatesRecordedOnce)
{
    SpecLock a, b;
    std::array<SpecLock*, 4> ptrs{&a, &b, &a, &b};
    LockSet set;
    ASSERT_TRUE(set.acquire_all(ptrs, 1));
    EXPECT_EQ(set.size(), 2u);
    set.release_all(1);
    EXPECT_TRUE(a.is_free());
    EXPECT_TRUE(b.is_free());
}

TEST(LockSet, FailedCallKeepsEarlierLocks)
{
    SpecLock a, b, c;
    LockSet set;
    ASSERT_TRUE(set.acquire(a, 1));
    ASSERT_TRUE(try_lock(c, 2));
    std::array<SpecLock*, 2> more{&b, &c};
    EXPECT_FALSE(set.acquire_all(more, 1));
    EXPECT_TRUE(a.held_by(1));
    EXPECT_TRUE(b.is_free());
    EXPECT_EQ(set.size(), 1u);
    set.release_all(1);
}

TEST(LockSet, EmptyReleaseIsNoop)
{
    LockSet set;
    set.release_all(0);
    EXPECT_TRUE(set.empty());
}

TEST(LockSet, HandoffAfterRelease)
{
    std::array<SpecLock, 4> locks;
    std::array<SpecLock*, 4> ptrs{&locks[0], &locks[1], &locks[2], &locks[3]};
    auto set = acquire_all(ptrs, 0);
    ASSERT_TRUE(set);
    bool other = false;
    std::thread t([&] {
        auto s2 = acquire_all(ptrs, 1);
        other = s2.has_value();
        if (s2)
            release_all(*s2, 1);
    });
    t.join();
    EXPECT_FALSE(other);
    release_all(*set, 0);
    std::thread t2([&] {
        auto s2 = acquire_all(ptrs, 1);
        other = s2.has_value();
        if (s2)
            release_all(*s2, 1);
    });
    t2.join();
    EXPECT_TRUE(other);
}

TEST(LockSet, DisjointSetsBothSucceed)
{
    std::array<SpecLock, 6> locks;
    bool ok[2] = {false, false};
    std::vector<std::thread> ts;
    for (int w = 0; w < 2; ++w)
        ts.emplace_back([&, w] {
            std::array<SpecLock*, 3> mine{&locks[3 * w], &locks[3 * w + 1], &locks[3 * w + 2]};
            auto s = acquire_all(mine, w);
            ok[w] = s.has_value();
            if (s)
                release_all(*s, w);
        });
    for (auto& t : ts)
        t.join();
    EXPECT_TRUE(ok[0]);
    EXPECT_TRUE(ok[1]);
}

// Overlapping sets under contention: a shared counter protected only by the
// all-or-nothing acquisition never sees two writers.
TEST(LockSet, MutualExclusionStress)
{
    std::array<SpecLock, 8> locks;
    std::atomic<int> inside{0};
    std::atomic<int> violations{0};
    std::atomic<long> successes{0};
    std::vector<std::thread> ts;
    for (int w = 0; w < 4; ++w)
        ts.emplace_back([&, w] {
            for (int i = 0; i < 20000; ++i) {
                const std::size_t k = static_cast<std::size_t>((i + w) % 7);
                std::array<SpecLock*, 2> want{&locks[k], &locks[7]};
                LockSet s;
                if (!s.acquire_all(want, w))
                    continue;
                if (inside.fetch_add(1) != 0)
                    ++violations;
                inside.fetch_sub(1);
                ++successes;
                s.release_all(w);
            }
        });
    for (auto& t : ts)
        t.join();
    EXPECT_EQ(violations.load(), 0);
    EXPECT_GT(successes.load(), 0);
    for (auto& l : locks)
        EXPECT_TRUE(l.is_free());
}
