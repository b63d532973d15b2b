#pragma once

#include "config.hpp"
#include "scheduler.hpp"

#include <atomic>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace taskweave {

/// Single-word speculative lock. The word holds 0 when free and tid+1 while
/// worker tid owns it. Acquisition never waits: callers that fail roll back
/// and retry later.
class SpecLock {
public:
    enum class Acquire { acquired, reentrant, failed };

    SpecLock() = default;
    SpecLock(const SpecLock&) = delete;
    SpecLock& operator=(const SpecLock&) = delete;

    Acquire acquire(ThreadId tid) noexcept
    {
        std::uint32_t expected = 0;
        const auto word = encode(tid);
        if (owner_.compare_exchange_strong(expected, word, std::memory_order_acquire, std::memory_order_relaxed))
            return Acquire::acquired;
        return expected == word ? Acquire::reentrant : Acquire::failed;
    }

    bool try_lock(ThreadId tid) noexcept { return acquire(tid) != Acquire::failed; }

    void unlock(ThreadId tid) noexcept
    {
        if constexpr (checks_enabled) {
            std::uint32_t expected = encode(tid);
            const bool held = owner_.compare_exchange_strong(expected, 0, std::memory_order_release, std::memory_order_relaxed);
            TASKWEAVE_CHECK(held, "unlock of a SpecLock not held by the caller");
        } else {
            owner_.store(0, std::memory_order_release);
        }
    }

    /// 0 when free, tid+1 otherwise.
    std::uint32_t owner_word() const noexcept { return owner_.load(std::memory_order_acquire); }
    bool is_free() const noexcept { return owner_word() == 0; }
    bool held_by(ThreadId tid) const noexcept { return owner_word() == encode(tid); }

private:
    static std::uint32_t encode(ThreadId tid) noexcept { return static_cast<std::uint32_t>(tid) + 1; }

    std::atomic<std::uint32_t> owner_{0};
};

/// Locks acquired so far by one task, each recorded once.
class LockSet {
public:
    LockSet() = default;
    LockSet(const LockSet&) = delete;
    LockSet& operator=(const LockSet&) = delete;
    LockSet(LockSet&&) noexcept = default;
    LockSet& operator=(LockSet&&) noexcept = default;

    std::span<SpecLock* const> items() const noexcept { return items_; }
    std::size_t size() const noexcept { return items_.size(); }
    bool empty() const noexcept { return items_.empty(); }

    /// All-or-nothing: on success every lock is held by tid and recorded;
    /// on the first failure the locks newly taken by this call are released
    /// and false is returned. Locks already held from earlier calls stay.
    template <class Locks>
    bool acquire_all(const Locks& locks, ThreadId tid)
    {
        const std::size_t mark = items_.size();
        for (SpecLock* lock : locks) {
            switch (lock->acquire(tid)) {
            case SpecLock::Acquire::acquired:
                items_.push_back(lock);
                break;
            case SpecLock::Acquire::reentrant:
                break;
            case SpecLock::Acquire::failed:
                while (items_.size() > mark) {
                    items_.back()->unlock(tid);
                    items_.pop_back();
                }
                return false;
            }
        }
        return true;
    }

    bool acquire(SpecLock& lock, ThreadId tid)
    {
        SpecLock* one[] = {&lock};
        return acquire_all(one, tid);
    }

    void release_all(ThreadId tid) noexcept
    {
        for (SpecLock* lock : items_)
            lock->unlock(tid);
        items_.clear();
    }

    /// Forgets the recorded locks without releasing them. Only used for fault
    /// injection.
    void leak() noexcept { items_.clear(); }

private:
    std::vector<SpecLock*> items_;
};

inline bool try_lock(SpecLock& lock, ThreadId tid) noexcept { return lock.try_lock(tid); }
inline void unlock(SpecLock& lock, ThreadId tid) noexcept { lock.unlock(tid); }

/// Acquires every lock or none of them.
template <class Locks>
std::optional<LockSet> acquire_all(const Locks& locks, ThreadId tid)
{
    LockSet set;
    if (!set.acquire_all(locks, tid))
        return std::nullopt;
    return set;
}

inline void release_all(LockSet& set, ThreadId tid) noexcept { set.release_all(tid); }

} // namespace taskweave
