#pragma once

#include "scheduler.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string_view>
#include <vector>

namespace taskweave {

enum class BackendKind { workstealing, sequential };

inline std::string_view to_string(BackendKind k) noexcept
{
    return k == BackendKind::workstealing ? "workstealing" : "sequential";
}

inline std::optional<BackendKind> parse_backend(std::string_view s) noexcept
{
    if (s == "workstealing")
        return BackendKind::workstealing;
    if (s == "sequential")
        return BackendKind::sequential;
    return std::nullopt;
}

/// Execution substrate seen by the front-end and the workloads.
class Backend {
public:
    virtual ~Backend() = default;

    virtual BackendKind kind() const noexcept = 0;
    virtual int num_threads() const noexcept = 0;
    /// Worker id of the caller; external_thread outside any worker.
    virtual ThreadId thread_id() const noexcept = 0;
    virtual void spawn(TaskGroup& group, Task& task) = 0;
    virtual void wait(TaskGroup& group) = 0;
    /// Runs fn inside the execution context and returns when it is done.
    virtual void run(const std::function<void()>& fn) = 0;
    virtual std::uint64_t steal_attempts() const noexcept { return 0; }

    bool sequential() const noexcept { return kind() == BackendKind::sequential; }

    template <class F>
    void spawn_fn(TaskGroup& group, F&& fn)
    {
        OwnedTask task = make_closure_task(std::forward<F>(fn));
        spawn(group, *task);
        task.release();
    }
};

class WorkStealingBackend final : public Backend {
public:
    explicit WorkStealingBackend(Scheduler& scheduler) : scheduler_(scheduler) {}

    BackendKind kind() const noexcept override { return BackendKind::workstealing; }
    int num_threads() const noexcept override { return scheduler_.num_threads(); }
    ThreadId thread_id() const noexcept override { return current_thread_id(); }
    void spawn(TaskGroup& group, Task& task) override { scheduler_.create_and_schedule(group, task); }
    void wait(TaskGroup& group) override { scheduler_.wait_for_all(group); }
    void run(const std::function<void()>& fn) override { scheduler_.run(fn); }
    std::uint64_t steal_attempts() const noexcept override { return scheduler_.counters().steal_attempts; }

    Scheduler& scheduler() noexcept { return scheduler_; }

private:
    Scheduler& scheduler_;
};

/// Single-threaded stand-in: spawned tasks are deferred on a stack and
/// drained on the calling thread by wait(). Execution order is fully
/// deterministic. Not thread-safe.
class SequentialBackend final : public Backend {
public:
    BackendKind kind() const noexcept override { return BackendKind::sequential; }
    int num_threads() const noexcept override { return 1; }
    ThreadId thread_id() const noexcept override { return 0; }

    void spawn(TaskGroup& group, Task& task) override
    {
        task.group = &group;
        group.pending_.fetch_add(1, std::memory_order_relaxed);
        stack_.push_back(&task);
    }

    void wait(TaskGroup& group) override
    {
        while (!group.done()) {
            if (stack_.empty())
                throw std::logic_error("sequential backend: group pending with no runnable task");
            Task* t = stack_.back();
            stack_.pop_back();
            TaskGroup* g = t->group;
            const bool owned = t->owned;
            t->op(*t);
            if (owned)
                delete t;
            g->pending_.fetch_sub(1, std::memory_order_relaxed);
        }
    }

    void run(const std::function<void()>& fn) override { fn(); }

private:
    std::vector<Task*> stack_;
};

} // namespace taskweave
