#pragma once

#include "chase_lev_deque.hpp"
#include "config.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <memory>
#include <mutex>
#include <random>
#include <stdexcept>
#include <thread>
#include <type_traits>
#include <utility>
#include <vector>

namespace taskweave {

using ThreadId = int;

/// Returned by current_thread_id() outside any worker.
inline constexpr ThreadId external_thread = -1;

class TaskGroup;
class Scheduler;

/// A unit of deferred work. `op` receives the task itself so it can read
/// `ctx` and the [begin, end) argument range. Tasks are never preempted:
/// once a worker starts one it runs to completion on that worker.
///
/// The storage of a Task must outlive its execution; the scheduler only
/// keeps a pointer. Tasks with `owned` set are deleted after they run.
struct Task {
    using Op = void (*)(Task&);

    Op op = nullptr;
    void* ctx = nullptr;
    std::size_t begin = 0;
    std::size_t end = 0;
    TaskGroup* group = nullptr;
    bool owned = false;
    void (*dispose)(void*) = nullptr; // frees ctx of an owned task that never ran
};

/// Completion tracking for a set of tasks (including tasks they spawn into
/// the same group). pending is incremented before a task becomes stealable
/// and decremented after its op returns.
class TaskGroup {
public:
    TaskGroup() = default;
    TaskGroup(const TaskGroup&) = delete;
    TaskGroup& operator=(const TaskGroup&) = delete;

    std::int64_t pending() const noexcept { return pending_.load(std::memory_order_acquire); }
    bool done() const noexcept { return pending() == 0; }

private:
    friend class Scheduler;
    friend class SequentialBackend;
    std::atomic<std::int64_t> pending_{0};
};

struct SchedulerCounters {
    std::uint64_t tasks_spawned = 0;
    std::uint64_t tasks_executed = 0;
    std::uint64_t steal_attempts = 0;
    std::uint64_t steals = 0;
};

struct SchedulerOptions {
    /// Consecutive failed steal rounds before an idle worker starts yielding.
    unsigned yield_after = 64;
    /// Failed rounds before an idle worker parks until new work is published.
    unsigned park_after = 256;
    std::chrono::microseconds park_timeout{500};
    std::uint64_t seed = 0x5eed;
};

namespace detail {
// Frees a closure task that was never handed to a scheduler.
struct ClosureTaskDeleter {
    void operator()(Task* t) const noexcept
    {
        if (t->dispose)
            t->dispose(t->ctx);
        delete t;
    }
};
} // namespace detail

using OwnedTask = std::unique_ptr<Task, detail::ClosureTaskDeleter>;

/// Wraps a callable into a self-deleting task (owned = true). The closure is
/// destroyed by the op after it runs.
template <class F>
OwnedTask make_closure_task(F&& fn)
{
    using Fn = std::decay_t<F>;
    OwnedTask task(new Task);
    task->ctx = new Fn(std::forward<F>(fn));
    task->owned = true;
    task->dispose = [](void* ctx) { delete static_cast<Fn*>(ctx); };
    task->op = [](Task& t) {
        std::unique_ptr<Fn> f(static_cast<Fn*>(t.ctx));
        (*f)();
    };
    return task;
}

namespace detail {
inline thread_local ThreadId tls_worker_id = external_thread;
inline thread_local Scheduler* tls_scheduler = nullptr;
inline std::atomic<bool> scheduler_running{false};
} // namespace detail

/// Id of the worker executing the caller, in [0, nthreads). Stable for the
/// whole execution of a task; concurrent tasks never share an id.
inline ThreadId current_thread_id() noexcept { return detail::tls_worker_id; }

/// Native work-stealing scheduler. Each worker owns a ChaseLevDeque: it pushes
/// and pops its own newest tasks, and when empty steals the oldest task of a
/// uniformly chosen victim. Only one Scheduler may run per process at a time.
class Scheduler {
public:
    explicit Scheduler(int nthreads, SchedulerOptions options = {})
        : options_(options)
    {
        if (nthreads < 1)
            throw std::invalid_argument("scheduler needs at least one worker");
        bool expected = false;
        if (!detail::scheduler_running.compare_exchange_strong(expected, true))
            throw std::logic_error("a scheduler is already running");

        workers_.reserve(static_cast<std::size_t>(nthreads));
        for (int i = 0; i < nthreads; ++i)
            workers_.push_back(std::make_unique<Worker>(options_.seed + static_cast<std::uint64_t>(i) * 0x9e3779b97f4a7c15ULL));
        accepting_.store(true, std::memory_order_release);
        threads_.reserve(workers_.size());
        for (int i = 0; i < nthreads; ++i)
            threads_.emplace_back([this, i] { worker_main(i); });
    }

    Scheduler(const Scheduler&) = delete;
    Scheduler& operator=(const Scheduler&) = delete;

    ~Scheduler()
    {
        if (!threads_.empty())
            stop_and_join();
    }

    int num_threads() const noexcept { return static_cast<int>(workers_.size()); }
    bool running() const noexcept { return accepting_.load(std::memory_order_acquire); }

    /// Publishes a task. Non-blocking: the task may start right away on
    /// another worker. From a worker it goes on top of that worker's deque;
    /// from any other thread it goes through the injection channel.
    void create_and_schedule(TaskGroup& group, Task& task)
    {
        if (!accepting_.load(std::memory_order_acquire))
            throw std::logic_error("scheduling on a scheduler that is shut down");
        task.group = &group;
        group.pending_.fetch_add(1, std::memory_order_relaxed);

        const ThreadId me = own_id();
        if (me != external_thread) {
            Worker& w = *workers_[static_cast<std::size_t>(me)];
            w.spawned.fetch_add(1, std::memory_order_relaxed);
            w.deque.push(&task);
        } else {
            injected_spawns_.fetch_add(1, std::memory_order_relaxed);
            std::lock_guard lock(inject_mutex_);
            inject_.push_back(&task);
            inject_size_.store(inject_.size(), std::memory_order_release);
        }
        if (sleepers_.load(std::memory_order_relaxed) > 0)
            wake_one();
    }

    /// Heap-allocates a task that invokes `fn()` once and frees itself.
    template <class F>
    void create_and_schedule(TaskGroup& group, F&& fn)
    {
        OwnedTask task = make_closure_task(std::forward<F>(fn));
        create_and_schedule(group, *task);
        task.release();
    }

    /// Returns once every task of the group has completed. A worker keeps
    /// executing its own tasks or stolen ones while it waits; an external
    /// thread blocks.
    void wait_for_all(TaskGroup& group)
    {
        const ThreadId me = own_id();
        if (me == external_thread) {
            external_waiters_.fetch_add(1, std::memory_order_seq_cst);
            while (!group.done()) {
                const std::uint64_t seen = completions_.load(std::memory_order_seq_cst);
                if (group.done())
                    break;
                completions_.wait(seen, std::memory_order_acquire);
            }
            external_waiters_.fetch_sub(1, std::memory_order_relaxed);
            return;
        }
        Worker& w = *workers_[static_cast<std::size_t>(me)];
        unsigned failed = 0;
        while (!group.done()) {
            Task* t = next_task(me, w);
            if (t) {
                execute(w, *t);
                failed = 0;
            } else if (++failed < options_.yield_after) {
                cpu_relax();
            } else {
                std::this_thread::yield();
            }
        }
    }

    /// Runs fn on a worker and blocks until fn and everything it spawned into
    /// the group it receives are finished. Called from a worker, runs inline.
    template <class F>
    void run(F&& fn)
    {
        if (own_id() != external_thread) {
            fn();
            return;
        }
        TaskGroup root;
        std::exception_ptr error;
        create_and_schedule(root, [&] {
            try {
                fn();
            } catch (...) {
                error = std::current_exception();
            }
        });
        wait_for_all(root);
        if (error)
            std::rethrow_exception(error);
    }

    /// One steal attempt by `thief` against `victim`. Never blocks.
    Task* steal(ThreadId thief, ThreadId victim)
    {
        Worker& w = *workers_[static_cast<std::size_t>(thief)];
        w.steal_attempts.fetch_add(1, std::memory_order_relaxed);
        auto t = workers_[static_cast<std::size_t>(victim)]->deque.steal();
        if (t) {
            w.steals.fetch_add(1, std::memory_order_relaxed);
            return *t;
        }
        return nullptr;
    }

    /// Executes a task obtained through steal() on behalf of `thief`,
    /// including group accounting.
    void execute_stolen(ThreadId thief, Task& task) { execute(*workers_[static_cast<std::size_t>(thief)], task); }

    /// Joins all workers. Rejected while tasks are outstanding.
    void shutdown()
    {
        if (threads_.empty())
            throw std::logic_error("scheduler already shut down");
        if (outstanding() != 0)
            throw std::logic_error("shutdown with pending tasks");
        stop_and_join();
    }

    SchedulerCounters counters() const noexcept
    {
        SchedulerCounters c;
        for (const auto& w : workers_) {
            c.tasks_spawned += w->spawned.load(std::memory_order_relaxed);
            c.tasks_executed += w->executed.load(std::memory_order_relaxed);
            c.steal_attempts += w->steal_attempts.load(std::memory_order_relaxed);
            c.steals += w->steals.load(std::memory_order_relaxed);
        }
        c.tasks_spawned += injected_spawns_.load(std::memory_order_relaxed);
        return c;
    }

    std::uint64_t outstanding() const noexcept
    {
        const auto c = counters();
        return c.tasks_spawned - c.tasks_executed;
    }

private:
    struct alignas(cache_line) Worker {
        explicit Worker(std::uint64_t seed) : rng(seed) {}

        ChaseLevDeque<Task*> deque;
        std::mt19937_64 rng; // victim selection, owner only
        std::atomic<std::uint64_t> spawned{0};
        std::atomic<std::uint64_t> executed{0};
        std::atomic<std::uint64_t> steal_attempts{0};
        std::atomic<std::uint64_t> steals{0};
    };

    ThreadId own_id() const noexcept
    {
        return detail::tls_scheduler == this ? detail::tls_worker_id : external_thread;
    }

    void worker_main(int id)
    {
        detail::tls_worker_id = id;
        detail::tls_scheduler = this;
        Worker& w = *workers_[static_cast<std::size_t>(id)];
        unsigned failed = 0;
        while (!stop_.load(std::memory_order_acquire)) {
            Task* t = next_task(id, w);
            if (t) {
                execute(w, *t);
                failed = 0;
                continue;
            }
            ++failed;
            if (failed < options_.yield_after)
                cpu_relax();
            else if (failed < options_.park_after)
                std::this_thread::yield();
            else
                park();
        }
        detail::tls_worker_id = external_thread;
        detail::tls_scheduler = nullptr;
    }

    // Own deque first, then the injection channel, then one random victim.
    Task* next_task(ThreadId me, Worker& w)
    {
        if (auto t = w.deque.pop())
            return *t;
        if (inject_size_.load(std::memory_order_acquire) > 0) {
            std::lock_guard lock(inject_mutex_);
            if (!inject_.empty()) {
                Task* t = inject_.front();
                inject_.pop_front();
                inject_size_.store(inject_.size(), std::memory_order_release);
                return t;
            }
        }
        const int n = num_threads();
        if (n == 1)
            return nullptr;
        std::uniform_int_distribution<int> pick(0, n - 2);
        int victim = pick(w.rng);
        if (victim >= me)
            ++victim;
        return steal(me, victim);
    }

    void execute(Worker& w, Task& t)
    {
        TaskGroup* group = t.group;
        const bool owned = t.owned;
        t.op(t);
        if (owned)
            delete &t;
        w.executed.fetch_add(1, std::memory_order_relaxed);
        if (group->pending_.fetch_sub(1, std::memory_order_acq_rel) == 1) {
            completions_.fetch_add(1, std::memory_order_seq_cst);
            if (external_waiters_.load(std::memory_order_seq_cst) > 0)
                completions_.notify_all();
        }
    }

    void park()
    {
        std::unique_lock lock(park_mutex_);
        sleepers_.fetch_add(1, std::memory_order_seq_cst);
        if (!has_visible_work() && !stop_.load(std::memory_order_acquire))
            park_cv_.wait_for(lock, options_.park_timeout);
        sleepers_.fetch_sub(1, std::memory_order_relaxed);
    }

    void wake_one()
    {
        std::lock_guard lock(park_mutex_);
        park_cv_.notify_one();
    }

    bool has_visible_work() const noexcept
    {
        if (inject_size_.load(std::memory_order_acquire) > 0)
            return true;
        return std::any_of(workers_.begin(), workers_.end(), [](const auto& w) { return !w->deque.empty(); });
    }

    void stop_and_join()
    {
        accepting_.store(false, std::memory_order_release);
        stop_.store(true, std::memory_order_release);
        {
            std::lock_guard lock(park_mutex_);
            park_cv_.notify_all();
        }
        for (auto& th : threads_)
            th.join();
        threads_.clear();
        detail::scheduler_running.store(false, std::memory_order_release);
    }

    SchedulerOptions options_;
    std::vector<std::unique_ptr<Worker>> workers_;
    std::vector<std::thread> threads_;
    std::atomic<bool> accepting_{false};
    std::atomic<bool> stop_{false};

    std::mutex inject_mutex_;
    std::deque<Task*> inject_;
    std::atomic<std::size_t> inject_size_{0};
    std::atomic<std::uint64_t> injected_spawns_{0};

    std::atomic<std::uint64_t> completions_{0};
    std::atomic<int> external_waiters_{0};

    std::mutex park_mutex_;
    std::condition_variable park_cv_;
    std::atomic<int> sleepers_{0};
};

} // namespace taskweave
