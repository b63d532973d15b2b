#pragma once

#include "backend.hpp"

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

namespace taskweave {

/// Task-creation shape used by task_for.
///  - flat: the caller creates every terminal task itself.
///  - two_level: the caller creates 2*nthreads partition tasks, each of which
///    creates the terminal tasks of its part.
///  - hierarchical: recursive bisection down to grainsize.
///  - sequential: plain loop on the caller, no tasks.
enum class Strategy { flat, two_level, hierarchical, sequential };

inline std::string_view to_string(Strategy s) noexcept
{
    switch (s) {
    case Strategy::flat: return "flat";
    case Strategy::two_level: return "2level";
    case Strategy::hierarchical: return "hierarchical";
    case Strategy::sequential: return "sequential";
    }
    return "?";
}

inline std::optional<Strategy> parse_strategy(std::string_view s) noexcept
{
    if (s == "flat")
        return Strategy::flat;
    if (s == "2level" || s == "two_level")
        return Strategy::two_level;
    if (s == "hierarchical")
        return Strategy::hierarchical;
    if (s == "sequential")
        return Strategy::sequential;
    return std::nullopt;
}

struct TaskForOptions {
    std::size_t grainsize = 10;
    Strategy strategy = Strategy::two_level;
};

struct TaskForStats {
    std::uint64_t tasks_created = 0;
    std::uint64_t tasks_executed = 0;
};

inline std::size_t chunk_count(std::size_t n, std::size_t grainsize) noexcept
{
    return (n + grainsize - 1) / grainsize;
}

/// Number of leaves of the bisection tree over a range of length n.
inline std::size_t bisection_leaves(std::size_t n, std::size_t grainsize) noexcept
{
    if (n <= grainsize)
        return 1;
    return bisection_leaves(n - n / 2, grainsize) + bisection_leaves(n / 2, grainsize);
}

/// Tasks task_for creates for a given shape; 0 for the sequential strategy
/// or an empty range.
inline std::uint64_t expected_task_count(Strategy s, std::size_t n, std::size_t grainsize, int nthreads) noexcept
{
    if (n == 0 || s == Strategy::sequential)
        return 0;
    switch (s) {
    case Strategy::flat: return chunk_count(n, grainsize);
    case Strategy::two_level: return 2 * static_cast<std::uint64_t>(nthreads) + chunk_count(n, grainsize);
    case Strategy::hierarchical: return 2 * bisection_leaves(n, grainsize) - 1;
    default: return 0;
    }
}

namespace detail {

struct TaskForContext {
    TaskForContext(Backend* b, void* o, void (*fn)(void*, std::size_t, std::size_t), std::size_t count, std::size_t grain)
        : backend(b), op(o), body(fn), n(count), grainsize(grain)
    {
    }

    Backend* backend;
    void* op;
    void (*body)(void* op, std::size_t begin, std::size_t end);
    std::size_t n;
    std::size_t grainsize;
    TaskGroup group;
    std::vector<Task> terminals; // two_level only, indexed by chunk
    std::atomic<std::uint64_t> created{0};
    std::atomic<std::uint64_t> executed{0};
};

inline TaskForContext& context_of(Task& t) { return *static_cast<TaskForContext*>(t.ctx); }

inline void run_terminal(Task& t)
{
    auto& c = context_of(t);
    c.executed.fetch_add(1, std::memory_order_relaxed);
    c.body(c.op, t.begin, t.end);
}

inline void spawn_flat(TaskForContext& c)
{
    const std::size_t chunks = chunk_count(c.n, c.grainsize);
    std::vector<Task> tasks(chunks);
    for (std::size_t i = 0; i < chunks; ++i) {
        Task& t = tasks[i];
        t.op = &run_terminal;
        t.ctx = &c;
        t.begin = i * c.grainsize;
        t.end = std::min(c.n, t.begin + c.grainsize);
        c.created.fetch_add(1, std::memory_order_relaxed);
        c.backend->spawn(c.group, t);
    }
    c.backend->wait(c.group);
}

// Level-1 task: [begin, end) is a range of chunk indices.
inline void run_partition(Task& t)
{
    auto& c = context_of(t);
    c.executed.fetch_add(1, std::memory_order_relaxed);
    for (std::size_t chunk = t.begin; chunk < t.end; ++chunk) {
        Task& leaf = c.terminals[chunk];
        leaf.op = &run_terminal;
        leaf.ctx = &c;
        leaf.begin = chunk * c.grainsize;
        leaf.end = std::min(c.n, leaf.begin + c.grainsize);
        c.created.fetch_add(1, std::memory_order_relaxed);
        c.backend->spawn(c.group, leaf);
    }
}

inline void spawn_two_level(TaskForContext& c)
{
    const std::size_t chunks = chunk_count(c.n, c.grainsize);
    const std::size_t parts = 2 * static_cast<std::size_t>(c.backend->num_threads());
    c.terminals.resize(chunks);
    std::vector<Task> partitions(parts);
    for (std::size_t i = 0; i < parts; ++i) {
        Task& t = partitions[i];
        t.op = &run_partition;
        t.ctx = &c;
        t.begin = i * chunks / parts;
        t.end = (i + 1) * chunks / parts;
        c.created.fetch_add(1, std::memory_order_relaxed);
        c.backend->spawn(c.group, t);
    }
    c.backend->wait(c.group);
}

inline void run_bisect(Task& t)
{
    auto& c = context_of(t);
    c.executed.fetch_add(1, std::memory_order_relaxed);
    const std::size_t len = t.end - t.begin;
    if (len <= c.grainsize) {
        c.body(c.op, t.begin, t.end);
        return;
    }
    const std::size_t mid = t.begin + (len - len / 2);
    Task left{&run_bisect, &c, t.begin, mid};
    Task right{&run_bisect, &c, mid, t.end};
    TaskGroup children;
    c.created.fetch_add(2, std::memory_order_relaxed);
    c.backend->spawn(children, left);
    c.backend->spawn(children, right);
    c.backend->wait(children);
}

inline void spawn_hierarchical(TaskForContext& c)
{
    Task root{&run_bisect, &c, 0, c.n};
    c.created.fetch_add(1, std::memory_order_relaxed);
    c.backend->spawn(c.group, root);
    c.backend->wait(c.group);
}

template <class Op>
void apply_range(void* op, std::size_t begin, std::size_t end)
{
    auto& f = *static_cast<Op*>(op);
    for (std::size_t i = begin; i < end; ++i)
        f(i);
}

} // namespace detail

/// Applies op(i) for every i in [0, n) and returns when all applications are
/// done. The application order is unspecified except for the sequential
/// strategy or backend, which loops in index order on the caller without
/// creating tasks.
template <class Op>
TaskForStats task_for_index(Backend& backend, std::size_t n, Op&& op, TaskForOptions options = {})
{
    if (options.grainsize == 0)
        throw std::invalid_argument("grainsize must be positive");
    if (n == 0)
        return {};
    if (backend.sequential() || options.strategy == Strategy::sequential) {
        for (std::size_t i = 0; i < n; ++i)
            op(i);
        return {};
    }

    using OpT = std::remove_reference_t<Op>;
    detail::TaskForContext c{&backend, const_cast<void*>(static_cast<const void*>(&op)), &detail::apply_range<OpT>, n, options.grainsize};
    backend.run([&] {
        switch (options.strategy) {
        case Strategy::flat: detail::spawn_flat(c); break;
        case Strategy::two_level: detail::spawn_two_level(c); break;
        case Strategy::hierarchical: detail::spawn_hierarchical(c); break;
        case Strategy::sequential: break;
        }
    });
    return {c.created.load(std::memory_order_relaxed), c.executed.load(std::memory_order_relaxed)};
}

/// task_for over a caller-owned argument sequence: op(args[i]) for each i.
template <class Arg, class Op>
TaskForStats task_for(Backend& backend, std::span<Arg> args, Op&& op, TaskForOptions options = {})
{
    return task_for_index(backend, args.size(), [&](std::size_t i) { op(args[i]); }, options);
}

template <class Arg, class Op>
TaskForStats task_for(Backend& backend, std::vector<Arg>& args, Op&& op, TaskForOptions options = {})
{
    return task_for(backend, std::span<Arg>(args), std::forward<Op>(op), options);
}

} // namespace taskweave
