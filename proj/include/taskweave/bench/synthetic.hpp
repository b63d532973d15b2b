#pragma once

#include "../backend.hpp"
#include "../task_for.hpp"
#include "record.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>

namespace taskweave::bench {

using Clock = std::chrono::steady_clock;

inline std::uint64_t elapsed_ns(Clock::time_point since)
{
    const auto ns = std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - since).count();
    return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(ns));
}

/// Busy loop calibrated against the steady clock.
class SpinLoop {
public:
    static void spin_iterations(std::uint64_t iters) noexcept
    {
        for (std::uint64_t i = 0; i < iters; ++i)
            asm volatile("" ::: "memory");
    }

    static SpinLoop calibrate(std::chrono::milliseconds budget = std::chrono::milliseconds(20))
    {
        std::uint64_t iters = 1 << 16;
        double best = 0.0;
        const auto deadline = Clock::now() + budget;
        while (Clock::now() < deadline) {
            const auto t0 = Clock::now();
            spin_iterations(iters);
            const double ns = static_cast<double>(elapsed_ns(t0));
            best = std::max(best, static_cast<double>(iters) / ns);
            if (ns < 1e6)
                iters *= 2;
        }
        return SpinLoop(best > 0.0 ? best : 1.0);
    }

    explicit SpinLoop(double iterations_per_ns) : per_ns_(iterations_per_ns) {}

    double iterations_per_ns() const noexcept { return per_ns_; }

    void spin(std::uint64_t ns) const noexcept
    {
        if (ns > 0)
            spin_iterations(static_cast<std::uint64_t>(std::llround(per_ns_ * static_cast<double>(ns))));
    }

    /// Relative error of spin(target) against the clock, best of `trials`.
    double relative_error(std::chrono::nanoseconds target = std::chrono::milliseconds(2), int trials = 5) const
    {
        double best = 1e300;
        for (int i = 0; i < trials; ++i) {
            const auto t0 = Clock::now();
            spin(static_cast<std::uint64_t>(target.count()));
            const double got = static_cast<double>(elapsed_ns(t0));
            best = std::min(best, std::abs(got - static_cast<double>(target.count())) / static_cast<double>(target.count()));
        }
        return best;
    }

private:
    double per_ns_;
};

struct SyntheticSpec {
    std::size_t n = 0;
    std::uint64_t cost_ns = 0;
    std::size_t grainsize = 1;
    Strategy strategy = Strategy::two_level;
};

/// task_for over n applications of a spin of cost_ns. When `tally` is
/// given, application i increments tally[i].
inline BenchRecord run_synthetic(Backend& backend, const SyntheticSpec& spec, const SpinLoop& spin,
                                 std::span<std::atomic<std::uint32_t>> tally = {})
{
    const std::uint64_t steals_before = backend.steal_attempts();
    const auto t0 = Clock::now();
    TaskForStats st;
    if (tally.empty()) {
        st = task_for_index(backend, spec.n, [&](std::size_t) { spin.spin(spec.cost_ns); }, {spec.grainsize, spec.strategy});
    } else {
        st = task_for_index(backend, spec.n, [&](std::size_t i) {
            spin.spin(spec.cost_ns);
            tally[i].fetch_add(1, std::memory_order_relaxed);
        }, {spec.grainsize, spec.strategy});
    }
    BenchRecord r;
    r.wall_time_ns = elapsed_ns(t0);
    r.workload = "synthetic";
    r.backend = std::string(to_string(backend.kind()));
    r.strategy = std::string(to_string(spec.strategy));
    r.threads = backend.num_threads();
    r.grainsize = spec.grainsize;
    r.tasks_created = st.tasks_created;
    r.tasks_executed = st.tasks_executed;
    r.steal_attempts = backend.steal_attempts() - steals_before;
    return r;
}

} // namespace taskweave::bench
