#pragma once

#include <cstdio>
#include <cstdlib>
#include <new>

// Hard-failure checks for programming errors (double unlock, double free,
// free-list confinement). On by default unless NDEBUG is set.
#ifndef TASKWEAVE_ENABLE_CHECKS
#ifdef NDEBUG
#define TASKWEAVE_ENABLE_CHECKS 0
#else
#define TASKWEAVE_ENABLE_CHECKS 1
#endif
#endif

namespace taskweave {

inline constexpr bool checks_enabled = TASKWEAVE_ENABLE_CHECKS != 0;

#ifdef __cpp_lib_hardware_interference_size
inline constexpr std::size_t cache_line = std::hardware_destructive_interference_size;
#else
inline constexpr std::size_t cache_line = 64;
#endif

[[noreturn]] inline void check_failed(const char* what, const char* file, int line) noexcept
{
    std::fprintf(stderr, "taskweave: check failed: %s (%s:%d)\n", what, file, line);
    std::abort();
}

inline void cpu_relax() noexcept
{
#if defined(__x86_64__) || defined(__i386__)
    __builtin_ia32_pause();
#elif defined(__aarch64__)
    asm volatile("yield");
#endif
}

} // namespace taskweave

#if TASKWEAVE_ENABLE_CHECKS
#define TASKWEAVE_CHECK(cond, msg) \
    do { if (!(cond)) ::taskweave::check_failed(msg, __FILE__, __LINE__); } while (0)
#else
#define TASKWEAVE_CHECK(cond, msg) do { (void)sizeof(cond); } while (0)
#endif
