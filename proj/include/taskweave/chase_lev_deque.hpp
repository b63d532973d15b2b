#pragma once

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <type_traits>
#include <vector>

namespace taskweave {

/// Circular, growable work-stealing deque (Chase-Lev, with the C11 memory
/// orderings of Le et al.). One owner thread calls push() and pop() at the
/// top end; any number of thieves call steal() at the bottom end.
///
/// The buffer doubles when full. Retired buffers stay alive until the deque
/// is destroyed, so a thief holding a stale buffer pointer can never read
/// freed memory.
template <class T>
class ChaseLevDeque {
    static_assert(std::is_trivially_copyable_v<T>, "slots are copied through std::atomic<T>");
    static_assert(std::atomic<T>::is_always_lock_free, "slot type must be lock-free atomic");

    struct Buffer {
        explicit Buffer(std::int64_t cap) : capacity(cap), mask(cap - 1), slots(new std::atomic<T>[static_cast<std::size_t>(cap)]) {}

        T get(std::int64_t i) const noexcept { return slots[static_cast<std::size_t>(i & mask)].load(std::memory_order_relaxed); }
        void put(std::int64_t i, T v) noexcept { slots[static_cast<std::size_t>(i & mask)].store(v, std::memory_order_relaxed); }

        std::int64_t capacity;
        std::int64_t mask;
        std::unique_ptr<std::atomic<T>[]> slots;
    };

public:
    explicit ChaseLevDeque(std::size_t initial_capacity = 256)
    {
        std::int64_t cap = 2;
        while (cap < static_cast<std::int64_t>(initial_capacity))
            cap <<= 1;
        buffers_.push_back(std::make_unique<Buffer>(cap));
        buffer_.store(buffers_.back().get(), std::memory_order_relaxed);
    }

    ChaseLevDeque(const ChaseLevDeque&) = delete;
    ChaseLevDeque& operator=(const ChaseLevDeque&) = delete;

    // Owner only.
    void push(T value)
    {
        const std::int64_t t = top_.load(std::memory_order_relaxed);
        const std::int64_t b = bottom_.load(std::memory_order_acquire);
        Buffer* buf = buffer_.load(std::memory_order_relaxed);
        if (t - b > buf->capacity - 1)
            buf = grow(buf, b, t);
        buf->put(t, value);
        std::atomic_thread_fence(std::memory_order_release);
        top_.store(t + 1, std::memory_order_relaxed);
    }

    // Owner only. Returns the most recently pushed element still present.
    std::optional<T> pop()
    {
        const std::int64_t t = top_.load(std::memory_order_relaxed) - 1;
        Buffer* buf = buffer_.load(std::memory_order_relaxed);
        top_.store(t, std::memory_order_relaxed);
        std::atomic_thread_fence(std::memory_order_seq_cst);
        std::int64_t b = bottom_.load(std::memory_order_relaxed);
        if (b > t) {
            top_.store(t + 1, std::memory_order_relaxed);
            return std::nullopt;
        }
        T value = buf->get(t);
        if (b == t) {
            // Last element: race against thieves for it.
            const bool won = bottom_.compare_exchange_strong(b, b + 1, std::memory_order_seq_cst, std::memory_order_relaxed);
            top_.store(t + 1, std::memory_order_relaxed);
            if (!won)
                return std::nullopt;
        }
        return value;
    }

    // Any thread. Takes the oldest element; empty on an empty deque or a lost race.
    std::optional<T> steal()
    {
        std::int64_t b = bottom_.load(std::memory_order_acquire);
        std::atomic_thread_fence(std::memory_order_seq_cst);
        const std::int64_t t = top_.load(std::memory_order_acquire);
        if (b >= t)
            return std::nullopt;
        Buffer* buf = buffer_.load(std::memory_order_acquire);
        T value = buf->get(b);
        if (!bottom_.compare_exchange_strong(b, b + 1, std::memory_order_seq_cst, std::memory_order_relaxed))
            return std::nullopt;
        return value;
    }

    // Approximate when called concurrently.
    std::size_t size() const noexcept
    {
        const std::int64_t t = top_.load(std::memory_order_relaxed);
        const std::int64_t b = bottom_.load(std::memory_order_relaxed);
        return t > b ? static_cast<std::size_t>(t - b) : 0;
    }

    bool empty() const noexcept { return size() == 0; }

    std::size_t capacity() const noexcept
    {
        return static_cast<std::size_t>(buffer_.load(std::memory_order_relaxed)->capacity);
    }

private:
    Buffer* grow(Buffer* old, std::int64_t b, std::int64_t t)
    {
        auto bigger = std::make_unique<Buffer>(old->capacity * 2);
        for (std::int64_t i = b; i < t; ++i)
            bigger->put(i, old->get(i));
        Buffer* raw = bigger.get();
        buffers_.push_back(std::move(bigger));
        buffer_.store(raw, std::memory_order_release);
        return raw;
    }

    // top_: owner end. bottom_: thief end. Both only ever increase except for
    // the owner's transient decrement in pop().
    alignas(64) std::atomic<std::int64_t> top_{0};
    alignas(64) std::atomic<std::int64_t> bottom_{0};
    alignas(64) std::atomic<Buffer*> buffer_{nullptr};
    std::vector<std::unique_ptr<Buffer>> buffers_; // owner-only; includes retired buffers
};

} // namespace taskweave
