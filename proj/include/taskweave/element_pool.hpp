#pragma once

#include "config.hpp"
#include "scheduler.hpp"

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <new>
#include <stdexcept>
#include <vector>

namespace taskweave {

/// Append-only array with stable element addresses. Storage is a fixed
/// directory of lazily allocated chunks, so readers on other threads never
/// see a reallocation. get() returns nullptr for a slot whose chunk has not
/// been published yet.
template <class T, std::size_t ChunkBits = 12, std::size_t DirectorySize = 4096>
class ChunkedArray {
public:
    static constexpr std::size_t chunk_size = std::size_t{1} << ChunkBits;
    static constexpr std::size_t max_size = chunk_size * DirectorySize;

    ChunkedArray() : directory_(new std::atomic<T*>[DirectorySize]) {}

    ChunkedArray(ChunkedArray&& other) noexcept
        : directory_(std::move(other.directory_)),
          size_(other.size_.load(std::memory_order_relaxed))
    {
    }

    ChunkedArray& operator=(ChunkedArray&&) = delete;
    ChunkedArray(const ChunkedArray&) = delete;

    ~ChunkedArray()
    {
        if (!directory_)
            return;
        for (std::size_t i = 0; i < DirectorySize; ++i)
            delete[] directory_[i].load(std::memory_order_relaxed);
    }

    /// Reserves one slot; safe from any thread.
    std::size_t append()
    {
        const std::size_t i = size_.fetch_add(1, std::memory_order_relaxed);
        if (i >= max_size)
            throw std::length_error("chunked array capacity exhausted");
        ensure_chunk(i >> ChunkBits);
        return i;
    }

    /// Slot i, allocating its chunk if needed. For single-owner growth
    /// (element pool arenas) where the owner tracks its own size.
    T& materialize(std::size_t i)
    {
        if (i >= max_size)
            throw std::length_error("chunked array capacity exhausted");
        return ensure_chunk(i >> ChunkBits)[i & (chunk_size - 1)];
    }

    T* get(std::size_t i) const noexcept
    {
        if (i >= max_size)
            return nullptr;
        T* chunk = directory_[i >> ChunkBits].load(std::memory_order_acquire);
        return chunk ? chunk + (i & (chunk_size - 1)) : nullptr;
    }

    T& operator[](std::size_t i) const noexcept { return *get(i); }

    std::size_t size() const noexcept { return size_.load(std::memory_order_acquire); }

private:
    T* ensure_chunk(std::size_t c)
    {
        T* chunk = directory_[c].load(std::memory_order_acquire);
        if (chunk)
            return chunk;
        auto fresh = std::unique_ptr<T[]>(new T[chunk_size]());
        if (directory_[c].compare_exchange_strong(chunk, fresh.get(), std::memory_order_acq_rel, std::memory_order_acquire))
            return fresh.release();
        return chunk;
    }

    std::unique_ptr<std::atomic<T*>[]> directory_;
    std::atomic<std::size_t> size_{0};
};

/// Global slot id: arena owner in the top 8 bits, arena index below.
using SlotId = std::uint32_t;
inline constexpr SlotId no_slot = std::numeric_limits<SlotId>::max();

inline constexpr int pool_max_workers = 255;
inline constexpr unsigned slot_index_bits = 24;

constexpr SlotId make_slot(int worker, std::uint32_t index) noexcept
{
    return (static_cast<SlotId>(worker) << slot_index_bits) | index;
}
constexpr int slot_worker(SlotId s) noexcept { return static_cast<int>(s >> slot_index_bits); }
constexpr std::uint32_t slot_index(SlotId s) noexcept { return s & ((1u << slot_index_bits) - 1); }

/// Slot plus the generation it had when the reference was taken. Odd
/// generations are live, even ones dead, so a reference to a freed (or
/// freed and reused) slot no longer matches.
struct Handle {
    SlotId slot = no_slot;
    std::uint32_t gen = 0;

    bool is_null() const noexcept { return slot == no_slot; }
    friend bool operator==(const Handle&, const Handle&) = default;

    std::uint64_t pack() const noexcept { return (std::uint64_t{gen} << 32) | slot; }
    static Handle unpack(std::uint64_t w) noexcept { return {static_cast<SlotId>(w & 0xffffffffu), static_cast<std::uint32_t>(w >> 32)}; }
};

inline constexpr Handle null_handle{};

/// Per-worker element pool. Each worker allocates from its own free list,
/// falling back to fresh slots of its own arena; a freed slot joins the free
/// list of the worker that frees it. No synchronization on either path.
template <class T>
class ElementPool {
public:
    struct Slot {
        std::atomic<std::uint32_t> gen{0};
        T value{};
    };

    explicit ElementPool(int nworkers)
    {
        if (nworkers < 1 || nworkers > pool_max_workers)
            throw std::invalid_argument("element pool worker count out of range");
        workers_.reserve(static_cast<std::size_t>(nworkers));
        for (int i = 0; i < nworkers; ++i)
            workers_.push_back(std::make_unique<Arena>());
    }

    int workers() const noexcept { return static_cast<int>(workers_.size()); }

    Handle alloc(ThreadId tid)
    {
        Arena& a = arena(tid);
        ConfinementGuard guard(a);
        SlotId id;
        if (!a.free_list.empty()) {
            id = a.free_list.back();
            a.free_list.pop_back();
        } else {
            if (a.next_index >= (1u << slot_index_bits))
                throw std::bad_alloc();
            const std::uint32_t index = a.next_index;
            a.slots.materialize(index);
            ++a.next_index;
            a.published.store(a.next_index, std::memory_order_release);
            id = make_slot(tid, index);
        }
        Slot& s = slot(id);
        const std::uint32_t gen = s.gen.load(std::memory_order_relaxed) + 1;
        s.gen.store(gen, std::memory_order_release);
        a.allocs.fetch_add(1, std::memory_order_relaxed);
        return {id, gen};
    }

    void free(ThreadId tid, SlotId id)
    {
        Arena& a = arena(tid);
        ConfinementGuard guard(a);
        Slot& s = slot(id);
        const std::uint32_t gen = s.gen.load(std::memory_order_relaxed);
        TASKWEAVE_CHECK((gen & 1u) == 1u, "double free of a pool slot");
        s.gen.store(gen + 1, std::memory_order_release);
        a.free_list.push_back(id);
        a.frees.fetch_add(1, std::memory_order_relaxed);
    }

    /// Null if the slot was never published.
    Slot* try_slot(SlotId id) const noexcept
    {
        const int w = slot_worker(id);
        if (id == no_slot || w >= workers())
            return nullptr;
        return workers_[static_cast<std::size_t>(w)]->slots.get(slot_index(id));
    }

    Slot& slot(SlotId id) const noexcept { return *try_slot(id); }
    T& operator[](SlotId id) const noexcept { return slot(id).value; }

    std::uint32_t generation(SlotId id) const noexcept
    {
        const Slot* s = try_slot(id);
        return s ? s->gen.load(std::memory_order_acquire) : 0;
    }

    bool is_live(Handle h) const noexcept { return !h.is_null() && (h.gen & 1u) && generation(h.slot) == h.gen; }
    bool is_live(SlotId id) const noexcept { return (generation(id) & 1u) == 1u; }

    Handle current(SlotId id) const noexcept { return {id, generation(id)}; }

    std::uint64_t allocs() const noexcept { return sum(&Arena::allocs); }
    std::uint64_t frees() const noexcept { return sum(&Arena::frees); }
    std::uint64_t live_count() const noexcept { return allocs() - frees(); }

    /// Visits live slots in slot-id order. Only at quiescent points.
    template <class F>
    void for_each_live(F&& fn) const
    {
        for (std::size_t w = 0; w < workers_.size(); ++w) {
            const Arena& a = *workers_[w];
            const std::uint32_t n = a.published.load(std::memory_order_acquire);
            for (std::uint32_t i = 0; i < n; ++i) {
                const SlotId id = make_slot(static_cast<int>(w), i);
                const Slot& s = slot(id);
                const std::uint32_t gen = s.gen.load(std::memory_order_acquire);
                if (gen & 1u)
                    fn(Handle{id, gen}, s.value);
            }
        }
    }

private:
    struct alignas(cache_line) Arena {
        ChunkedArray<Slot> slots;
        std::uint32_t next_index = 0;
        std::atomic<std::uint32_t> published{0};
        std::vector<SlotId> free_list;
        std::atomic<std::uint64_t> allocs{0};
        std::atomic<std::uint64_t> frees{0};
        std::atomic<bool> busy{false};
    };

    // Detects two threads touching one worker's free list at once.
    struct ConfinementGuard {
        explicit ConfinementGuard(Arena& a) : arena(a)
        {
            if constexpr (checks_enabled) {
                const bool was_busy = arena.busy.exchange(true, std::memory_order_acquire);
                TASKWEAVE_CHECK(!was_busy, "element pool free list used by two threads");
            }
        }
        ~ConfinementGuard()
        {
            if constexpr (checks_enabled)
                arena.busy.store(false, std::memory_order_release);
        }
        Arena& arena;
    };

    Arena& arena(ThreadId tid)
    {
        if (tid < 0 || tid >= workers())
            throw std::out_of_range("element pool: thread id out of range");
        return *workers_[static_cast<std::size_t>(tid)];
    }

    std::uint64_t sum(std::atomic<std::uint64_t> Arena::*field) const noexcept
    {
        std::uint64_t total = 0;
        for (const auto& a : workers_)
            total += ((*a).*field).load(std::memory_order_relaxed);
        return total;
    }

    std::vector<std::unique_ptr<Arena>> workers_;
};

} // namespace taskweave
