#pragma once

#include "backend.hpp"
#include "mesh.hpp"
#include "spec_lock.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <thread>
#include <vector>

namespace taskweave {

/// A triangle is bad when it is larger than max_area or has an angle below
/// min_angle_deg.
struct RefineCriteria {
    double max_area = std::numeric_limits<double>::infinity();
    double min_angle_deg = 0.0;

    bool vacuous() const noexcept { return std::isinf(max_area) && min_angle_deg <= 0.0; }
};

inline bool is_bad(Point a, Point b, Point c, const RefineCriteria& criteria) noexcept
{
    if (signed_area(a, b, c) > criteria.max_area)
        return true;
    return criteria.min_angle_deg > 0.0 && min_angle_deg(a, b, c) < criteria.min_angle_deg;
}

/// Stale triangles are not bad: they no longer exist.
inline bool is_bad(const Mesh& mesh, Handle t, const RefineCriteria& criteria) noexcept
{
    if (!mesh.is_live(t))
        return false;
    const auto c = mesh.corners(t.slot);
    return is_bad(c[0], c[1], c[2], criteria);
}

/// Edge a->b of a cavity triangle (counterclockwise as seen from inside) and
/// the triangle across it, null on the domain boundary.
struct CavityEdge {
    VertexId a;
    VertexId b;
    Handle outside;
};

struct Cavity {
    std::vector<Handle> tris;
    std::vector<CavityEdge> boundary;
    std::vector<VertexId> verts;
    /// Domain boundary edge that contains the insertion point, if any. It is
    /// split instead of being fanned.
    std::optional<CavityEdge> split_edge;
};

namespace detail {

inline std::optional<std::array<VertexId, 3>> speculative_vertices(const Mesh& mesh, Handle t) noexcept
{
    if (!mesh.is_live(t))
        return std::nullopt;
    const auto v = mesh.vertices(t.slot);
    for (VertexId x : v)
        if (!mesh.vertex_exists(x))
            return std::nullopt;
    return v;
}

inline bool contains(const std::vector<Handle>& v, Handle h) noexcept
{
    return std::find(v.begin(), v.end(), h) != v.end();
}

inline bool strictly_between(Point a, Point b, Point p) noexcept
{
    const double t = dot(p - a, b - a);
    return t > 0.0 && t < squared_length(b - a);
}

} // namespace detail

/// Straight visibility walk from `start` towards the triangle containing p
/// (possibly on its boundary). Safe to run without locks: every read is
/// atomic and the caller revalidates the result after locking it. Returns
/// null when p lies outside the domain or the walk sees inconsistent data.
inline Handle locate(const Mesh& mesh, Point p, Handle start, std::size_t max_steps = 1u << 20)
{
    Handle t = start;
    for (std::size_t step = 0; step < max_steps; ++step) {
        const auto v = detail::speculative_vertices(mesh, t);
        if (!v)
            return null_handle;
        const std::array<Point, 3> c{mesh.point((*v)[0]), mesh.point((*v)[1]), mesh.point((*v)[2])};
        int exit_edge = -1;
        for (int k = 0; k < 3; ++k) {
            const int i = static_cast<int>((step + static_cast<std::size_t>(k)) % 3);
            if (orient2d(c[static_cast<std::size_t>((i + 1) % 3)], c[static_cast<std::size_t>((i + 2) % 3)], p) < 0.0) {
                exit_edge = i;
                break;
            }
        }
        if (exit_edge < 0)
            return t;
        const Handle next = mesh.neighbor(t.slot, exit_edge);
        if (next.is_null())
            return null_handle;
        t = next;
    }
    return null_handle;
}

/// Grows the Bowyer-Watson cavity of p from `seed` (which must contain p):
/// breadth-first over adjacency, collecting every triangle whose circumcircle
/// strictly contains p, then extending it until p sees every boundary edge.
/// `admit(verts)` is called before a triangle joins; returning false aborts
/// the growth. The caller must make the triangles it reads stable, which the
/// refinement does by locking their vertices in `admit`.
template <class Admit>
std::optional<Cavity> grow_cavity(const Mesh& mesh, Point p, Handle seed, Admit&& admit, double eps = default_in_circle_eps)
{
    Cavity cav;
    const auto seed_verts = detail::speculative_vertices(mesh, seed);
    if (!seed_verts || !admit(*seed_verts))
        return std::nullopt;
    cav.tris.push_back(seed);

    auto add = [&](Handle n) -> bool {
        const auto nv = detail::speculative_vertices(mesh, n);
        if (!nv || !admit(*nv))
            return false;
        cav.tris.push_back(n);
        return true;
    };

    for (std::size_t head = 0; head < cav.tris.size(); ++head) {
        const Handle t = cav.tris[head];
        for (int i = 0; i < 3; ++i) {
            const Handle n = mesh.neighbor(t.slot, i);
            if (n.is_null() || detail::contains(cav.tris, n))
                continue;
            const auto nv = detail::speculative_vertices(mesh, n);
            if (!nv)
                return std::nullopt;
            const auto c = std::array<Point, 3>{mesh.point((*nv)[0]), mesh.point((*nv)[1]), mesh.point((*nv)[2])};
            if (in_circle_unchecked(c[0], c[1], c[2], p, eps) && !add(n))
                return std::nullopt;
        }
    }

    // Boundary extraction, repeated while some boundary edge is not visible
    // from p (possible only through rounding in the in-circle test).
    for (;;) {
        cav.boundary.clear();
        cav.split_edge.reset();
        std::optional<Handle> extend;
        for (const Handle t : cav.tris) {
            const auto v = mesh.vertices(t.slot);
            for (int i = 0; i < 3; ++i) {
                const Handle n = mesh.neighbor(t.slot, i);
                if (!n.is_null() && detail::contains(cav.tris, n))
                    continue;
                const CavityEdge e{v[static_cast<std::size_t>((i + 1) % 3)], v[static_cast<std::size_t>((i + 2) % 3)], n};
                const Point a = mesh.point(e.a), b = mesh.point(e.b);
                const double o = orient2d(a, b, p);
                if (o > 0.0) {
                    cav.boundary.push_back(e);
                } else if (n.is_null()) {
                    if (o == 0.0 && detail::strictly_between(a, b, p) && !cav.split_edge)
                        cav.split_edge = e;
                    else
                        return std::nullopt;
                } else if (!extend) {
                    extend = n;
                }
            }
        }
        if (!extend)
            break;
        if (!add(*extend))
            return std::nullopt;
    }

    for (const Handle t : cav.tris)
        for (VertexId x : mesh.vertices(t.slot))
            if (std::find(cav.verts.begin(), cav.verts.end(), x) == cav.verts.end())
                cav.verts.push_back(x);
    for (VertexId x : cav.verts)
        if (mesh.point(x) == p)
            return std::nullopt;
    return cav;
}

/// Cavity of p without any locking. Only for single-threaded use.
/// Returns nothing for a stale seed.
inline std::optional<Cavity> find_cavity(const Mesh& mesh, Point p, Handle seed, double eps = default_in_circle_eps)
{
    return grow_cavity(mesh, p, seed, [](const std::array<VertexId, 3>&) { return true; }, eps);
}

namespace detail {

/// A domain boundary edge of the cavity whose diametral circle strictly
/// contains p, with the cavity triangle it belongs to.
inline std::optional<std::pair<CavityEdge, Handle>> encroached_edge(const Mesh& mesh, Point p, const Cavity& cav)
{
    for (const Handle t : cav.tris) {
        const auto v = mesh.vertices(t.slot);
        for (int i = 0; i < 3; ++i) {
            if (!mesh.neighbor(t.slot, i).is_null())
                continue;
            const CavityEdge e{v[static_cast<std::size_t>((i + 1) % 3)], v[static_cast<std::size_t>((i + 2) % 3)], null_handle};
            if (dot(mesh.point(e.a) - p, mesh.point(e.b) - p) < 0.0)
                return std::pair{e, t};
        }
    }
    return std::nullopt;
}

} // namespace detail

/// Bowyer-Watson kernel: deletes the cavity, appends p and connects it to
/// every boundary edge. The caller must hold the locks of cavity.verts; if
/// `locks` is given the new vertex is locked into it as well.
inline std::vector<Handle> bowyer_watson_insert(Mesh& mesh, Point p, const Cavity& cavity, ThreadId tid, LockSet* locks = nullptr)
{
    const VertexId pv = mesh.add_vertex(p);
    if (locks)
        locks->acquire(mesh.lock(pv), tid);

    auto& pool = mesh.pool();
    std::vector<Handle> fan;
    fan.reserve(cavity.boundary.size());
    for (const CavityEdge& e : cavity.boundary) {
        const Handle t = pool.alloc(tid);
        mesh.set_vertices(t.slot, e.a, e.b, pv);
        mesh.set_neighbor(t.slot, 2, e.outside);
        if (!e.outside.is_null()) {
            const auto ov = mesh.vertices(e.outside.slot);
            for (int j = 0; j < 3; ++j)
                if (ov[static_cast<std::size_t>(j)] != e.a && ov[static_cast<std::size_t>(j)] != e.b)
                    mesh.set_neighbor(e.outside.slot, j, t);
        }
        fan.push_back(t);
    }
    // Fan triangle i is (a_i, b_i, p): the edge b_i-p is shared with the
    // triangle starting at b_i, the edge p-a_i with the one ending at a_i.
    for (std::size_t i = 0; i < fan.size(); ++i) {
        Handle across_bp = null_handle;
        Handle across_pa = null_handle;
        for (std::size_t j = 0; j < fan.size(); ++j) {
            if (cavity.boundary[j].a == cavity.boundary[i].b)
                across_bp = fan[j];
            if (cavity.boundary[j].b == cavity.boundary[i].a)
                across_pa = fan[j];
        }
        mesh.set_neighbor(fan[i].slot, 0, across_bp);
        mesh.set_neighbor(fan[i].slot, 1, across_pa);
    }
    for (const Handle t : cavity.tris)
        pool.free(tid, t.slot);
    return fan;
}

/// Serial insertion of p (used for building inputs). Returns false if p is
/// outside the domain or duplicates a vertex.
inline bool insert_point(Mesh& mesh, Point p, ThreadId tid = 0)
{
    const auto live = mesh.live_triangles();
    if (live.empty())
        return false;
    const Handle seed = locate(mesh, p, live.front());
    if (seed.is_null())
        return false;
    auto cav = find_cavity(mesh, p, seed);
    if (!cav)
        return false;
    bowyer_watson_insert(mesh, p, *cav, tid);
    return true;
}

/// Inserts `count` uniformly distributed interior points.
inline void insert_random_points(Mesh& mesh, std::size_t count, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    const Rect& d = mesh.domain();
    std::uniform_real_distribution<double> ux(d.lo.x, d.hi.x), uy(d.lo.y, d.hi.y);
    for (std::size_t i = 0; i < count; ++i) {
        Point p{ux(rng), uy(rng)};
        if (d.on_boundary(p))
            continue;
        insert_point(mesh, p);
    }
}

/// Circumcenter, snapped onto the domain boundary when it falls within
/// rounding distance of it; midpoint of the longest edge when the
/// circumcenter lies outside the domain.
inline Point steiner_point(const Rect& domain, Point a, Point b, Point c) noexcept
{
    const Point cc = circumcenter(a, b, c);
    const double tol = 1e-12 * std::max(domain.width(), domain.height());
    if (cc.x >= domain.lo.x - tol && cc.x <= domain.hi.x + tol && cc.y >= domain.lo.y - tol && cc.y <= domain.hi.y + tol) {
        auto snap = [tol](double v, double lo, double hi) {
            if (std::abs(v - lo) <= tol)
                return lo;
            if (std::abs(v - hi) <= tol)
                return hi;
            return v;
        };
        return {snap(cc.x, domain.lo.x, domain.hi.x), snap(cc.y, domain.lo.y, domain.hi.y)};
    }
    const auto l = squared_edge_lengths(a, b, c);
    if (l[0] >= l[1] && l[0] >= l[2])
        return 0.5 * (b + c);
    if (l[1] >= l[2])
        return 0.5 * (c + a);
    return 0.5 * (a + b);
}

enum class RefineOutcome { inserted, skipped, aborted };

/// Speculative refinement of one element. Stale or no longer bad elements
/// are skipped. Any lock conflict releases everything acquired and returns
/// aborted with the mesh untouched. On success the triangles created by the
/// insertion that are still bad are appended to `new_bad`.
inline RefineOutcome refine_element(Mesh& mesh, Handle el, const RefineCriteria& criteria, ThreadId tid,
                                    std::vector<Handle>& new_bad, bool leak_locks = false)
{
    const auto ev = detail::speculative_vertices(mesh, el);
    if (!ev)
        return RefineOutcome::skipped;

    LockSet locks;
    auto lock_tri = [&](const std::array<VertexId, 3>& v) {
        const std::array<SpecLock*, 3> l{&mesh.lock(v[0]), &mesh.lock(v[1]), &mesh.lock(v[2])};
        return locks.acquire_all(l, tid);
    };
    auto fail = [&](RefineOutcome o) {
        locks.release_all(tid);
        return o;
    };

    if (!lock_tri(*ev))
        return RefineOutcome::aborted;
    if (!mesh.is_live(el))
        return fail(RefineOutcome::skipped);
    if (mesh.vertices(el.slot) != *ev)
        return fail(RefineOutcome::aborted);

    const auto c = mesh.corners(el.slot);
    if (!is_bad(c[0], c[1], c[2], criteria))
        return fail(RefineOutcome::skipped);

    Point p = steiner_point(mesh.domain(), c[0], c[1], c[2]);
    const Handle seed = locate(mesh, p, el);
    const auto sv = detail::speculative_vertices(mesh, seed);
    if (!sv || !lock_tri(*sv))
        return fail(RefineOutcome::aborted);
    if (!mesh.is_live(seed) || mesh.vertices(seed.slot) != *sv)
        return fail(RefineOutcome::aborted);
    {
        const auto s = mesh.corners(seed.slot);
        for (int i = 0; i < 3; ++i)
            if (orient2d(s[static_cast<std::size_t>((i + 1) % 3)], s[static_cast<std::size_t>((i + 2) % 3)], p) < 0.0)
                return fail(RefineOutcome::aborted);
    }

    auto cavity = grow_cavity(mesh, p, seed, lock_tri);
    if (!cavity)
        return fail(RefineOutcome::aborted);

    // A point inside the diametral circle of a domain boundary edge is
    // replaced by that edge's midpoint; otherwise slivers pile up against
    // the boundary and refinement with an angle bound need not terminate.
    if (!cavity->split_edge) {
        if (const auto enc = detail::encroached_edge(mesh, p, *cavity)) {
            const Point mid = 0.5 * (mesh.point(enc->first.a) + mesh.point(enc->first.b));
            cavity = grow_cavity(mesh, mid, enc->second, lock_tri);
            if (!cavity)
                return fail(RefineOutcome::aborted);
            p = mid;
        }
    }

    const auto fan = bowyer_watson_insert(mesh, p, *cavity, tid, &locks);
    for (const Handle t : fan)
        if (is_bad(mesh, t, criteria))
            new_bad.push_back(t);
    if (is_bad(mesh, el, criteria))
        new_bad.push_back(el);

    if (leak_locks)
        locks.leak();
    else
        locks.release_all(tid);
    return RefineOutcome::inserted;
}

struct QueuedElement {
    Handle tri;
    std::uint32_t retries = 0;
};

/// One element queue per worker. `ready` is consumed by the schedule task of
/// that index; `incoming` is filled only by refine tasks running on the
/// owning worker. merge() moves incoming into ready and is called only at
/// quiescent points.
class ThreadQueues {
public:
    struct alignas(cache_line) Lane {
        std::deque<QueuedElement> ready;
        std::vector<QueuedElement> incoming;
    };

    explicit ThreadQueues(int n)
    {
        for (int i = 0; i < n; ++i)
            lanes_.push_back(std::make_unique<Lane>());
    }

    int size() const noexcept { return static_cast<int>(lanes_.size()); }
    Lane& lane(int i) noexcept { return *lanes_[static_cast<std::size_t>(i)]; }

    void merge()
    {
        for (auto& l : lanes_) {
            l->ready.insert(l->ready.end(), l->incoming.begin(), l->incoming.end());
            l->incoming.clear();
        }
    }

    bool empty() const noexcept
    {
        return std::all_of(lanes_.begin(), lanes_.end(), [](const auto& l) { return l->ready.empty() && l->incoming.empty(); });
    }

    std::size_t total() const noexcept
    {
        std::size_t n = 0;
        for (const auto& l : lanes_)
            n += l->ready.size() + l->incoming.size();
        return n;
    }

private:
    std::vector<std::unique_ptr<Lane>> lanes_;
};

struct RefineOptions {
    std::size_t schedule_limit = 512;
    /// Aborts of one element before it is handed to the driver's serial pass.
    std::uint32_t max_retries = 32;
    /// Upper bound of the random pause after an abort.
    std::chrono::microseconds backoff_jitter{64};
    std::uint64_t seed = 1;
    /// Fault injection: the first successful insertion keeps its locks.
    bool fault_skip_release_once = false;
};

struct RefineStats {
    std::uint64_t rounds = 0;
    std::uint64_t schedule_tasks = 0;
    std::uint64_t refine_tasks = 0;
    std::uint64_t tasks_executed = 0;
    std::uint64_t inserted = 0;
    std::uint64_t skipped = 0;
    std::uint64_t aborts = 0;
    std::uint64_t retries = 0;
    std::uint64_t deferred = 0;   // elements finished by the driver after max_retries
    std::uint64_t stalls = 0;     // rounds with work but zero successes
    std::uint64_t dropped = 0;    // elements the serial pass could not refine

    std::uint64_t tasks_created() const noexcept { return schedule_tasks + refine_tasks; }
};

/// Driver for speculative refinement. Each round launches one schedule task
/// per queue index; a schedule task turns up to schedule_limit elements of
/// its queue into refine tasks; refine tasks push the bad triangles they
/// create onto the queue of the worker running them. Rounds repeat until
/// every queue is empty.
class Refinement {
public:
    Refinement(Backend& backend, Mesh& mesh, RefineCriteria criteria, RefineOptions options = {})
        : backend_(backend), mesh_(mesh), criteria_(criteria), options_(options), queues_(backend.num_threads())
    {
        if (options_.schedule_limit == 0)
            throw std::invalid_argument("schedule_limit must be positive");
        if (mesh.workers() < backend.num_threads())
            throw std::invalid_argument("mesh pool has fewer arenas than the backend has workers");
        for (int i = 0; i < backend.num_threads(); ++i)
            workers_.push_back(std::make_unique<WorkerState>(options_.seed * 0x9e3779b97f4a7c15ULL + static_cast<std::uint64_t>(i)));
        fault_armed_.store(options_.fault_skip_release_once, std::memory_order_relaxed);
    }

    ThreadQueues& queues() noexcept { return queues_; }

    /// Seeds queue 0 with every bad triangle of the mesh.
    void seed_bad_elements()
    {
        for (const Handle& h : mesh_.live_triangles())
            if (is_bad(mesh_, h, criteria_))
                queues_.lane(0).ready.push_back({h, 0});
    }

    RefineStats run()
    {
        seed_bad_elements();
        while (!queues_.empty() || !deferred_.empty()) {
            ++stats_.rounds;
            const std::uint64_t refine_before = refine_tasks_.load();
            successes_.store(0);
            {
                TaskGroup group;
                for (int q = 0; q < queues_.size(); ++q) {
                    ++stats_.schedule_tasks;
                    backend_.spawn_fn(group, [this, q, &group] {
                        executed_.fetch_add(1, std::memory_order_relaxed);
                        schedule_task(q, group);
                    });
                }
                backend_.wait(group);
            }
            queues_.merge();
            const bool had_work = refine_tasks_.load() != refine_before;
            if (!deferred_.empty()) {
                std::deque<QueuedElement> work(deferred_.begin(), deferred_.end());
                stats_.deferred += deferred_.size();
                deferred_.clear();
                serial_drain(work);
            }
            if (had_work && successes_.load() == 0 && !queues_.empty()) {
                ++stats_.stalls;
                std::deque<QueuedElement> work;
                for (int q = 0; q < queues_.size(); ++q) {
                    auto& lane = queues_.lane(q);
                    work.insert(work.end(), lane.ready.begin(), lane.ready.end());
                    lane.ready.clear();
                }
                serial_drain(work);
            }
        }
        stats_.refine_tasks = refine_tasks_.load();
        stats_.tasks_executed = executed_.load();
        for (const auto& w : workers_) {
            stats_.inserted += w->inserted;
            stats_.skipped += w->skipped;
            stats_.aborts += w->aborts;
            stats_.retries += w->retries;
        }
        return stats_;
    }

    /// Pops up to schedule_limit elements of queue `q` and creates one refine
    /// task per element in `group`. Must run inside `group`'s execution.
    void schedule_task(int q, TaskGroup& group)
    {
        auto& lane = queues_.lane(q);
        std::size_t scheduled = 0;
        while (scheduled < options_.schedule_limit && !lane.ready.empty()) {
            const QueuedElement el = lane.ready.front();
            lane.ready.pop_front();
            refine_tasks_.fetch_add(1, std::memory_order_relaxed);
            backend_.spawn_fn(group, [this, el] {
                executed_.fetch_add(1, std::memory_order_relaxed);
                refine_task(el);
            });
            ++scheduled;
        }
    }

    void refine_task(QueuedElement el)
    {
        const ThreadId tid = backend_.thread_id();
        WorkerState& w = *workers_[static_cast<std::size_t>(tid)];
        auto& lane = queues_.lane(tid);
        w.scratch.clear();
        const bool leak = fault_armed_.load(std::memory_order_relaxed) && fault_armed_.exchange(false);
        const RefineOutcome outcome = refine_element(mesh_, el.tri, criteria_, tid, w.scratch, leak);
        if (leak && outcome != RefineOutcome::inserted)
            fault_armed_.store(true, std::memory_order_relaxed);
        switch (outcome) {
        case RefineOutcome::inserted:
            ++w.inserted;
            successes_.fetch_add(1, std::memory_order_relaxed);
            for (const Handle t : w.scratch)
                lane.incoming.push_back({t, 0});
            break;
        case RefineOutcome::skipped:
            ++w.skipped;
            successes_.fetch_add(1, std::memory_order_relaxed);
            break;
        case RefineOutcome::aborted:
            ++w.aborts;
            if (el.retries + 1 > options_.max_retries) {
                std::lock_guard lock(deferred_mutex_);
                deferred_.push_back({el.tri, 0});
            } else {
                ++w.retries;
                lane.incoming.push_back({el.tri, el.retries + 1});
            }
            if (options_.backoff_jitter.count() > 0) {
                std::uniform_int_distribution<long> pause(0, options_.backoff_jitter.count());
                std::this_thread::sleep_for(std::chrono::microseconds(pause(w.rng)));
            }
            break;
        }
    }

private:
    struct alignas(cache_line) WorkerState {
        explicit WorkerState(std::uint64_t seed) : rng(seed) {}
        std::mt19937_64 rng;
        std::vector<Handle> scratch;
        std::uint64_t inserted = 0;
        std::uint64_t skipped = 0;
        std::uint64_t aborts = 0;
        std::uint64_t retries = 0;
    };

    // Driver-only, at quiescence, as worker 0.
    void serial_drain(std::deque<QueuedElement>& work)
    {
        std::vector<Handle> created;
        while (!work.empty()) {
            const QueuedElement el = work.front();
            work.pop_front();
            created.clear();
            switch (refine_element(mesh_, el.tri, criteria_, 0, created)) {
            case RefineOutcome::inserted:
                ++workers_[0]->inserted;
                for (const Handle t : created)
                    work.push_back({t, 0});
                break;
            case RefineOutcome::skipped:
                ++workers_[0]->skipped;
                break;
            case RefineOutcome::aborted:
                ++stats_.dropped;
                break;
            }
        }
    }

    Backend& backend_;
    Mesh& mesh_;
    RefineCriteria criteria_;
    RefineOptions options_;
    ThreadQueues queues_;
    std::vector<std::unique_ptr<WorkerState>> workers_;
    RefineStats stats_;

    std::atomic<std::uint64_t> refine_tasks_{0};
    std::atomic<std::uint64_t> executed_{0};
    std::atomic<std::uint64_t> successes_{0};
    std::atomic<bool> fault_armed_{false};

    std::mutex deferred_mutex_;
    std::vector<QueuedElement> deferred_;
};

inline RefineStats run_refinement(Backend& backend, Mesh& mesh, const RefineCriteria& criteria, const RefineOptions& options = {})
{
    Refinement r(backend, mesh, criteria, options);
    return r.run();
}

} // namespace taskweave
