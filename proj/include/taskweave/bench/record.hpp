#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace taskweave::bench {

/// One benchmark run. For the delaunay workload `grainsize` carries the
/// schedule_limit. repetition == summary_repetition marks a geometric-mean
/// summary row.
struct BenchRecord {
    std::string workload;
    std::string backend;
    std::string strategy;
    int threads = 1;
    std::uint64_t grainsize = 0;
    int repetition = 0;
    std::uint64_t wall_time_ns = 0;
    std::uint64_t tasks_created = 0;
    std::uint64_t tasks_executed = 0;
    std::uint64_t aborts = 0;
    std::uint64_t retries = 0;
    std::uint64_t steal_attempts = 0;
    double min_quality = 0.0;
    double mean_quality = 0.0;

    friend bool operator==(const BenchRecord&, const BenchRecord&) = default;
};

inline constexpr int summary_repetition = -1;

inline constexpr std::string_view csv_header =
    "workload,backend,strategy,threads,grainsize,repetition,wall_time_ns,tasks_created,"
    "tasks_executed,aborts,retries,steal_attempts,min_quality,mean_quality";

inline std::string format_double(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string to_csv(const BenchRecord& r)
{
    std::string s;
    s += r.workload + ',' + r.backend + ',' + r.strategy + ',';
    s += std::to_string(r.threads) + ',' + std::to_string(r.grainsize) + ',';
    s += (r.repetition == summary_repetition ? std::string("geomean") : std::to_string(r.repetition)) + ',';
    s += std::to_string(r.wall_time_ns) + ',' + std::to_string(r.tasks_created) + ',' + std::to_string(r.tasks_executed) + ',';
    s += std::to_string(r.aborts) + ',' + std::to_string(r.retries) + ',' + std::to_string(r.steal_attempts) + ',';
    s += format_double(r.min_quality) + ',' + format_double(r.mean_quality);
    return s;
}

/// Same row with the wall-time column blanked; used to compare runs that
/// must agree on everything but timing.
inline std::string to_csv_without_time(BenchRecord r)
{
    r.wall_time_ns = 0;
    return to_csv(r);
}

inline BenchRecord parse_csv(std::string_view line)
{
    std::vector<std::string> f;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        f.emplace_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
        if (comma == std::string_view::npos)
            break;
        start = comma + 1;
    }
    if (f.size() != 14)
        throw std::invalid_argument("bench record: expected 14 fields");

    auto u64 = [](const std::string& s) {
        std::size_t used = 0;
        const auto v = std::stoull(s, &used);
        if (used != s.size())
            throw std::invalid_argument("bench record: bad integer '" + s + "'");
        return static_cast<std::uint64_t>(v);
    };
    auto dbl = [](const std::string& s) {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size())
            throw std::invalid_argument("bench record: bad number '" + s + "'");
        return v;
    };

    BenchRecord r;
    r.workload = f[0];
    r.backend = f[1];
    r.strategy = f[2];
    r.threads = static_cast<int>(u64(f[3]));
    r.grainsize = u64(f[4]);
    r.repetition = f[5] == "geomean" ? summary_repetition : static_cast<int>(u64(f[5]));
    r.wall_time_ns = u64(f[6]);
    r.tasks_created = u64(f[7]);
    r.tasks_executed = u64(f[8]);
    r.aborts = u64(f[9]);
    r.retries = u64(f[10]);
    r.steal_attempts = u64(f[11]);
    r.min_quality = dbl(f[12]);
    r.mean_quality = dbl(f[13]);
    return r;
}

inline double geometric_mean(const std::vector<double>& xs)
{
    if (xs.empty())
        return 0.0;
    double log_sum = 0.0;
    for (double x : xs)
        log_sum += std::log(x);
    return std::exp(log_sum / static_cast<double>(xs.size()));
}

/// Summary row for the repetitions of one configuration: wall time is the
/// geometric mean, counters and qualities are taken from the first row.
inline BenchRecord summarize(const std::vector<BenchRecord>& reps)
{
    if (reps.empty())
        throw std::invalid_argument("summarize: no repetitions");
    BenchRecord s = reps.front();
    std::vector<double> times;
    for (const auto& r : reps)
        times.push_back(static_cast<double>(r.wall_time_ns));
    s.repetition = summary_repetition;
    s.wall_time_ns = static_cast<std::uint64_t>(std::llround(geometric_mean(times)));
    return s;
}

} // namespace taskweave::bench
