#pragma once

#include "geometry.hpp"
#include "mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string_view>
#include <vector>

namespace taskweave {

enum class QualityMetric { min_angle, mean_ratio };

inline std::string_view to_string(QualityMetric m) noexcept
{
    return m == QualityMetric::min_angle ? "min_angle" : "mean_ratio";
}

inline std::optional<QualityMetric> parse_metric(std::string_view s) noexcept
{
    if (s == "min_angle")
        return QualityMetric::min_angle;
    if (s == "mean_ratio")
        return QualityMetric::mean_ratio;
    return std::nullopt;
}

/// Upper end of the metric's range (equilateral score).
inline double metric_max(QualityMetric m) noexcept { return m == QualityMetric::min_angle ? 60.0 : 1.0; }

/// 4*sqrt(3)*area / (sum of squared edge lengths). 1 for equilateral, 0 for
/// degenerate triangles.
inline double mean_ratio(Point a, Point b, Point c) noexcept
{
    const auto l = squared_edge_lengths(a, b, c);
    const double denom = l[0] + l[1] + l[2];
    if (denom == 0.0)
        return 0.0;
    const double area = std::abs(signed_area(a, b, c));
    return std::clamp(4.0 * std::sqrt(3.0) * area / denom, 0.0, 1.0);
}

inline double triangle_quality(QualityMetric m, Point a, Point b, Point c) noexcept
{
    if (m == QualityMetric::mean_ratio)
        return mean_ratio(a, b, c);
    if (orient2d(a, b, c) == 0.0)
        return 0.0;
    return min_angle_deg(a, b, c);
}

struct QualitySummary {
    double min = 0.0;
    double mean = 0.0;
    std::size_t count = 0;
};

inline std::vector<double> quality_values(const Mesh& mesh, QualityMetric m)
{
    std::vector<double> out;
    for (const Handle& h : mesh.live_triangles()) {
        const auto c = mesh.corners(h.slot);
        out.push_back(triangle_quality(m, c[0], c[1], c[2]));
    }
    return out;
}

inline QualitySummary summarize_quality(const Mesh& mesh, QualityMetric m)
{
    const auto values = quality_values(mesh, m);
    QualitySummary s;
    s.count = values.size();
    if (values.empty())
        return s;
    s.min = *std::min_element(values.begin(), values.end());
    double sum = 0.0;
    for (double v : values)
        sum += v;
    s.mean = sum / static_cast<double>(values.size());
    return s;
}

/// Fixed-width bins over [lo, hi]; a value equal to hi lands in the top bin.
struct Histogram {
    double lo = 0.0;
    double hi = 1.0;
    std::vector<std::uint64_t> counts;

    std::uint64_t total() const noexcept
    {
        std::uint64_t t = 0;
        for (auto c : counts)
            t += c;
        return t;
    }
};

inline Histogram make_histogram(const std::vector<double>& values, std::size_t bins, double lo, double hi)
{
    if (bins == 0)
        throw std::invalid_argument("histogram needs at least one bin");
    if (!(hi > lo))
        throw std::invalid_argument("histogram range is empty");
    Histogram h{lo, hi, std::vector<std::uint64_t>(bins, 0)};
    const double width = (hi - lo) / static_cast<double>(bins);
    for (double v : values) {
        if (v < lo || v > hi)
            continue;
        auto bin = static_cast<std::size_t>((v - lo) / width);
        ++h.counts[std::min(bin, bins - 1)];
    }
    return h;
}

inline Histogram quality_histogram(const Mesh& mesh, QualityMetric m, std::size_t bins)
{
    return make_histogram(quality_values(mesh, m), bins, 0.0, metric_max(m));
}

/// Earth mover's distance between the two normalized histograms, with the
/// range rescaled to [0, 1]. Both histograms must share bins and range.
inline double earth_movers_distance(const Histogram& a, const Histogram& b)
{
    if (a.counts.size() != b.counts.size() || a.lo != b.lo || a.hi != b.hi)
        throw std::invalid_argument("histograms do not share bins");
    const double ta = static_cast<double>(a.total());
    const double tb = static_cast<double>(b.total());
    if (ta == 0.0 || tb == 0.0)
        return (ta == tb) ? 0.0 : 1.0;
    const double width = 1.0 / static_cast<double>(a.counts.size());
    double ca = 0.0, cb = 0.0, emd = 0.0;
    for (std::size_t i = 0; i < a.counts.size(); ++i) {
        ca += static_cast<double>(a.counts[i]) / ta;
        cb += static_cast<double>(b.counts[i]) / tb;
        emd += std::abs(ca - cb) * width;
    }
    return emd;
}

/// CSV with header "bin_lo,bin_hi,count"; raw counts.
inline void write_histogram(std::ostream& out, const Histogram& h)
{
    out << "bin_lo,bin_hi,count\n";
    const double width = (h.hi - h.lo) / static_cast<double>(h.counts.size());
    for (std::size_t i = 0; i < h.counts.size(); ++i)
        out << h.lo + width * static_cast<double>(i) << ',' << h.lo + width * static_cast<double>(i + 1) << ',' << h.counts[i] << '\n';
}

} // namespace taskweave
