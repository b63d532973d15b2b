#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace taskweave {

struct Point {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point&, const Point&) = default;
    friend Point operator+(Point a, Point b) noexcept { return {a.x + b.x, a.y + b.y}; }
    friend Point operator-(Point a, Point b) noexcept { return {a.x - b.x, a.y - b.y}; }
    friend Point operator*(double s, Point a) noexcept { return {s * a.x, s * a.y}; }
};

inline double dot(Point a, Point b) noexcept { return a.x * b.x + a.y * b.y; }
inline double squared_length(Point a) noexcept { return dot(a, a); }
inline double distance(Point a, Point b) noexcept { return std::sqrt(squared_length(a - b)); }

/// Axis-aligned rectangle [lo.x, hi.x] x [lo.y, hi.y].
struct Rect {
    Point lo;
    Point hi;

    double width() const noexcept { return hi.x - lo.x; }
    double height() const noexcept { return hi.y - lo.y; }
    double area() const noexcept { return width() * height(); }
    bool contains(Point p) const noexcept { return p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y; }
    bool on_boundary(Point p) const noexcept
    {
        return contains(p) && (p.x == lo.x || p.x == hi.x || p.y == lo.y || p.y == hi.y);
    }
};

/// Twice the signed area of (a, b, c); positive when counterclockwise.
inline double orient2d(Point a, Point b, Point c) noexcept
{
    return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
}

inline double signed_area(Point a, Point b, Point c) noexcept { return 0.5 * orient2d(a, b, c); }

struct InCircleValue {
    double det;
    double magnitude; // sum of absolute term products, scales the tolerance
};

/// Raw in-circle determinant with p moved to the origin. Positive when p is
/// inside the circumcircle of the counterclockwise triangle (a, b, c).
inline InCircleValue in_circle_det(Point a, Point b, Point c, Point p) noexcept
{
    const double adx = a.x - p.x, ady = a.y - p.y;
    const double bdx = b.x - p.x, bdy = b.y - p.y;
    const double cdx = c.x - p.x, cdy = c.y - p.y;

    const double alift = adx * adx + ady * ady;
    const double blift = bdx * bdx + bdy * bdy;
    const double clift = cdx * cdx + cdy * cdy;

    const double bc = bdx * cdy - cdx * bdy;
    const double ca = cdx * ady - adx * cdy;
    const double ab = adx * bdy - bdx * ady;

    const double det = alift * bc + blift * ca + clift * ab;
    const double magnitude = alift * (std::abs(bdx * cdy) + std::abs(cdx * bdy))
                           + blift * (std::abs(cdx * ady) + std::abs(adx * cdy))
                           + clift * (std::abs(adx * bdy) + std::abs(bdx * ady));
    return {det, magnitude};
}

inline constexpr double default_in_circle_eps = 1e-12;

/// True iff p lies strictly inside the circumcircle of (a, b, c), i.e. the
/// determinant exceeds eps times its magnitude. Points on the circle (within
/// that tolerance) count as outside.
inline bool in_circle_unchecked(Point a, Point b, Point c, Point p, double eps = default_in_circle_eps) noexcept
{
    const auto v = in_circle_det(a, b, c, p);
    return v.det > eps * v.magnitude;
}

inline bool in_circle(Point a, Point b, Point c, Point p, double eps = default_in_circle_eps)
{
    const double o = orient2d(a, b, c);
    if (o == 0.0)
        throw std::domain_error("in_circle: collinear triangle");
    if (o < 0.0)
        throw std::domain_error("in_circle: triangle is not counterclockwise");
    return in_circle_unchecked(a, b, c, p, eps);
}

inline Point circumcenter(Point a, Point b, Point c) noexcept
{
    const double bx = b.x - a.x, by = b.y - a.y;
    const double cx = c.x - a.x, cy = c.y - a.y;
    const double d = 2.0 * (bx * cy - by * cx);
    const double b2 = bx * bx + by * by;
    const double c2 = cx * cx + cy * cy;
    return {a.x + (cy * b2 - by * c2) / d, a.y + (bx * c2 - cx * b2) / d};
}

inline std::array<double, 3> squared_edge_lengths(Point a, Point b, Point c) noexcept
{
    // Edge i is opposite vertex i.
    return {squared_length(c - b), squared_length(a - c), squared_length(b - a)};
}

/// Interior angles in degrees, angle i at vertex i.
inline std::array<double, 3> angles_deg(Point a, Point b, Point c) noexcept
{
    const std::array<Point, 3> v{a, b, c};
    std::array<double, 3> out{};
    for (int i = 0; i < 3; ++i) {
        const Point u = v[(i + 1) % 3] - v[i];
        const Point w = v[(i + 2) % 3] - v[i];
        const double cross = std::abs(u.x * w.y - u.y * w.x);
        out[i] = std::atan2(cross, dot(u, w)) * 180.0 / std::numbers::pi;
    }
    return out;
}

inline double min_angle_deg(Point a, Point b, Point c) noexcept
{
    const auto ang = angles_deg(a, b, c);
    return std::min({ang[0], ang[1], ang[2]});
}

} // namespace taskweave
