#include "obbtrack/geom.hpp"

#include <algorithm>
#include <vector>

namespace obbtrack {

namespace {

constexpr double kDegenerateArea = 1e-12;
constexpr double kPartAreaFraction = 0.15;

std::array<Vec2, 4> rect_corners(Vec2 c, double length, double width, double angle_deg) {
    const double a = deg_to_rad(angle_deg);
    const Vec2 u{std::cos(a), std::sin(a)};
    const Vec2 v{-u.y, u.x};
    const Vec2 du = u * (0.5 * length);
    const Vec2 dv = v * (0.5 * width);
    return {c + du + dv, c - du + dv, c - du - dv, c + du - dv};
}

// Shoelace sum; positive for counter-clockwise vertex order.
double polygon_area(const std::vector<Vec2>& poly) {
    const std::size_t n = poly.size();
    if (n < 3) return 0.0;
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2& p = poly[i];
        const Vec2& q = poly[(i + 1) % n];
        s += cross(p, q);
    }
    return 0.5 * s;
}

// Keep the part of `poly` on the interior side of edge a->b of a
// counter-clockwise convex polygon (Sutherland-Hodgman step).
std::vector<Vec2> clip_edge(const std::vector<Vec2>& poly, Vec2 a, Vec2 b) {
    std::vector<Vec2> out;
    out.reserve(poly.size() + 2);
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 p = poly[i];
        const Vec2 q = poly[(i + 1) % n];
        const double dp = cross(b - a, p - a);
        const double dq = cross(b - a, q - a);
        if (dp >= 0.0) out.push_back(p);
        if ((dp > 0.0 && dq < 0.0) || (dp < 0.0 && dq > 0.0)) {
            const double t = dp / (dp - dq);
            out.push_back(p + (q - p) * t);
        }
    }
    return out;
}

double quad_iou(const std::array<Vec2, 4>& a, const std::array<Vec2, 4>& b) {
    const std::vector<Vec2> pa(a.begin(), a.end());
    const std::vector<Vec2> pb(b.begin(), b.end());
    const double area_a = polygon_area(pa);
    const double area_b = polygon_area(pb);
    if (area_a < kDegenerateArea || area_b < kDegenerateArea) return 0.0;

    std::vector<Vec2> poly = pa;
    for (int i = 0; i < 4 && poly.size() >= 3; ++i) {
        poly = clip_edge(poly, b[i], b[(i + 1) % 4]);
    }
    if (poly.size() < 3) return 0.0;

    const double inter = std::max(0.0, polygon_area(poly));
    const double uni = area_a + area_b - inter;
    if (uni <= 0.0) return 0.0;
    return std::clamp(inter / uni, 0.0, 1.0);
}

}  // namespace

double wrap_deg_360(double deg) {
    double r = std::fmod(deg, 360.0);
    if (r < 0.0) r += 360.0;
    return r == 360.0 ? 0.0 : r;
}

double wrap_deg_180(double deg) {
    double r = std::fmod(deg, 180.0);
    if (r < 0.0) r += 180.0;
    return r == 180.0 ? 0.0 : r;
}

double shortest_arc_deg(double a_deg, double b_deg) {
    const double d = wrap_deg_360(a_deg - b_deg);
    return std::min(d, 360.0 - d);
}

AxisBox canonicalize(const OrientedBox& box) {
    AxisBox out;
    out.center = box.center;
    out.score = box.score;
    if (box.w >= box.h) {
        out.length = box.w;
        out.width = box.h;
        out.axis_deg = wrap_deg_180(box.theta_raw);
    } else {
        out.length = box.h;
        out.width = box.w;
        out.axis_deg = wrap_deg_180(box.theta_raw + 90.0);
    }
    return out;
}

HeadedBox as_headed(const AxisBox& box) {
    return {box.center, box.length, box.width, box.axis_deg, box.score};
}

AABox square_box(Vec2 center, double side) {
    const double h = 0.5 * side;
    return {{center.x - h, center.y - h}, {center.x + h, center.y + h}};
}

std::array<Vec2, 4> corners(const HeadedBox& box) {
    return rect_corners(box.center, box.length, box.width, box.heading);
}

std::array<Vec2, 4> corners(const OrientedBox& box) {
    const AxisBox ab = canonicalize(box);
    return rect_corners(ab.center, ab.length, ab.width, ab.axis_deg);
}

std::pair<Vec2, Vec2> short_edge_midpoints(const HeadedBox& box) {
    const double a = deg_to_rad(box.heading);
    const Vec2 e = Vec2{std::cos(a), std::sin(a)} * (0.5 * box.length);
    return {box.center + e, box.center - e};
}

std::pair<Vec2, Vec2> short_edge_midpoints(const OrientedBox& box) {
    return short_edge_midpoints(as_headed(canonicalize(box)));
}

double rotated_iou(const HeadedBox& a, const HeadedBox& b) {
    return quad_iou(corners(a), corners(b));
}

double rotated_iou(const OrientedBox& a, const OrientedBox& b) {
    return quad_iou(corners(a), corners(b));
}

double rotated_iou(const HeadedBox& a, const OrientedBox& b) {
    return quad_iou(corners(a), corners(b));
}

double rotated_iou(const OrientedBox& a, const HeadedBox& b) {
    return quad_iou(corners(a), corners(b));
}

double aabb_iou(const AABox& a, const AABox& b) {
    const double iw = std::min(a.max.x, b.max.x) - std::max(a.min.x, b.min.x);
    const double ih = std::min(a.max.y, b.max.y) - std::max(a.min.y, b.min.y);
    if (iw <= 0.0 || ih <= 0.0) return 0.0;
    const double inter = iw * ih;
    const double uni = a.area() + b.area() - inter;
    if (uni <= kDegenerateArea) return 0.0;
    return std::clamp(inter / uni, 0.0, 1.0);
}

AABox envelope(std::span<const Vec2> points) {
    AABox box{{points[0].x, points[0].y}, {points[0].x, points[0].y}};
    for (const Vec2& p : points.subspan(1)) {
        box.min.x = std::min(box.min.x, p.x);
        box.min.y = std::min(box.min.y, p.y);
        box.max.x = std::max(box.max.x, p.x);
        box.max.y = std::max(box.max.y, p.y);
    }
    return box;
}

CropRegion crop_square(const OrientedBox& box) {
    const auto cs = corners(box);
    const AABox env = envelope(cs);
    return {env.min, std::max(env.width(), env.height())};
}

Vec2 crop_to_frame(const CropRegion& region, Vec2 p) {
    return region.origin + p;
}

Vec2 frame_to_crop(const CropRegion& region, Vec2 p) {
    return p - region.origin;
}

double part_box_side(const CropRegion& region) {
    return region.side * std::sqrt(kPartAreaFraction);
}

}  // namespace obbtrack
