// geom.hpp: oriented-rectangle geometry shared by the whole toolkit.
//
// Conventions: image coordinates, +x right, +y down, pixels. Angles are
// degrees at every interface (radians only inside function bodies). A
// direction angle t maps to the unit vector u(t) = (cos t, sin t), so
// increasing angles turn from +x toward +y.
#pragma once

#include <array>
#include <cmath>
#include <span>
#include <utility>

namespace obbtrack {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(Vec2 a, double s) { return {a.x * s, a.y * s}; }
inline Vec2 operator*(double s, Vec2 a) { return a * s; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }

constexpr double kPi = 3.14159265358979323846;

constexpr double deg_to_rad(double d) { return d * (kPi / 180.0); }
constexpr double rad_to_deg(double r) { return r * (180.0 / kPi); }

/// Wrap an angle to [0, 360).
double wrap_deg_360(double deg);

/// Wrap an angle to [0, 180). Used for axis directions, which are only
/// defined modulo a half turn.
double wrap_deg_180(double deg);

/// Absolute angular difference along the shorter arc, in [0, 180].
double shortest_arc_deg(double a_deg, double b_deg);

/// Detector-space rotated rectangle. theta_raw is the direction of the
/// w extent and is only known modulo 180 degrees.
struct OrientedBox {
    Vec2 center;
    double w = 0.0;          // extent along theta_raw, px
    double h = 0.0;          // extent perpendicular to theta_raw, px
    double theta_raw = 0.0;  // degrees in [0, 180)
    double score = 1.0;      // detector confidence in [0, 1]
};

/// Rotated rectangle whose long-axis direction has been disambiguated to a
/// full-circle heading. Invariant: length >= width > 0, heading in [0, 360).
struct HeadedBox {
    Vec2 center;
    double length = 0.0;   // long-axis extent, px
    double width = 0.0;    // short-axis extent, px
    double heading = 0.0;  // degrees in [0, 360)
    double score = 1.0;
};

/// Axis-aligned box, min corner <= max corner.
struct AABox {
    Vec2 min;
    Vec2 max;

    double width() const { return max.x - min.x; }
    double height() const { return max.y - min.y; }
    double area() const { return width() * height(); }
    Vec2 center() const { return {(min.x + max.x) * 0.5, (min.y + max.y) * 0.5}; }
};

/// Square crop anchored at its top-left corner.
struct CropRegion {
    Vec2 origin;
    double side = 0.0;
};

/// Long-axis view of an OrientedBox: length = max(w, h) and axis_deg is the
/// direction of that extent in [0, 180). When w = h the w direction wins.
struct AxisBox {
    Vec2 center;
    double length = 0.0;
    double width = 0.0;
    double axis_deg = 0.0;
    double score = 1.0;
};

AxisBox canonicalize(const OrientedBox& box);

/// A HeadedBox carrying the (still ambiguous) axis direction as its heading.
HeadedBox as_headed(const AxisBox& box);

/// Axis-aligned square of the given side centered on a point.
AABox square_box(Vec2 center, double side);

/// The four vertices in counter-clockwise order (positive shoelace area in
/// these coordinates). The vertex centroid equals the box center.
std::array<Vec2, 4> corners(const HeadedBox& box);
std::array<Vec2, 4> corners(const OrientedBox& box);

/// Midpoints of the two short edges: center +/- (length/2) * u(axis).
std::pair<Vec2, Vec2> short_edge_midpoints(const HeadedBox& box);
std::pair<Vec2, Vec2> short_edge_midpoints(const OrientedBox& box);

/// Intersection-over-union of two rotated rectangles, by clipping one
/// against the other and summing signed areas. Near-zero-area inputs give 0.
double rotated_iou(const HeadedBox& a, const HeadedBox& b);
double rotated_iou(const OrientedBox& a, const OrientedBox& b);
double rotated_iou(const HeadedBox& a, const OrientedBox& b);
double rotated_iou(const OrientedBox& a, const HeadedBox& b);

/// Standard axis-aligned IoU. Degenerate inputs give 0.
double aabb_iou(const AABox& a, const AABox& b);

/// Smallest axis-aligned box containing all points.
AABox envelope(std::span<const Vec2> points);

/// Square crop around a detection: anchored at the min corner of its
/// axis-aligned envelope, side = the larger envelope extent.
CropRegion crop_square(const OrientedBox& box);

/// Crop-local point -> frame point (pure translation; crops never rescale).
Vec2 crop_to_frame(const CropRegion& region, Vec2 p);

/// Frame point -> crop-local point. Inverse of crop_to_frame.
Vec2 frame_to_crop(const CropRegion& region, Vec2 p);

/// Side of the square part box whose area is 15% of the crop area.
double part_box_side(const CropRegion& region);

}  // namespace obbtrack
