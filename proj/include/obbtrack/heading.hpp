// heading.hpp: disambiguating a half-turn box angle into a full heading.
//
// A detector box angle only fixes the body axis modulo 180 degrees. The
// voted head (or tail) location picks one of the two short-edge directions
// by dot-product sign: the direction with positive dot toward the head, or
// negative dot toward the tail.
#pragma once

#include <optional>

#include "obbtrack/geom.hpp"

namespace obbtrack {

enum class HeadingSource { FromHead = 0, FromTail = 1, None = 2 };

struct HeadingResolution {
    std::optional<HeadedBox> box;  // empty means unresolved
    HeadingSource source = HeadingSource::None;
    std::optional<Vec2> head_point;  // frame coordinates, as supplied
    std::optional<Vec2> tail_point;
    // Head and tail both resolved but landed on the same side; the head won.
    bool contradiction = false;

    bool resolved() const { return box.has_value(); }
};

/// Resolve a box's axis into a heading using part locations in frame
/// coordinates. The head takes precedence; the tail is used only when no
/// head is present. A part exactly perpendicular to the axis (zero dot
/// product), or no parts at all, leaves the box unresolved.
HeadingResolution resolve_heading(const OrientedBox& box, std::optional<Vec2> head,
                                  std::optional<Vec2> tail);

/// (sin, cos) of a heading given in degrees.
std::pair<double, double> heading_to_trig(double heading_deg);

}  // namespace obbtrack
