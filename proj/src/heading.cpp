#include "obbtrack/heading.hpp"

namespace obbtrack {

HeadingResolution resolve_heading(const OrientedBox& box, std::optional<Vec2> head,
                                  std::optional<Vec2> tail) {
    HeadingResolution res;
    res.head_point = head;
    res.tail_point = tail;

    const AxisBox axis = canonicalize(box);
    const auto [m1, m2] = short_edge_midpoints(as_headed(axis));
    const Vec2 c = box.center;
    const Vec2 e = m1 - c;  // m2 - c is exactly -e

    Vec2 head_dir;
    if (head.has_value()) {
        const double d = dot(e, *head - c);
        if (d == 0.0) return res;
        head_dir = d > 0.0 ? e : Vec2{} - e;
        res.source = HeadingSource::FromHead;
        if (tail.has_value()) {
            // The tail should sit behind the center; same side as the head
            // means the parts disagree.
            res.contradiction = dot(head_dir, *tail - c) > 0.0;
        }
    } else if (tail.has_value()) {
        const double d = dot(e, *tail - c);
        if (d == 0.0) return res;
        head_dir = d < 0.0 ? e : Vec2{} - e;
        res.source = HeadingSource::FromTail;
    } else {
        return res;
    }

    const double heading = wrap_deg_360(rad_to_deg(std::atan2(head_dir.y, head_dir.x)));
    res.box = HeadedBox{c, axis.length, axis.width, heading, box.score};
    return res;
}

std::pair<double, double> heading_to_trig(double heading_deg) {
    const double a = deg_to_rad(heading_deg);
    return {std::sin(a), std::cos(a)};
}

}  // namespace obbtrack
