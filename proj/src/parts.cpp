#include "obbtrack/parts.hpp"

#include <algorithm>
#include <stdexcept>

namespace obbtrack {

bool vote_order_before(const PartDetection& a, const PartDetection& b) {
    if (a.score != b.score) return a.score > b.score;
    const Vec2 ca = a.box.center();
    const Vec2 cb = b.box.center();
    if (ca.x != cb.x) return ca.x < cb.x;
    if (ca.y != cb.y) return ca.y < cb.y;
    if (a.detector != b.detector) return static_cast<int>(a.detector) < static_cast<int>(b.detector);
    return a.box.width() < b.box.width();
}

std::vector<PartGroup> group_parts(std::vector<PartDetection> dets, double iou_threshold) {
    if (iou_threshold <= 0.0 || iou_threshold >= 1.0) {
        throw std::invalid_argument("group_parts: iou_threshold must be in (0, 1)");
    }
    for (const PartDetection& d : dets) {
        if (d.part != dets.front().part) {
            throw std::invalid_argument("group_parts: detections must share one part class");
        }
    }

    std::sort(dets.begin(), dets.end(), vote_order_before);

    std::vector<PartGroup> groups;
    for (const PartDetection& det : dets) {
        bool joined = false;
        for (PartGroup& g : groups) {
            if (aabb_iou(g.center().box, det.box) >= iou_threshold) {
                g.members.push_back(det);
                // Re-evaluate the center; with the sorted visit order this is
                // a no-op, but the rule is center = best member.
                for (std::size_t i = 0; i < g.members.size(); ++i) {
                    if (vote_order_before(g.members[i], g.members[g.center_index])) {
                        g.center_index = i;
                    }
                }
                joined = true;
                break;
            }
        }
        if (!joined) {
            groups.push_back(PartGroup{{det}, 0});
        }
    }
    return groups;
}

std::optional<PartGroup> select_group(const std::vector<PartGroup>& groups) {
    const PartGroup* best = nullptr;
    for (const PartGroup& g : groups) {
        if (best == nullptr || g.votes() > best->votes() ||
            (g.votes() == best->votes() && vote_order_before(g.center(), best->center()))) {
            best = &g;
        }
    }
    if (best == nullptr) return std::nullopt;
    return *best;
}

std::optional<VotedPart> vote_part(const std::vector<PartDetection>& dets, PartClass part,
                                   double iou_threshold) {
    std::vector<PartDetection> filtered;
    filtered.reserve(dets.size());
    for (const PartDetection& d : dets) {
        if (d.part == part) filtered.push_back(d);
    }
    if (filtered.empty()) return std::nullopt;

    const auto groups = group_parts(std::move(filtered), iou_threshold);
    const auto winner = select_group(groups);
    if (!winner) return std::nullopt;
    return VotedPart{winner->center().box.center(), winner->votes()};
}

VoteOutcome vote_parts(const std::vector<PartDetection>& dets, double iou_threshold) {
    return {vote_part(dets, PartClass::Head, iou_threshold),
            vote_part(dets, PartClass::Tail, iou_threshold)};
}

}  // namespace obbtrack
