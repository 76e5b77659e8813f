// parts.hpp: ensemble voting over per-crop head/tail detections.
//
// Three detector types contribute square part boxes in crop coordinates.
// Boxes of one class are clustered by IoU against the running group center
// (the highest-confidence member), and the group with the most votes wins;
// its center's box center is the final part location.
#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "obbtrack/geom.hpp"

namespace obbtrack {

enum class DetectorId { HeadTail = 0, HeadOnly = 1, TailOnly = 2 };
enum class PartClass { Head = 0, Tail = 1 };

struct PartDetection {
    DetectorId detector = DetectorId::HeadTail;
    PartClass part = PartClass::Head;
    AABox box;            // square, crop coordinates
    double score = 0.0;   // in [0, 1]
};

struct PartGroup {
    std::vector<PartDetection> members;  // insertion order
    std::size_t center_index = 0;        // highest-score member

    const PartDetection& center() const { return members[center_index]; }
    int votes() const { return static_cast<int>(members.size()); }
};

struct VotedPart {
    Vec2 point;     // winning group center's box center, crop coordinates
    int votes = 0;
};

struct VoteOutcome {
    std::optional<VotedPart> head;
    std::optional<VotedPart> tail;
};

// Deterministic total order used everywhere a "best" detection is needed:
// higher score first, then smaller center x, smaller center y, detector id,
// smaller box side. Returns true when a strictly precedes b.
bool vote_order_before(const PartDetection& a, const PartDetection& b);

/// Greedy clustering of same-class detections. Detections are visited in
/// vote_order; each joins the first group whose current center overlaps it
/// with aabb_iou >= iou_threshold, otherwise it seeds a new group. Throws
/// std::invalid_argument on mixed classes or a threshold outside (0, 1).
std::vector<PartGroup> group_parts(std::vector<PartDetection> dets, double iou_threshold);

/// Group with the most votes; vote ties fall back to the better center
/// under vote_order. Empty input -> nullopt.
std::optional<PartGroup> select_group(const std::vector<PartGroup>& groups);

/// Filter to one class, group, select, and report the winning location.
std::optional<VotedPart> vote_part(const std::vector<PartDetection>& dets, PartClass part,
                                   double iou_threshold);

/// Both classes at once.
VoteOutcome vote_parts(const std::vector<PartDetection>& dets, double iou_threshold);

}  // namespace obbtrack
