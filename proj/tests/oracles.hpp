// oracles.hpp: independent reference implementations used only by tests.
// Everything here is written from the definitions, not by calling the
// library code it checks.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "obbtrack/parts.hpp"

namespace oracle {

struct Rect {
    double cx, cy, length, width, angle_deg;
};

inline double deg2rad(double d) { return d * 3.14159265358979323846 / 180.0; }

// Corner positions by direct rotation-matrix application to the
// axis-aligned corner offsets.
inline std::vector<obbtrack::Vec2> rect_corners(const Rect& r) {
    const double a = deg2rad(r.angle_deg);
    const double c = std::cos(a), s = std::sin(a);
    const double hx = r.length / 2.0, hy = r.width / 2.0;
    const double offs[4][2] = {{hx, hy}, {-hx, hy}, {-hx, -hy}, {hx, -hy}};
    std::vector<obbtrack::Vec2> out;
    for (const auto& o : offs) {
        out.push_back({r.cx + c * o[0] - s * o[1], r.cy + s * o[0] + c * o[1]});
    }
    return out;
}

inline bool point_in_rect(const Rect& r, double px, double py) {
    const double a = deg2rad(r.angle_deg);
    const double c = std::cos(a), s = std::sin(a);
    const double dx = px - r.cx, dy = py - r.cy;
    const double lx = c * dx + s * dy;   // along the length axis
    const double ly = -s * dx + c * dy;  // along the width axis
    return std::abs(lx) <= r.length / 2.0 && std::abs(ly) <= r.width / 2.0;
}

// Monte-Carlo IoU: sample uniformly inside rect a, count hits inside b.
inline double mc_rotated_iou(const Rect& a, const Rect& b, int samples, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    const auto uniform = [&gen] { return static_cast<double>(gen() >> 11) * 0x1.0p-53; };
    const double aa = deg2rad(a.angle_deg);
    const double ca = std::cos(aa), sa = std::sin(aa);
    long hits = 0;
    for (int i = 0; i < samples; ++i) {
        const double lx = (uniform() - 0.5) * a.length;
        const double ly = (uniform() - 0.5) * a.width;
        const double px = a.cx + ca * lx - sa * ly;
        const double py = a.cy + sa * lx + ca * ly;
        if (point_in_rect(b, px, py)) ++hits;
    }
    const double area_a = a.length * a.width;
    const double area_b = b.length * b.width;
    const double inter = area_a * static_cast<double>(hits) / samples;
    return inter / (area_a + area_b - inter);
}

// IoU of two equal axis-aligned squares of side s whose centers differ by
// (dx, dy): inter = (s-|dx|)(s-|dy|) when positive.
inline double shifted_square_iou(double s, double dx, double dy) {
    const double ix = s - std::abs(dx);
    const double iy = s - std::abs(dy);
    if (ix <= 0.0 || iy <= 0.0) return 0.0;
    const double inter = ix * iy;
    return inter / (2.0 * s * s - inter);
}

// ---------------------------------------------------------------------------
// Voting: a literal re-implementation of the clustering/selection rules,
// structured differently from the library (index lists, repeated scans).

inline double square_overlap_iou(const obbtrack::AABox& a, const obbtrack::AABox& b) {
    const double ix = std::min(a.max.x, b.max.x) - std::max(a.min.x, b.min.x);
    const double iy = std::min(a.max.y, b.max.y) - std::max(a.min.y, b.min.y);
    if (ix <= 0.0 || iy <= 0.0) return 0.0;
    const double ia = ix * iy;
    const double ua = (a.max.x - a.min.x) * (a.max.y - a.min.y) +
                      (b.max.x - b.min.x) * (b.max.y - b.min.y) - ia;
    if (ua <= 1e-12) return 0.0;
    return ia / ua;
}

// true when detection i outranks detection j
inline bool outranks(const obbtrack::PartDetection& a, const obbtrack::PartDetection& b) {
    if (a.score != b.score) return a.score > b.score;
    const double ax = (a.box.min.x + a.box.max.x) / 2.0, bx = (b.box.min.x + b.box.max.x) / 2.0;
    if (ax != bx) return ax < bx;
    const double ay = (a.box.min.y + a.box.max.y) / 2.0, by = (b.box.min.y + b.box.max.y) / 2.0;
    if (ay != by) return ay < by;
    if (a.detector != b.detector) return static_cast<int>(a.detector) < static_cast<int>(b.detector);
    return (a.box.max.x - a.box.min.x) < (b.box.max.x - b.box.min.x);
}

struct VoteGroup {
    std::vector<std::size_t> member_idx;  // indexes into the visit-ordered list
    std::size_t center_idx = 0;
};

struct VoteResult {
    std::vector<VoteGroup> groups;                 // over the visit-ordered detections
    std::vector<obbtrack::PartDetection> ordered;  // the visit order itself
    std::optional<std::size_t> winner;             // group index
    std::optional<obbtrack::Vec2> location;
    int winner_votes = 0;
};

inline VoteResult brute_force_vote(std::vector<obbtrack::PartDetection> dets,
                                   double iou_threshold) {
    VoteResult result;

    // visit order: repeatedly extract the best-ranked remaining detection
    std::vector<char> taken(dets.size(), 0);
    for (std::size_t n = 0; n < dets.size(); ++n) {
        std::size_t best = dets.size();
        for (std::size_t i = 0; i < dets.size(); ++i) {
            if (taken[i]) continue;
            if (best == dets.size() || outranks(dets[i], dets[best])) best = i;
        }
        taken[best] = 1;
        result.ordered.push_back(dets[best]);
    }

    for (std::size_t i = 0; i < result.ordered.size(); ++i) {
        bool placed = false;
        for (VoteGroup& g : result.groups) {
            const obbtrack::PartDetection& center = result.ordered[g.center_idx];
            if (square_overlap_iou(center.box, result.ordered[i].box) >= iou_threshold) {
                g.member_idx.push_back(i);
                for (std::size_t m : g.member_idx) {
                    if (outranks(result.ordered[m], result.ordered[g.center_idx])) g.center_idx = m;
                }
                placed = true;
                break;
            }
        }
        if (!placed) result.groups.push_back({{i}, i});
    }

    for (std::size_t gi = 0; gi < result.groups.size(); ++gi) {
        if (!result.winner) {
            result.winner = gi;
            continue;
        }
        const VoteGroup& cand = result.groups[gi];
        const VoteGroup& cur = result.groups[*result.winner];
        if (cand.member_idx.size() > cur.member_idx.size() ||
            (cand.member_idx.size() == cur.member_idx.size() &&
             outranks(result.ordered[cand.center_idx], result.ordered[cur.center_idx]))) {
            result.winner = gi;
        }
    }
    if (result.winner) {
        const VoteGroup& w = result.groups[*result.winner];
        result.location = result.ordered[w.center_idx].box.center();
        result.winner_votes = static_cast<int>(w.member_idx.size());
    }
    return result;
}

// ---------------------------------------------------------------------------
// Assignment: exhaustive minimum over all injective row->column maps of the
// smaller side.

inline void assign_dfs(const std::vector<std::vector<double>>& cost, std::size_t row,
                       std::vector<int>& cols_used, std::vector<int>& current, double sum,
                       double& best_sum, std::vector<int>& best) {
    const std::size_t n = cost.size();
    if (row == n) {
        if (sum < best_sum) {
            best_sum = sum;
            best = current;
        }
        return;
    }
    for (std::size_t j = 0; j < cost[row].size(); ++j) {
        if (cols_used[j]) continue;
        cols_used[j] = 1;
        current[row] = static_cast<int>(j);
        assign_dfs(cost, row + 1, cols_used, current, sum + cost[row][j], best_sum, best);
        cols_used[j] = 0;
    }
    current[row] = -1;
}

struct ExhaustiveAssignment {
    std::vector<int> row_to_col;
    double total = 0.0;
};

// Requires rows <= cols (transpose beforehand if needed).
inline ExhaustiveAssignment exhaustive_min_assignment(
    const std::vector<std::vector<double>>& cost) {
    ExhaustiveAssignment out;
    if (cost.empty()) return out;
    std::vector<int> cols_used(cost[0].size(), 0);
    std::vector<int> current(cost.size(), -1);
    double best_sum = std::numeric_limits<double>::infinity();
    std::vector<int> best;
    assign_dfs(cost, 0, cols_used, current, 0.0, best_sum, best);
    out.row_to_col = best;
    out.total = best_sum;
    return out;
}

}  // namespace oracle
