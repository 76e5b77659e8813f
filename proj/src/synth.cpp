#include "obbtrack/synth.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <random>
#include <stdexcept>

#include "obbtrack/assignment.hpp"
#include "obbtrack/parts.hpp"

namespace obbtrack {

namespace {

// mt19937_64 bit stream with hand-rolled distributions, so that output is
// identical across standard libraries.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 1e-300) u1 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * kPi * uniform();
        spare_ = r * std::sin(a);
        has_spare_ = true;
        return r * std::cos(a);
    }

    bool bernoulli(double p) { return uniform() < p; }

  private:
    std::mt19937_64 gen_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

Vec2 unit_vec(double heading_deg) {
    const double a = deg_to_rad(heading_deg);
    return {std::cos(a), std::sin(a)};
}

// Signed shortest rotation from one heading to another, in (-180, 180].
double signed_arc_deg(double from_deg, double to_deg) {
    double d = wrap_deg_360(to_deg - from_deg);
    if (d > 180.0) d -= 360.0;
    return d;
}

void walk_constant(std::vector<AgentPose>& poses, Vec2 start, double heading, double speed,
                   int frames) {
    Vec2 p = start;
    for (int t = 0; t < frames; ++t) {
        poses.push_back({p, wrap_deg_360(heading)});
        p = p + unit_vec(heading) * speed;
    }
}

// Constant speed, turn rate +w for the first half and -w for the second:
// two tangent circles traced in opposite senses.
void walk_figure8(std::vector<AgentPose>& poses, Vec2 start, double heading0, double speed,
                  double turn_deg, int frames) {
    Vec2 p = start;
    double h = heading0;
    const int half = frames / 2;
    for (int t = 0; t < frames; ++t) {
        poses.push_back({p, wrap_deg_360(h)});
        const double w = t < half ? turn_deg : -turn_deg;
        h = wrap_deg_360(h + w);
        p = p + unit_vec(h) * speed;
    }
}

void walk_herd(std::vector<AgentPose>& poses, Vec2 start, double heading0, double speed,
               double max_turn, double arena, Rng& rng, int frames) {
    Vec2 p = start;
    double h = heading0;
    const double margin = 90.0;
    for (int t = 0; t < frames; ++t) {
        poses.push_back({p, wrap_deg_360(h)});
        const Vec2 ahead = p + unit_vec(h) * (speed * 12.0);
        double turn;
        if (ahead.x < margin || ahead.x > arena - margin || ahead.y < margin ||
            ahead.y > arena - margin) {
            // steer back toward the middle
            const double target = rad_to_deg(std::atan2(arena / 2 - p.y, arena / 2 - p.x));
            turn = std::clamp(signed_arc_deg(h, target), -max_turn, max_turn);
        } else {
            turn = std::clamp(rng.normal() * 2.5, -max_turn, max_turn);
        }
        h = wrap_deg_360(h + turn);
        p = p + unit_vec(h) * speed;
    }
}

}  // namespace

Preset preset_from_string(const std::string& name) {
    if (name == "line") return Preset::Line;
    if (name == "cross") return Preset::Cross;
    if (name == "figure8") return Preset::Figure8;
    if (name == "herd") return Preset::Herd;
    throw std::invalid_argument("unknown preset '" + name + "'");
}

const char* to_string(Preset p) {
    switch (p) {
        case Preset::Line: return "line";
        case Preset::Cross: return "cross";
        case Preset::Figure8: return "figure8";
        case Preset::Herd: return "herd";
    }
    return "?";
}

Scenario build_scenario(const SynthConfig& cfg) {
    if (cfg.n_agents < 1 || cfg.frames < 1) {
        throw std::invalid_argument("build_scenario: need at least 1 agent and 1 frame");
    }
    Rng rng(cfg.seed);
    Scenario sc;
    sc.n_agents = cfg.n_agents;
    sc.frames = cfg.frames;
    sc.seed = cfg.seed;

    for (int a = 0; a < cfg.n_agents; ++a) {
        const double length = rng.uniform(34.0, 46.0);
        sc.lengths.push_back(length);
        sc.widths.push_back(length * rng.uniform(0.40, 0.52));
    }

    sc.poses.resize(cfg.n_agents);
    switch (cfg.preset) {
        case Preset::Line: {
            for (int a = 0; a < cfg.n_agents; ++a) {
                const double speed = rng.uniform(1.5, 3.0);
                walk_constant(sc.poses[a], {120.0, 120.0 + 70.0 * a}, 0.0, speed, cfg.frames);
            }
            break;
        }
        case Preset::Cross: {
            // Pairs approach a shared point on headings +/-20 deg, timed to
            // pass it a few frames apart.
            for (int a = 0; a < cfg.n_agents; ++a) {
                const int pair = a / 2;
                const bool first = (a % 2) == 0;
                const double speed = rng.uniform(2.0, 2.8);
                const Vec2 crossing{420.0, 260.0 + 320.0 * pair};
                const double heading = first ? 20.0 : -20.0;
                const double t_cross = cfg.frames / 2.0 + (first ? -4.0 : 4.0);
                const Vec2 start = crossing - unit_vec(heading) * (speed * t_cross);
                walk_constant(sc.poses[a], start, heading, speed, cfg.frames);
            }
            break;
        }
        case Preset::Figure8: {
            for (int a = 0; a < cfg.n_agents; ++a) {
                const double speed = rng.uniform(2.0, 2.6);
                const double turn =
                    std::min(cfg.max_turn_deg, 360.0 / std::max(1, cfg.frames / 2));
                const Vec2 start{320.0 + 260.0 * (a % 3), 320.0 + 260.0 * (a / 3)};
                walk_figure8(sc.poses[a], start, rng.uniform(0.0, 360.0), speed, turn, cfg.frames);
            }
            break;
        }
        case Preset::Herd: {
            const double arena = std::max(700.0, 230.0 * std::ceil(std::sqrt(cfg.n_agents)));
            const int cols = static_cast<int>(std::ceil(std::sqrt(cfg.n_agents)));
            for (int a = 0; a < cfg.n_agents; ++a) {
                const double speed = rng.uniform(1.2, 2.8);
                const double cell = (arena - 300.0) / std::max(1, cols - 1);
                const Vec2 start{150.0 + cell * (a % cols) + rng.uniform(-20.0, 20.0),
                                 150.0 + cell * (a / cols) + rng.uniform(-20.0, 20.0)};
                walk_herd(sc.poses[a], start, rng.uniform(0.0, 360.0), speed, cfg.max_turn_deg,
                          arena, rng, cfg.frames);
            }
            break;
        }
    }
    return sc;
}

SynthPaths generate(const SynthConfig& cfg, const std::string& out_dir) {
    const NoiseModel& check = cfg.noise;
    if (check.miss_rate < 0.0 || check.miss_rate > 1.0 || check.false_positive_rate < 0.0 ||
        check.false_positive_rate > 1.0 || check.jitter_sigma < 0.0 ||
        check.box_jitter_sigma < 0.0) {
        throw std::invalid_argument("generate: noise rates must be probabilities and sigmas nonnegative");
    }

    const Scenario sc = build_scenario(cfg);
    std::filesystem::create_directories(out_dir);
    const auto dir = std::filesystem::path(out_dir);
    SynthPaths paths{(dir / "detections.jsonl").string(), (dir / "parts.jsonl").string(),
                     (dir / "ground_truth.jsonl").string()};

    JsonlWriter det_out(paths.detections);
    JsonlWriter part_out(paths.parts);
    JsonlWriter gt_out(paths.ground_truth);

    // Distinct stream from the scenario's so trajectory and noise draws
    // cannot interleave.
    Rng rng(cfg.seed ^ 0x9e3779b97f4a7c15ull);
    const NoiseModel& nm = cfg.noise;

    for (int t = 0; t < sc.frames; ++t) {
        DetectionRecord det_rec{t, {}};
        GtRecord gt_rec{t, {}};
        std::vector<PartRecord> part_recs;

        for (int a = 0; a < sc.n_agents; ++a) {
            const AgentPose& pose = sc.poses[a][t];
            const double len = sc.lengths[a];
            const double wid = sc.widths[a];

            GtDetection gt;
            gt.box = {pose.center, len, wid, wrap_deg_180(pose.heading_deg), 1.0};
            gt.agent_id = a;
            gt.heading_deg = pose.heading_deg;
            gt_rec.detections.push_back(gt);

            OrientedBox det;
            det.center = {pose.center.x + nm.box_jitter_sigma * len * rng.normal(),
                          pose.center.y + nm.box_jitter_sigma * wid * rng.normal()};
            det.w = std::max(2.0, len * (1.0 + nm.box_jitter_sigma * rng.normal()));
            det.h = std::max(1.0, wid * (1.0 + nm.box_jitter_sigma * rng.normal()));
            det.theta_raw =
                wrap_deg_180(pose.heading_deg + 90.0 * nm.box_jitter_sigma * rng.normal());
            det.score = rng.uniform(0.75, 0.99);
            det_rec.detections.push_back(det);

            const CropRegion crop = crop_square(det);
            const double side = part_box_side(crop);
            const Vec2 head_frame = pose.center + unit_vec(pose.heading_deg) * (len / 2.0);
            const Vec2 tail_frame = pose.center - unit_vec(pose.heading_deg) * (len / 2.0);

            for (DetectorId det_id :
                 {DetectorId::HeadTail, DetectorId::HeadOnly, DetectorId::TailOnly}) {
                PartRecord pr{t, a, det_id, {}};
                const bool emits_head = det_id != DetectorId::TailOnly;
                const bool emits_tail = det_id != DetectorId::HeadOnly;

                for (PartClass cls : {PartClass::Head, PartClass::Tail}) {
                    if (cls == PartClass::Head && !emits_head) continue;
                    if (cls == PartClass::Tail && !emits_tail) continue;
                    if (rng.bernoulli(nm.miss_rate)) continue;
                    const Vec2 truth =
                        frame_to_crop(crop, cls == PartClass::Head ? head_frame : tail_frame);
                    const Vec2 jittered{truth.x + nm.jitter_sigma * side * rng.normal(),
                                        truth.y + nm.jitter_sigma * side * rng.normal()};
                    pr.parts.push_back(
                        {det_id, cls, square_box(jittered, side), rng.uniform(0.5, 0.99)});
                }
                if (rng.bernoulli(nm.false_positive_rate)) {
                    PartClass cls;
                    if (det_id == DetectorId::HeadOnly) cls = PartClass::Head;
                    else if (det_id == DetectorId::TailOnly) cls = PartClass::Tail;
                    else cls = rng.bernoulli(0.5) ? PartClass::Head : PartClass::Tail;
                    const Vec2 pos{rng.uniform(0.0, crop.side), rng.uniform(0.0, crop.side)};
                    pr.parts.push_back({det_id, cls, square_box(pos, side), rng.uniform(0.5, 0.99)});
                }
                part_out.write_parts(pr);
            }
        }
        det_out.write_detections(det_rec);
        gt_out.write_ground_truth(gt_rec);
    }
    return paths;
}

HeadEval eval_heads(const std::string& detections_path, const std::string& parts_path,
                    const std::string& gt_path, std::optional<DetectorId> only_detector,
                    double part_iou_threshold, double correct_iou) {
    DetectionReader dets(detections_path);
    PartReader parts(parts_path);

    std::map<long, std::vector<GtDetection>> gt;
    for (GtRecord& rec : read_ground_truth(gt_path)) gt[rec.frame] = std::move(rec.detections);

    HeadEval eval;
    while (auto rec = dets.next()) {
        const auto git = gt.find(rec->frame);
        if (git == gt.end()) continue;
        const auto& gt_dets = git->second;

        std::vector<std::vector<PartDetection>> per_det(rec->detections.size());
        for (PartRecord& pr : parts.take_frame(rec->frame)) {
            if (pr.det_index >= static_cast<int>(per_det.size())) continue;
            for (PartDetection& p : pr.parts) {
                if (only_detector && p.detector != *only_detector) continue;
                per_det[pr.det_index].push_back(p);
            }
        }

        const std::size_t n = std::min(rec->detections.size(), gt_dets.size());
        for (std::size_t i = 0; i < n; ++i) {
            ++eval.total;
            const OrientedBox& det = rec->detections[i];
            const CropRegion crop = crop_square(det);
            const double side = part_box_side(crop);

            std::optional<Vec2> estimate;
            if (only_detector == DetectorId::TailOnly) {
                if (auto v = vote_part(per_det[i], PartClass::Tail, part_iou_threshold)) {
                    const Vec2 tail = crop_to_frame(crop, v->point);
                    estimate = det.center * 2.0 - tail;  // mirror through the box center
                }
            } else {
                if (auto v = vote_part(per_det[i], PartClass::Head, part_iou_threshold)) {
                    estimate = crop_to_frame(crop, v->point);
                }
            }
            if (!estimate) continue;

            const GtDetection& g = gt_dets[i];
            const Vec2 gt_head =
                g.box.center + unit_vec(g.heading_deg) * (canonicalize(g.box).length / 2.0);
            if (aabb_iou(square_box(*estimate, side), square_box(gt_head, side)) >= correct_iou) {
                ++eval.correct;
            }
        }
    }
    return eval;
}

TrackEval eval_tracks(const std::vector<TrackRow>& rows, const std::string& gt_path) {
    std::map<long, std::vector<GtDetection>> gt;
    for (GtRecord& rec : read_ground_truth(gt_path)) gt[rec.frame] = std::move(rec.detections);

    std::map<long, std::vector<const TrackRow*>> rows_by_frame;
    for (const TrackRow& r : rows) rows_by_frame[r.frame].push_back(&r);

    TrackEval eval;
    double err_sum = 0.0;
    std::map<int, int> last_track_of_agent;
    std::map<int, bool> flip_armed;  // agent was tracked within 30 deg

    constexpr double kForbidden = kUnmatchableCost;
    for (const auto& [frame, gt_dets] : gt) {
        const auto rit = rows_by_frame.find(frame);
        if (rit == rows_by_frame.end()) continue;
        const auto& frame_rows = rit->second;

        std::vector<std::vector<double>> cost(gt_dets.size(),
                                              std::vector<double>(frame_rows.size(), kForbidden));
        for (std::size_t i = 0; i < gt_dets.size(); ++i) {
            const double gate = 2.0 * canonicalize(gt_dets[i].box).length;
            for (std::size_t j = 0; j < frame_rows.size(); ++j) {
                const double d = norm(gt_dets[i].box.center -
                                      Vec2{frame_rows[j]->cx, frame_rows[j]->cy});
                if (d <= gate) cost[i][j] = d;
            }
        }
        const std::vector<int> match = solve_min_cost_assignment(cost);
        for (std::size_t i = 0; i < gt_dets.size(); ++i) {
            const int j = match[i];
            if (j < 0 || cost[i][j] >= kForbidden) continue;
            const GtDetection& g = gt_dets[i];
            const TrackRow& row = *frame_rows[j];

            err_sum += cost[i][j];
            ++eval.matched_rows;

            const auto last = last_track_of_agent.find(g.agent_id);
            if (last != last_track_of_agent.end() && last->second != row.track_id) {
                ++eval.id_switches;
            }
            last_track_of_agent[g.agent_id] = row.track_id;

            const double herr = shortest_arc_deg(row.heading_deg, g.heading_deg);
            if (flip_armed[g.agent_id] && herr > 90.0) {
                ++eval.heading_flips;
                flip_armed[g.agent_id] = false;
            }
            if (herr <= 30.0) flip_armed[g.agent_id] = true;
        }
    }
    eval.mean_position_error = eval.matched_rows > 0 ? err_sum / eval.matched_rows : 0.0;

    std::map<int, const TrackRow*> prev_of_track;
    for (const auto& [frame, frame_rows] : rows_by_frame) {
        for (const TrackRow* r : frame_rows) {
            const auto prev = prev_of_track.find(r->track_id);
            if (prev != prev_of_track.end()) {
                eval.max_heading_jump_deg =
                    std::max(eval.max_heading_jump_deg,
                             shortest_arc_deg(r->heading_deg, prev->second->heading_deg));
            }
            prev_of_track[r->track_id] = r;
        }
    }
    return eval;
}

}  // namespace obbtrack
