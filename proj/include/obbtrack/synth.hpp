// synth.hpp: synthetic scenarios with known ground truth, plus the
// evaluation metrics used to score voting and tracking against them.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "obbtrack/config.hpp"
#include "obbtrack/io.hpp"

namespace obbtrack {

enum class Preset { Line = 0, Cross = 1, Figure8 = 2, Herd = 3 };

Preset preset_from_string(const std::string& name);
const char* to_string(Preset p);

struct SynthConfig {
    Preset preset = Preset::Line;
    int n_agents = 2;
    int frames = 100;
    std::uint64_t seed = 1;
    NoiseModel noise;
    double max_turn_deg = 10.0;  // per-frame heading change cap
};

struct AgentPose {
    Vec2 center;
    double heading_deg = 0.0;  // true heading in [0, 360)
};

struct Scenario {
    int n_agents = 0;
    int frames = 0;
    std::uint64_t seed = 0;
    std::vector<double> lengths;  // per agent, px
    std::vector<double> widths;
    std::vector<std::vector<AgentPose>> poses;  // [agent][frame]
};

/// Smooth ground-truth trajectories for the chosen preset. Deterministic in
/// (config, seed); per-frame turn never exceeds max_turn_deg.
Scenario build_scenario(const SynthConfig& cfg);

struct SynthPaths {
    std::string detections;
    std::string parts;
    std::string ground_truth;
};

/// Render a scenario to detections/parts/ground-truth files under out_dir.
/// Detections carry the half-turn raw angle; parts sit at the true short-edge
/// midpoints in crop coordinates, corrupted per the NoiseModel.
SynthPaths generate(const SynthConfig& cfg, const std::string& out_dir);

struct HeadEval {
    long total = 0;
    long correct = 0;
    double accuracy() const { return total > 0 ? static_cast<double>(correct) / total : 0.0; }
};

/// Score voted head locations against ground truth, crop by crop: correct
/// when the voted head square overlaps the true head square with IoU >=
/// correct_iou. Restricting to one detector scores that model alone; the
/// tail-only model estimates the head by reflecting its voted tail through
/// the detection center.
HeadEval eval_heads(const std::string& detections_path, const std::string& parts_path,
                    const std::string& gt_path, std::optional<DetectorId> only_detector,
                    double part_iou_threshold = 0.3, double correct_iou = 0.3);

struct TrackEval {
    int id_switches = 0;
    int heading_flips = 0;  // error crossed 90 deg after being within 30 deg
    double mean_position_error = 0.0;
    double max_heading_jump_deg = 0.0;  // per-track frame-to-frame, shortest arc
    long matched_rows = 0;
};

/// Match rows to ground-truth agents per frame (min-cost on center
/// distance) and accumulate identity and heading metrics.
TrackEval eval_tracks(const std::vector<TrackRow>& rows, const std::string& gt_path);

}  // namespace obbtrack
