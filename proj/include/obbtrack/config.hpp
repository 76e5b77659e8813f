// config.hpp: run configuration, file parsing, and key overrides.
//
// The config file is plain text, one `key = value` per line, `#` comments.
// Every key can also be supplied as a CLI flag of the same name.
#pragma once

#include <string>
#include <vector>

#include "obbtrack/tracker.hpp"

namespace obbtrack {

/// Detector noise used by the synthetic scenario generator.
struct NoiseModel {
    double miss_rate = 0.05;            // per detector per part
    double false_positive_rate = 0.05;  // per detector per crop
    double jitter_sigma = 0.10;         // part-center jitter, fraction of part-box side
    double box_jitter_sigma = 0.02;     // detection jitter, fraction of box extents
};

struct RunConfig {
    double part_iou_threshold = 0.3;  // grouping threshold for part voting
    double score_floor = 0.25;        // detections below this confidence are dropped
    TrackerConfig tracker;            // n_init, max_age, min_iou, noise
    NoiseModel synth_noise;
    double max_turn_deg = 10.0;       // per-frame heading change cap for synthetic agents
};

/// All recognized config keys, in documentation order.
std::vector<std::string> config_keys();

/// Apply one `key = value` override. Throws std::invalid_argument on an
/// unknown key or unparsable value.
void set_config_value(RunConfig& cfg, const std::string& key, const std::string& value);

/// Read a config file on top of defaults. Throws std::runtime_error with
/// the offending line number on parse errors.
RunConfig load_config(const std::string& path);

/// Render a config as a parseable file body (defaults documentation).
std::string dump_config(const RunConfig& cfg);

}  // namespace obbtrack
