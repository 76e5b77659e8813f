// pipeline.hpp: file-to-file orchestration of voting, heading resolution,
// and tracking. Memory stays bounded by the densest frame; rows stream to
// the CSV as frames complete.
#pragma once

#include <string>

#include "obbtrack/config.hpp"
#include "obbtrack/io.hpp"

namespace obbtrack {

struct RunSummary {
    long frames = 0;
    long detections = 0;
    long detections_kept = 0;   // at or above the score floor
    long resolved_from_head = 0;
    long resolved_from_tail = 0;
    long unresolved = 0;
    long contradictions = 0;    // head and tail voted the same side
    long stale_part_records = 0;
    long skipped_part_records = 0;  // det_index out of range
    long rows = 0;
    int active_tracks = 0;      // confirmed and alive after the last frame
    int tentative_tracks = 0;   // alive but not yet confirmed
    int total_track_ids = 0;    // ids ever issued
};

/// Consume a detections file and a parts file, write the track CSV, and
/// optionally drop an overview SVG into svg_dir. An empty parts_path runs
/// position-only tracking.
RunSummary run(const RunConfig& cfg, const std::string& detections_path,
               const std::string& parts_path, const std::string& output_csv,
               const std::string& svg_dir = "");

std::string summary_to_string(const RunSummary& s);

}  // namespace obbtrack
