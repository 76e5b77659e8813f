// io.hpp: file formats.
//
// Detections (one JSON object per line):
//   {"frame": 0, "detections": [{"cx":..,"cy":..,"w":..,"h":..,"angle_deg":..,"score":..}]}
// Parts (one JSON object per line, coordinates in the crop of the detection):
//   {"frame": 0, "det_index": 0, "detector": "head_tail"|"head"|"tail",
//    "parts": [{"class":"head"|"tail","cx":..,"cy":..,"side":..,"score":..}]}
// Ground truth: detections format plus "agent_id" and "heading_deg".
// Track CSV: frame,track_id,cx,cy,length,width,heading_deg,heading_source,status
#pragma once

#include <fstream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "obbtrack/heading.hpp"
#include "obbtrack/parts.hpp"
#include "obbtrack/tracker.hpp"

namespace obbtrack {

struct DetectionRecord {
    long frame = 0;
    std::vector<OrientedBox> detections;
};

/// Streams detection records in frame order, validating field ranges and
/// the strictly increasing frame index. Errors carry the line number.
class DetectionReader {
  public:
    explicit DetectionReader(const std::string& path);
    ~DetectionReader();

    /// Next record, or nullopt at end of file.
    std::optional<DetectionRecord> next();

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

struct PartRecord {
    long frame = 0;
    int det_index = 0;
    DetectorId detector = DetectorId::HeadTail;
    std::vector<PartDetection> parts;
};

/// Streams part records grouped by frame. Records must arrive in
/// nondecreasing frame order; stale records are counted and skipped.
class PartReader {
  public:
    explicit PartReader(const std::string& path);
    ~PartReader();

    /// All records for exactly this frame (consumes the stream up to it).
    std::vector<PartRecord> take_frame(long frame);
    long stale_records() const;

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

struct GtDetection {
    OrientedBox box;
    int agent_id = 0;
    double heading_deg = 0.0;  // true full-circle heading
};

struct GtRecord {
    long frame = 0;
    std::vector<GtDetection> detections;
};

std::vector<GtRecord> read_ground_truth(const std::string& path);

// Line-oriented writers used by the synthetic generator.
class JsonlWriter {
  public:
    explicit JsonlWriter(const std::string& path);
    void write_detections(const DetectionRecord& rec);
    void write_parts(const PartRecord& rec);
    void write_ground_truth(const GtRecord& rec);

  private:
    std::ofstream out_;
    std::string path_;
};

enum class RowSource { Head = 0, Tail = 1, Predicted = 2 };

struct TrackRow {
    long frame = 0;
    int track_id = 0;
    double cx = 0.0;
    double cy = 0.0;
    double length = 0.0;
    double width = 0.0;
    double heading_deg = 0.0;
    RowSource source = RowSource::Predicted;
    TrackStatus status = TrackStatus::Confirmed;
};

/// Appends CSV rows as they are produced; writes the header up front.
class TrackCsvWriter {
  public:
    explicit TrackCsvWriter(const std::string& path);
    void append(const TrackRow& row);
    void flush();

  private:
    std::ofstream out_;
};

void write_tracks(const std::vector<TrackRow>& rows, const std::string& path);
std::vector<TrackRow> read_tracks(const std::string& path);

/// One overview SVG: per-track polylines with heading arrows. A frame range
/// of [-1, -1] means all rows.
void render_svg(const std::vector<TrackRow>& rows, const std::string& path,
                long frame_begin = -1, long frame_end = -1);

const char* to_string(DetectorId d);
const char* to_string(PartClass c);
const char* to_string(RowSource s);
const char* to_string(TrackStatus s);

}  // namespace obbtrack
