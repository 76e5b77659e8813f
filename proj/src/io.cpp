#include "obbtrack/io.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace obbtrack {

namespace {

using ordered_json = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& path, long line, const std::string& msg) {
    throw std::runtime_error(path + ":" + std::to_string(line) + ": " + msg);
}

double require_number(const nlohmann::json& j, const char* key, const std::string& path, long line) {
    if (!j.contains(key) || !j[key].is_number()) {
        fail(path, line, std::string("missing or non-numeric field '") + key + "'");
    }
    const double v = j[key].get<double>();
    if (!std::isfinite(v)) fail(path, line, std::string("non-finite field '") + key + "'");
    return v;
}

long require_integer(const nlohmann::json& j, const char* key, const std::string& path, long line) {
    if (!j.contains(key) || !j[key].is_number_integer()) {
        fail(path, line, std::string("missing or non-integer field '") + key + "'");
    }
    return j[key].get<long>();
}

OrientedBox parse_box(const nlohmann::json& j, const std::string& path, long line) {
    OrientedBox box;
    box.center.x = require_number(j, "cx", path, line);
    box.center.y = require_number(j, "cy", path, line);
    box.w = require_number(j, "w", path, line);
    box.h = require_number(j, "h", path, line);
    box.theta_raw = require_number(j, "angle_deg", path, line);
    box.score = require_number(j, "score", path, line);
    if (box.w <= 0.0 || box.h <= 0.0) fail(path, line, "box extents must be positive");
    if (box.theta_raw < 0.0 || box.theta_raw >= 180.0) {
        fail(path, line, "angle_deg must lie in [0, 180)");
    }
    if (box.score < 0.0 || box.score > 1.0) fail(path, line, "score must lie in [0, 1]");
    return box;
}

DetectorId parse_detector(const std::string& s, const std::string& path, long line) {
    if (s == "head_tail") return DetectorId::HeadTail;
    if (s == "head") return DetectorId::HeadOnly;
    if (s == "tail") return DetectorId::TailOnly;
    fail(path, line, "unknown detector '" + s + "'");
}

PartClass parse_part_class(const std::string& s, const std::string& path, long line) {
    if (s == "head") return PartClass::Head;
    if (s == "tail") return PartClass::Tail;
    fail(path, line, "unknown part class '" + s + "'");
}

// Reads lines, skipping blank ones, and parses each as a JSON object.
struct JsonlReader {
    std::ifstream in;
    std::string path;
    long line_no = 0;

    explicit JsonlReader(const std::string& p) : in(p), path(p) {
        if (!in) throw std::runtime_error("cannot open '" + p + "'");
    }

    std::optional<nlohmann::json> next() {
        std::string line;
        while (std::getline(in, line)) {
            ++line_no;
            if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
            nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
            if (j.is_discarded() || !j.is_object()) fail(path, line_no, "malformed JSON object");
            return j;
        }
        return std::nullopt;
    }
};

std::string format_fixed(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return buf;
}

}  // namespace

const char* to_string(DetectorId d) {
    switch (d) {
        case DetectorId::HeadTail: return "head_tail";
        case DetectorId::HeadOnly: return "head";
        case DetectorId::TailOnly: return "tail";
    }
    return "?";
}

const char* to_string(PartClass c) {
    return c == PartClass::Head ? "head" : "tail";
}

const char* to_string(RowSource s) {
    switch (s) {
        case RowSource::Head: return "head";
        case RowSource::Tail: return "tail";
        case RowSource::Predicted: return "predicted";
    }
    return "?";
}

const char* to_string(TrackStatus s) {
    switch (s) {
        case TrackStatus::Tentative: return "tentative";
        case TrackStatus::Confirmed: return "confirmed";
        case TrackStatus::Deleted: return "deleted";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// DetectionReader

struct DetectionReader::Impl {
    JsonlReader reader;
    long last_frame = -1;

    explicit Impl(const std::string& p) : reader(p) {}
};

DetectionReader::DetectionReader(const std::string& path) : impl_(new Impl(path)) {}
DetectionReader::~DetectionReader() = default;

std::optional<DetectionRecord> DetectionReader::next() {
    auto j = impl_->reader.next();
    if (!j) return std::nullopt;
    const std::string& path = impl_->reader.path;
    const long line = impl_->reader.line_no;

    DetectionRecord rec;
    rec.frame = require_integer(*j, "frame", path, line);
    if (rec.frame < 0) fail(path, line, "frame index must be nonnegative");
    if (rec.frame <= impl_->last_frame) {
        fail(path, line, "nonmonotonic frame index (" + std::to_string(rec.frame) + " after " +
                             std::to_string(impl_->last_frame) + ")");
    }
    impl_->last_frame = rec.frame;

    if (!j->contains("detections") || !(*j)["detections"].is_array()) {
        fail(path, line, "missing 'detections' array");
    }
    for (const auto& d : (*j)["detections"]) {
        rec.detections.push_back(parse_box(d, path, line));
    }
    return rec;
}

// ---------------------------------------------------------------------------
// PartReader

struct PartReader::Impl {
    JsonlReader reader;
    std::optional<PartRecord> pending;
    long stale = 0;

    explicit Impl(const std::string& p) : reader(p) {}

    std::optional<PartRecord> read_one() {
        auto j = reader.next();
        if (!j) return std::nullopt;
        const long line = reader.line_no;

        PartRecord rec;
        rec.frame = require_integer(*j, "frame", reader.path, line);
        rec.det_index = static_cast<int>(require_integer(*j, "det_index", reader.path, line));
        if (rec.det_index < 0) fail(reader.path, line, "det_index must be nonnegative");
        if (!j->contains("detector") || !(*j)["detector"].is_string()) {
            fail(reader.path, line, "missing 'detector'");
        }
        rec.detector = parse_detector((*j)["detector"].get<std::string>(), reader.path, line);
        if (!j->contains("parts") || !(*j)["parts"].is_array()) {
            fail(reader.path, line, "missing 'parts' array");
        }
        for (const auto& p : (*j)["parts"]) {
            PartDetection det;
            det.detector = rec.detector;
            if (!p.contains("class") || !p["class"].is_string()) {
                fail(reader.path, line, "part missing 'class'");
            }
            det.part = parse_part_class(p["class"].get<std::string>(), reader.path, line);
            if (rec.detector == DetectorId::HeadOnly && det.part != PartClass::Head) {
                fail(reader.path, line, "head detector emitted a tail part");
            }
            if (rec.detector == DetectorId::TailOnly && det.part != PartClass::Tail) {
                fail(reader.path, line, "tail detector emitted a head part");
            }
            const double cx = require_number(p, "cx", reader.path, line);
            const double cy = require_number(p, "cy", reader.path, line);
            const double side = require_number(p, "side", reader.path, line);
            det.score = require_number(p, "score", reader.path, line);
            if (side <= 0.0) fail(reader.path, line, "part side must be positive");
            if (det.score < 0.0 || det.score > 1.0) fail(reader.path, line, "part score out of [0, 1]");
            det.box = square_box({cx, cy}, side);
            rec.parts.push_back(det);
        }
        return rec;
    }
};

PartReader::PartReader(const std::string& path) : impl_(new Impl(path)) {}
PartReader::~PartReader() = default;

std::vector<PartRecord> PartReader::take_frame(long frame) {
    std::vector<PartRecord> out;
    for (;;) {
        if (!impl_->pending) {
            impl_->pending = impl_->read_one();
            if (!impl_->pending) break;
        }
        if (impl_->pending->frame > frame) break;
        if (impl_->pending->frame == frame) {
            out.push_back(std::move(*impl_->pending));
        } else {
            ++impl_->stale;
        }
        impl_->pending.reset();
    }
    return out;
}

long PartReader::stale_records() const { return impl_->stale; }

// ---------------------------------------------------------------------------
// Ground truth

std::vector<GtRecord> read_ground_truth(const std::string& path) {
    JsonlReader reader(path);
    std::vector<GtRecord> out;
    while (auto j = reader.next()) {
        const long line = reader.line_no;
        GtRecord rec;
        rec.frame = require_integer(*j, "frame", path, line);
        if (!j->contains("detections") || !(*j)["detections"].is_array()) {
            fail(path, line, "missing 'detections' array");
        }
        for (const auto& d : (*j)["detections"]) {
            GtDetection gt;
            gt.box = parse_box(d, path, line);
            gt.agent_id = static_cast<int>(require_integer(d, "agent_id", path, line));
            gt.heading_deg = require_number(d, "heading_deg", path, line);
            rec.detections.push_back(gt);
        }
        out.push_back(std::move(rec));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Writers

JsonlWriter::JsonlWriter(const std::string& path) : out_(path), path_(path) {
    if (!out_) throw std::runtime_error("cannot open '" + path + "' for writing");
}

void JsonlWriter::write_detections(const DetectionRecord& rec) {
    ordered_json j;
    j["frame"] = rec.frame;
    j["detections"] = ordered_json::array();
    for (const OrientedBox& b : rec.detections) {
        j["detections"].push_back({{"cx", b.center.x},
                                   {"cy", b.center.y},
                                   {"w", b.w},
                                   {"h", b.h},
                                   {"angle_deg", b.theta_raw},
                                   {"score", b.score}});
    }
    out_ << j.dump() << "\n";
}

void JsonlWriter::write_parts(const PartRecord& rec) {
    ordered_json j;
    j["frame"] = rec.frame;
    j["det_index"] = rec.det_index;
    j["detector"] = to_string(rec.detector);
    j["parts"] = ordered_json::array();
    for (const PartDetection& p : rec.parts) {
        const Vec2 c = p.box.center();
        j["parts"].push_back({{"class", to_string(p.part)},
                              {"cx", c.x},
                              {"cy", c.y},
                              {"side", p.box.width()},
                              {"score", p.score}});
    }
    out_ << j.dump() << "\n";
}

void JsonlWriter::write_ground_truth(const GtRecord& rec) {
    ordered_json j;
    j["frame"] = rec.frame;
    j["detections"] = ordered_json::array();
    for (const GtDetection& d : rec.detections) {
        j["detections"].push_back({{"cx", d.box.center.x},
                                   {"cy", d.box.center.y},
                                   {"w", d.box.w},
                                   {"h", d.box.h},
                                   {"angle_deg", d.box.theta_raw},
                                   {"score", d.box.score},
                                   {"agent_id", d.agent_id},
                                   {"heading_deg", d.heading_deg}});
    }
    out_ << j.dump() << "\n";
}

// ---------------------------------------------------------------------------
// Track CSV

static const char* kCsvHeader = "frame,track_id,cx,cy,length,width,heading_deg,heading_source,status";

TrackCsvWriter::TrackCsvWriter(const std::string& path) : out_(path) {
    if (!out_) throw std::runtime_error("cannot open '" + path + "' for writing");
    out_ << kCsvHeader << "\n";
}

void TrackCsvWriter::append(const TrackRow& row) {
    double heading = wrap_deg_360(row.heading_deg);
    if (heading >= 359.99995) heading = 0.0;  // keep the 4-decimal rendering below 360
    out_ << row.frame << ',' << row.track_id << ',' << format_fixed(row.cx) << ','
         << format_fixed(row.cy) << ',' << format_fixed(row.length) << ','
         << format_fixed(row.width) << ',' << format_fixed(heading) << ','
         << to_string(row.source) << ',' << to_string(row.status) << "\n";
}

void TrackCsvWriter::flush() { out_.flush(); }

void write_tracks(const std::vector<TrackRow>& rows, const std::string& path) {
    TrackCsvWriter writer(path);
    for (const TrackRow& r : rows) writer.append(r);
}

std::vector<TrackRow> read_tracks(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");

    std::string line;
    long line_no = 0;
    if (!std::getline(in, line)) throw std::runtime_error(path + ": empty file");
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kCsvHeader) throw std::runtime_error(path + ": unexpected CSV header");

    std::vector<TrackRow> rows;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string f;
        while (std::getline(ss, f, ',')) fields.push_back(f);
        if (fields.size() != 9) fail(path, line_no, "expected 9 fields");
        try {
            TrackRow row;
            row.frame = std::stol(fields[0]);
            row.track_id = std::stoi(fields[1]);
            row.cx = std::stod(fields[2]);
            row.cy = std::stod(fields[3]);
            row.length = std::stod(fields[4]);
            row.width = std::stod(fields[5]);
            row.heading_deg = std::stod(fields[6]);
            if (fields[7] == "head") row.source = RowSource::Head;
            else if (fields[7] == "tail") row.source = RowSource::Tail;
            else if (fields[7] == "predicted") row.source = RowSource::Predicted;
            else fail(path, line_no, "unknown heading_source '" + fields[7] + "'");
            if (fields[8] == "tentative") row.status = TrackStatus::Tentative;
            else if (fields[8] == "confirmed") row.status = TrackStatus::Confirmed;
            else fail(path, line_no, "unknown status '" + fields[8] + "'");
            rows.push_back(row);
        } catch (const std::invalid_argument&) {
            fail(path, line_no, "unparsable numeric field");
        }
    }
    return rows;
}

// ---------------------------------------------------------------------------
// SVG rendering

void render_svg(const std::vector<TrackRow>& rows, const std::string& path,
                long frame_begin, long frame_end) {
    std::vector<TrackRow> kept;
    for (const TrackRow& r : rows) {
        if (frame_begin >= 0 && r.frame < frame_begin) continue;
        if (frame_end >= 0 && r.frame > frame_end) continue;
        kept.push_back(r);
    }

    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");

    if (kept.empty()) {
        out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"200\" height=\"60\">"
            << "<text x=\"10\" y=\"30\">no rows</text></svg>\n";
        return;
    }

    double min_x = kept[0].cx, max_x = kept[0].cx, min_y = kept[0].cy, max_y = kept[0].cy;
    long min_f = kept[0].frame, max_f = kept[0].frame;
    for (const TrackRow& r : kept) {
        min_x = std::min(min_x, r.cx);
        max_x = std::max(max_x, r.cx);
        min_y = std::min(min_y, r.cy);
        max_y = std::max(max_y, r.cy);
        min_f = std::min(min_f, r.frame);
        max_f = std::max(max_f, r.frame);
    }
    const double margin = 40.0;
    const double span_x = std::max(max_x - min_x, 1.0);
    const double span_y = std::max(max_y - min_y, 1.0);
    const double scale = 960.0 / span_x;
    const double w = span_x * scale + 2 * margin;
    const double h = span_y * scale + 2 * margin;
    const auto sx = [&](double x) { return (x - min_x) * scale + margin; };
    const auto sy = [&](double y) { return (y - min_y) * scale + margin; };

    std::map<int, std::vector<const TrackRow*>> by_id;
    for (const TrackRow& r : kept) by_id[r.track_id].push_back(&r);

    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" height=\"%.0f\" "
                  "viewBox=\"0 0 %.0f %.0f\">\n",
                  w, h, w, h);
    out << buf;
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    const long arrow_stride = std::max<long>(1, (max_f - min_f + 1) / 40);
    for (const auto& [id, track_rows] : by_id) {
        const int hue = (id * 47) % 360;
        out << "<g stroke=\"hsl(" << hue << ",70%,40%)\" fill=\"none\" stroke-width=\"1.5\">\n";
        out << "<polyline points=\"";
        for (const TrackRow* r : track_rows) {
            std::snprintf(buf, sizeof(buf), "%.2f,%.2f ", sx(r->cx), sy(r->cy));
            out << buf;
        }
        out << "\"/>\n";
        for (const TrackRow* r : track_rows) {
            if (r->frame % arrow_stride != 0) continue;
            const double a = deg_to_rad(r->heading_deg);
            const double len = std::max(6.0, 0.5 * r->length * scale);
            const double x0 = sx(r->cx), y0 = sy(r->cy);
            const double x1 = x0 + len * std::cos(a), y1 = y0 + len * std::sin(a);
            const double hx = x1 - 0.35 * len * std::cos(a - 0.45);
            const double hy = y1 - 0.35 * len * std::sin(a - 0.45);
            const double gx = x1 - 0.35 * len * std::cos(a + 0.45);
            const double gy = y1 - 0.35 * len * std::sin(a + 0.45);
            std::snprintf(buf, sizeof(buf),
                          "<path d=\"M %.2f %.2f L %.2f %.2f M %.2f %.2f L %.2f %.2f L %.2f %.2f\"/>\n",
                          x0, y0, x1, y1, hx, hy, x1, y1, gx, gy);
            out << buf;
        }
        // id label at the first point
        std::snprintf(buf, sizeof(buf),
                      "<text x=\"%.2f\" y=\"%.2f\" stroke=\"none\" fill=\"hsl(%d,70%%,30%%)\" "
                      "font-size=\"12\">%d</text>\n",
                      sx(track_rows.front()->cx) + 4, sy(track_rows.front()->cy) - 4, hue, id);
        out << buf;
        out << "</g>\n";
    }
    out << "</svg>\n";
}

}  // namespace obbtrack
