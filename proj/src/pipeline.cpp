#include "obbtrack/pipeline.hpp"

#include <filesystem>
#include <iostream>
#include <memory>
#include <sstream>

#include "obbtrack/tracker.hpp"

namespace obbtrack {

namespace {

RowSource to_row_source(HeadingSource s) {
    switch (s) {
        case HeadingSource::FromHead: return RowSource::Head;
        case HeadingSource::FromTail: return RowSource::Tail;
        case HeadingSource::None: return RowSource::Predicted;
    }
    return RowSource::Predicted;
}

}  // namespace

RunSummary run(const RunConfig& cfg, const std::string& detections_path,
               const std::string& parts_path, const std::string& output_csv,
               const std::string& svg_dir) {
    RunSummary summary;
    DetectionReader det_reader(detections_path);
    std::unique_ptr<PartReader> part_reader;
    if (!parts_path.empty()) part_reader = std::make_unique<PartReader>(parts_path);

    TrackCsvWriter csv(output_csv);
    Tracker tracker(cfg.tracker);

    while (auto rec = det_reader.next()) {
        ++summary.frames;
        summary.detections += static_cast<long>(rec->detections.size());

        std::vector<std::vector<PartDetection>> per_det(rec->detections.size());
        if (part_reader) {
            for (PartRecord& pr : part_reader->take_frame(rec->frame)) {
                if (pr.det_index >= static_cast<int>(per_det.size())) {
                    std::cerr << "warning: frame " << rec->frame << ": part record references "
                              << "detection " << pr.det_index << " of " << per_det.size()
                              << "; skipped\n";
                    ++summary.skipped_part_records;
                    continue;
                }
                auto& bucket = per_det[pr.det_index];
                bucket.insert(bucket.end(), pr.parts.begin(), pr.parts.end());
            }
        }

        std::vector<Observation> observations;
        std::vector<HeadingSource> obs_source;
        for (std::size_t i = 0; i < rec->detections.size(); ++i) {
            const OrientedBox& det = rec->detections[i];
            if (det.score < cfg.score_floor) continue;
            ++summary.detections_kept;

            const CropRegion crop = crop_square(det);
            const VoteOutcome vote = vote_parts(per_det[i], cfg.part_iou_threshold);
            std::optional<Vec2> head, tail;
            if (vote.head) head = crop_to_frame(crop, vote.head->point);
            if (vote.tail) tail = crop_to_frame(crop, vote.tail->point);

            const HeadingResolution res = resolve_heading(det, head, tail);
            if (res.contradiction) ++summary.contradictions;
            if (res.resolved()) {
                (res.source == HeadingSource::FromHead ? summary.resolved_from_head
                                                       : summary.resolved_from_tail)++;
                observations.push_back(Observation::resolved(*res.box));
            } else {
                ++summary.unresolved;
                observations.push_back(Observation::ambiguous(det));
            }
            obs_source.push_back(res.source);
        }

        for (const TrackOutput& o : tracker.step(rec->frame, observations)) {
            TrackRow row;
            row.frame = rec->frame;
            row.track_id = o.id;
            row.cx = o.box.center.x;
            row.cy = o.box.center.y;
            row.length = o.box.length;
            row.width = o.box.width;
            row.heading_deg = o.box.heading;
            row.source = o.matched_obs >= 0 ? to_row_source(obs_source[o.matched_obs])
                                            : RowSource::Predicted;
            row.status = o.status;
            csv.append(row);
            ++summary.rows;
        }
    }

    csv.flush();
    if (part_reader) summary.stale_part_records = part_reader->stale_records();
    for (const Track& t : tracker.tracks()) {
        if (t.status == TrackStatus::Confirmed) ++summary.active_tracks;
        if (t.status == TrackStatus::Tentative) ++summary.tentative_tracks;
    }
    summary.total_track_ids = tracker.ids_issued();

    if (!svg_dir.empty()) {
        std::filesystem::create_directories(svg_dir);
        const auto rows = read_tracks(output_csv);
        render_svg(rows, (std::filesystem::path(svg_dir) / "trajectories.svg").string());
    }
    return summary;
}

std::string summary_to_string(const RunSummary& s) {
    std::ostringstream out;
    out << "frames:              " << s.frames << "\n"
        << "detections:          " << s.detections << " (" << s.detections_kept
        << " above score floor)\n"
        << "headings from head:  " << s.resolved_from_head << "\n"
        << "headings from tail:  " << s.resolved_from_tail << "\n"
        << "unresolved headings: " << s.unresolved << "\n"
        << "contradictions:      " << s.contradictions << "\n"
        << "part records skipped: " << s.skipped_part_records << " (stale: "
        << s.stale_part_records << ")\n"
        << "rows written:        " << s.rows << "\n"
        << "active tracks:       " << s.active_tracks << " confirmed, " << s.tentative_tracks
        << " tentative\n";
    return out.str();
}

}  // namespace obbtrack
