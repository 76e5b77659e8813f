#include "obbtrack/tracker.hpp"

#include <algorithm>
#include <stdexcept>

#include "obbtrack/assignment.hpp"
#include "obbtrack/heading.hpp"

namespace obbtrack {

Association associate(const std::vector<Track>& tracks, const std::vector<Observation>& obs,
                      const KalmanFilter& kf, double min_iou) {
    Association out;
    const int n = static_cast<int>(tracks.size());
    const int m = static_cast<int>(obs.size());
    if (n == 0 || m == 0) {
        for (int i = 0; i < n; ++i) out.unmatched_tracks.push_back(i);
        for (int j = 0; j < m; ++j) out.unmatched_obs.push_back(j);
        return out;
    }

    std::vector<std::vector<double>> cost(n, std::vector<double>(m, kUnmatchableCost));
    for (int i = 0; i < n; ++i) {
        const HeadedBox pred = tracks[i].predicted_box();
        for (int j = 0; j < m; ++j) {
            if (!kf.gate(tracks[i].state, tracks[i].last_box.length, obs[j])) continue;
            cost[i][j] = 1.0 - rotated_iou(pred, obs[j].box);
        }
    }

    const std::vector<int> row_to_col = solve_min_cost_assignment(cost);
    std::vector<char> obs_matched(m, 0);
    for (int i = 0; i < n; ++i) {
        const int j = row_to_col[i];
        if (j >= 0 && cost[i][j] < 1.0 - min_iou) {
            out.matches.emplace_back(i, j);
            obs_matched[j] = 1;
        } else {
            out.unmatched_tracks.push_back(i);
        }
    }
    for (int j = 0; j < m; ++j) {
        if (!obs_matched[j]) out.unmatched_obs.push_back(j);
    }
    return out;
}

Tracker::Tracker(TrackerConfig cfg) : cfg_(cfg), kf_(cfg.noise) {}

Track Tracker::spawn(const Observation& obs) {
    Track t;
    t.id = next_id_++;
    t.state = kf_.initiate(obs);
    t.last_box = obs.box;
    t.angle_initialized = obs.has_heading;
    if (cfg_.n_init <= 1) t.status = TrackStatus::Confirmed;
    return t;
}

std::vector<TrackOutput> Tracker::step(long frame_index, const std::vector<Observation>& obs) {
    if (started_ && frame_index <= last_frame_) {
        throw std::runtime_error("Tracker::step: out-of-order frame index");
    }
    started_ = true;
    last_frame_ = frame_index;

    for (Track& t : tracks_) {
        t.state = kf_.predict(t.state, t.last_box.length);
        ++t.age;
    }

    const Association assoc = associate(tracks_, obs, kf_, cfg_.min_iou);

    std::vector<int> matched_obs_of(tracks_.size(), -1);
    for (const auto& [ti, oi] : assoc.matches) {
        Track& t = tracks_[ti];
        const Observation& o = obs[oi];
        if (!t.angle_initialized && o.has_heading) {
            // First resolved heading: fold the position in through the
            // filter, then adopt the measured trig pair outright instead of
            // blending it with the placeholder.
            Observation pos_only = o;
            pos_only.has_heading = false;
            t.state = kf_.update(t.state, pos_only);
            const auto [sin_t, cos_t] = heading_to_trig(o.box.heading);
            t.state.mean(2) = sin_t;
            t.state.mean(3) = cos_t;
            const double sa = cfg_.noise.p0_ang * cfg_.noise.r_ang;
            t.state.cov.row(2).setZero();
            t.state.cov.row(3).setZero();
            t.state.cov.col(2).setZero();
            t.state.cov.col(3).setZero();
            t.state.cov(2, 2) = sa * sa;
            t.state.cov(3, 3) = sa * sa;
            t.angle_initialized = true;
        } else {
            t.state = kf_.update(t.state, o);
        }
        t.last_box = o.box;
        ++t.hits;
        ++t.consecutive_hits;
        t.time_since_update = 0;
        matched_obs_of[ti] = oi;
        if (t.status == TrackStatus::Tentative && t.consecutive_hits >= cfg_.n_init) {
            t.status = TrackStatus::Confirmed;
        }
    }

    for (int ti : assoc.unmatched_tracks) {
        Track& t = tracks_[ti];
        ++t.time_since_update;
        t.consecutive_hits = 0;
        if (t.status == TrackStatus::Tentative) {
            t.status = TrackStatus::Deleted;  // a broken streak can never confirm
        } else if (t.time_since_update > cfg_.max_age) {
            t.status = TrackStatus::Deleted;
        }
    }

    std::vector<TrackOutput> outputs;
    for (std::size_t i = 0; i < tracks_.size(); ++i) {
        const Track& t = tracks_[i];
        if (t.status != TrackStatus::Confirmed) continue;
        TrackOutput o;
        o.id = t.id;
        o.box = t.predicted_box();  // center/heading from state, extents from last box
        o.status = t.status;
        o.matched_obs = matched_obs_of[i];
        outputs.push_back(o);
    }

    for (int oi : assoc.unmatched_obs) {
        tracks_.push_back(spawn(obs[oi]));
        const Track& t = tracks_.back();
        if (t.status == TrackStatus::Confirmed) {
            outputs.push_back({t.id, t.predicted_box(), t.status, oi});
        }
    }

    std::erase_if(tracks_, [](const Track& t) { return t.status == TrackStatus::Deleted; });
    std::sort(outputs.begin(), outputs.end(),
              [](const TrackOutput& a, const TrackOutput& b) { return a.id < b.id; });
    return outputs;
}

}  // namespace obbtrack
