// tracker.hpp: SORT-style multi-object tracker over headed boxes.
//
// Per frame: predict every track, associate predictions to observations by
// rotated-IoU cost under a Mahalanobis gate, update matches, spawn
// tentative tracks from leftovers, and age out the rest.
#pragma once

#include <limits>
#include <vector>

#include "obbtrack/kalman.hpp"

namespace obbtrack {

enum class TrackStatus { Tentative = 0, Confirmed = 1, Deleted = 2 };

struct Track {
    int id = 0;
    TrackState state;
    int hits = 1;
    int age = 1;
    int time_since_update = 0;
    int consecutive_hits = 1;
    TrackStatus status = TrackStatus::Tentative;
    HeadedBox last_box;
    // False until a resolved heading has been folded into the state; until
    // then the trig pair is a placeholder and only evolves by prediction.
    bool angle_initialized = false;

    /// Box used for association cost: predicted center and state heading
    /// with the last observed extents.
    HeadedBox predicted_box() const {
        return {{state.mean(0), state.mean(1)}, last_box.length, last_box.width,
                heading_of(state), last_box.score};
    }
};

struct TrackerConfig {
    int n_init = 3;       // consecutive hits to confirm
    int max_age = 30;     // frames a confirmed track may coast
    double min_iou = 0.1; // matches at or below this overlap are rejected
    NoiseConfig noise;
};

struct Association {
    std::vector<std::pair<int, int>> matches;  // (track index, obs index)
    std::vector<int> unmatched_tracks;
    std::vector<int> unmatched_obs;
};

/// Gated min-cost association. Cost is 1 - rotated_iou(predicted box, obs
/// box); pairs failing the chi-square gate are forbidden, and assignments
/// with cost >= 1 - min_iou are dropped afterwards. A rectangle's corners
/// ignore a half-turn of its heading, so the cost is insensitive to the
/// 180-degree ambiguity of unresolved observations.
Association associate(const std::vector<Track>& tracks, const std::vector<Observation>& obs,
                      const KalmanFilter& kf, double min_iou);

struct TrackOutput {
    int id = 0;
    HeadedBox box;
    TrackStatus status = TrackStatus::Confirmed;
    int matched_obs = -1;  // observation index consumed this frame, -1 if coasting
};

class Tracker {
  public:
    explicit Tracker(TrackerConfig cfg = {});

    /// Process one frame of observations. Frame indices must be strictly
    /// increasing (throws std::runtime_error otherwise); the filter always
    /// steps dt = 1 frame. Returns every live confirmed track, id-sorted.
    std::vector<TrackOutput> step(long frame_index, const std::vector<Observation>& obs);

    const std::vector<Track>& tracks() const { return tracks_; }
    const KalmanFilter& filter() const { return kf_; }
    const TrackerConfig& config() const { return cfg_; }
    int ids_issued() const { return next_id_ - 1; }

  private:
    Track spawn(const Observation& obs);

    TrackerConfig cfg_;
    KalmanFilter kf_;
    std::vector<Track> tracks_;
    int next_id_ = 1;
    long last_frame_ = std::numeric_limits<long>::min();
    bool started_ = false;
};

}  // namespace obbtrack
