// kalman.hpp: orientation-extended constant-velocity Kalman filter.
//
// State: [x, y, sin(t), cos(t), vx, vy]. Position follows a constant
// velocity model; the trig pair carries the heading and is held constant
// through prediction, which sidesteps the 0/360 wrap that a raw angle
// state would hit. After every update the pair is rescaled to unit norm.
//
//        | I2  0   dt*I2 |            H = [ I4  0 ]   (full observation)
//    F = | 0   I2  0     |            H = [ I2  0 ]   (position only)
//        | 0   0   I2    |
#pragma once

#include <Eigen/Dense>

#include "obbtrack/geom.hpp"

namespace obbtrack {

using Vector2d = Eigen::Vector2d;
using Vector4d = Eigen::Vector4d;
using Vector6d = Eigen::Matrix<double, 6, 1>;
using Matrix2d = Eigen::Matrix2d;
using Matrix4d = Eigen::Matrix4d;
using Matrix6d = Eigen::Matrix<double, 6, 6>;

struct TrackState {
    Vector6d mean = Vector6d::Zero();
    Matrix6d cov = Matrix6d::Identity();
};

/// Noise magnitudes. Position and velocity deviations are fractions of the
/// observation box's long-axis length; angle deviations apply directly to
/// the unit trig pair. p0_* scale the matching std into the initial
/// covariance. All entries must be strictly positive.
struct NoiseConfig {
    double q_pos = 1.0 / 40.0;
    double q_vel = 1.0 / 80.0;
    double q_ang = 0.02;
    double r_pos = 1.0 / 20.0;
    double r_ang = 0.05;
    double p0_pos = 2.0;
    double p0_ang = 2.0;
    double p0_vel = 10.0;
};

/// A per-frame measurement: the box geometry plus, when the head/tail vote
/// resolved it, a full heading. Without a heading the filter only sees the
/// position and box.heading holds the ambiguous axis direction.
struct Observation {
    HeadedBox box;
    bool has_heading = false;

    static Observation resolved(const HeadedBox& b) { return {b, true}; }
    static Observation ambiguous(const OrientedBox& b) { return {as_headed(canonicalize(b)), false}; }

    Vec2 position() const { return box.center; }
};

// 0.95 chi-square quantiles for Mahalanobis gating.
inline constexpr double kChi2Gate4D = 9.4877;
inline constexpr double kChi2Gate2D = 5.9915;

/// Heading encoded in the state, degrees in [0, 360).
double heading_of(const TrackState& state);

class KalmanFilter {
  public:
    /// Throws std::invalid_argument unless every noise entry is positive.
    explicit KalmanFilter(NoiseConfig cfg = {});

    /// New state centered on an observation with zero velocity. Without a
    /// heading the trig pair is seeded pointing along +x; callers that care
    /// should overwrite it once a resolved heading arrives.
    TrackState initiate(const Observation& obs) const;

    /// Advance dt frames: mean <- F mean, cov <- F cov F^T + Q, with Q
    /// scaled by the track's box length.
    TrackState predict(const TrackState& state, double box_length, double dt = 1.0) const;

    /// Project into observation space: (H mean, H cov H^T + R).
    void project(const TrackState& state, double box_length, Vector4d& z_mean,
                 Matrix4d& innovation_cov) const;

    /// Measurement update (Joseph-stabilized), 4-dim when the observation
    /// has a heading, else position-only. The trig pair is renormalized
    /// afterwards; the covariance is not adjusted by that rescale. Throws
    /// std::runtime_error if the innovation covariance is not invertible.
    TrackState update(const TrackState& state, const Observation& obs) const;

    /// Squared Mahalanobis distance of an observation from the projected
    /// state (2-dim for heading-less observations).
    double gate_distance2(const TrackState& state, double box_length,
                          const Observation& obs) const;

    /// True when the observation lies inside the 0.95 chi-square gate.
    bool gate(const TrackState& state, double box_length, const Observation& obs) const;

    const NoiseConfig& noise() const { return cfg_; }

  private:
    NoiseConfig cfg_;
};

}  // namespace obbtrack
