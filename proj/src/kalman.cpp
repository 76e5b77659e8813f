#include "obbtrack/kalman.hpp"

#include <cmath>
#include <stdexcept>

#include "obbtrack/heading.hpp"

namespace obbtrack {

namespace {

Matrix6d transition(double dt) {
    Matrix6d f = Matrix6d::Identity();
    f(0, 4) = dt;
    f(1, 5) = dt;
    return f;
}

void renormalize_trig(Vector6d& mean, double fallback_sin, double fallback_cos) {
    const double n = std::hypot(mean(2), mean(3));
    if (n < 1e-12) {
        const double fn = std::hypot(fallback_sin, fallback_cos);
        mean(2) = fallback_sin / fn;
        mean(3) = fallback_cos / fn;
        return;
    }
    mean(2) /= n;
    mean(3) /= n;
}

}  // namespace

double heading_of(const TrackState& state) {
    return wrap_deg_360(rad_to_deg(std::atan2(state.mean(2), state.mean(3))));
}

KalmanFilter::KalmanFilter(NoiseConfig cfg) : cfg_(cfg) {
    const double entries[] = {cfg.q_pos, cfg.q_vel, cfg.q_ang, cfg.r_pos,
                              cfg.r_ang, cfg.p0_pos, cfg.p0_ang, cfg.p0_vel};
    for (double e : entries) {
        if (!(e > 0.0)) {
            throw std::invalid_argument("NoiseConfig: all entries must be strictly positive");
        }
    }
}

TrackState KalmanFilter::initiate(const Observation& obs) const {
    TrackState s;
    const auto [sin_t, cos_t] =
        obs.has_heading ? heading_to_trig(obs.box.heading) : std::pair<double, double>{0.0, 1.0};
    s.mean << obs.box.center.x, obs.box.center.y, sin_t, cos_t, 0.0, 0.0;

    const double len = obs.box.length;
    const double sp = cfg_.p0_pos * cfg_.r_pos * len;
    const double sa = cfg_.p0_ang * cfg_.r_ang;
    const double sv = cfg_.p0_vel * cfg_.q_vel * len;
    s.cov = Vector6d(sp * sp, sp * sp, sa * sa, sa * sa, sv * sv, sv * sv).asDiagonal();
    return s;
}

TrackState KalmanFilter::predict(const TrackState& state, double box_length, double dt) const {
    const Matrix6d f = transition(dt);
    const double qp = cfg_.q_pos * box_length;
    const double qa = cfg_.q_ang;
    const double qv = cfg_.q_vel * box_length;

    TrackState out;
    out.mean = f * state.mean;
    out.cov = f * state.cov * f.transpose();
    out.cov += Vector6d(qp * qp, qp * qp, qa * qa, qa * qa, qv * qv, qv * qv).asDiagonal().toDenseMatrix();
    out.cov = 0.5 * (out.cov + out.cov.transpose()).eval();
    return out;
}

void KalmanFilter::project(const TrackState& state, double box_length, Vector4d& z_mean,
                           Matrix4d& innovation_cov) const {
    const double rp = cfg_.r_pos * box_length;
    const double ra = cfg_.r_ang;
    z_mean = state.mean.head<4>();
    innovation_cov = state.cov.topLeftCorner<4, 4>();
    innovation_cov += Vector4d(rp * rp, rp * rp, ra * ra, ra * ra).asDiagonal().toDenseMatrix();
}

TrackState KalmanFilter::update(const TrackState& state, const Observation& obs) const {
    const int nz = obs.has_heading ? 4 : 2;
    const double rp = cfg_.r_pos * obs.box.length;
    const double ra = cfg_.r_ang;

    Eigen::Matrix<double, Eigen::Dynamic, 6> h(nz, 6);
    h.setZero();
    for (int i = 0; i < nz; ++i) h(i, i) = 1.0;

    Eigen::VectorXd z(nz);
    Eigen::MatrixXd r = Eigen::MatrixXd::Zero(nz, nz);
    z(0) = obs.box.center.x;
    z(1) = obs.box.center.y;
    r(0, 0) = r(1, 1) = rp * rp;
    if (obs.has_heading) {
        const auto [sin_t, cos_t] = heading_to_trig(obs.box.heading);
        z(2) = sin_t;
        z(3) = cos_t;
        r(2, 2) = r(3, 3) = ra * ra;
    }

    const Eigen::MatrixXd s = h * state.cov * h.transpose() + r;
    const Eigen::LLT<Eigen::MatrixXd> llt(s);
    if (llt.info() != Eigen::Success) {
        throw std::runtime_error(
            "KalmanFilter::update: innovation covariance not invertible (ill-conditioned NoiseConfig)");
    }
    // K = P H^T S^-1, via S K^T = H P^T.
    const Eigen::MatrixXd k = llt.solve(h * state.cov.transpose()).transpose();

    TrackState out;
    out.mean = state.mean + k * (z - h * state.mean);
    const Matrix6d a = Matrix6d::Identity() - k * h;
    out.cov = a * state.cov * a.transpose() + k * r * k.transpose();
    out.cov = 0.5 * (out.cov + out.cov.transpose()).eval();
    renormalize_trig(out.mean, state.mean(2), state.mean(3));
    return out;
}

double KalmanFilter::gate_distance2(const TrackState& state, double box_length,
                                    const Observation& obs) const {
    Vector4d z_mean;
    Matrix4d s4;
    project(state, box_length, z_mean, s4);

    if (obs.has_heading) {
        const auto [sin_t, cos_t] = heading_to_trig(obs.box.heading);
        const Vector4d y(obs.box.center.x - z_mean(0), obs.box.center.y - z_mean(1),
                         sin_t - z_mean(2), cos_t - z_mean(3));
        return y.dot(s4.llt().solve(y));
    }
    const Vector2d y(obs.box.center.x - z_mean(0), obs.box.center.y - z_mean(1));
    const Matrix2d s2 = s4.topLeftCorner<2, 2>();
    return y.dot(s2.llt().solve(y));
}

bool KalmanFilter::gate(const TrackState& state, double box_length, const Observation& obs) const {
    const double d2 = gate_distance2(state, box_length, obs);
    return d2 <= (obs.has_heading ? kChi2Gate4D : kChi2Gate2D);
}

}  // namespace obbtrack
