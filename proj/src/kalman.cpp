#include "mot/kalman.hpp"

#include <cmath>
#include <stdexcept>

namespace mot {

namespace {

StateMatrix transition(int dt) {
    StateMatrix f = StateMatrix::Identity();
    for (int i = 0; i < 4; ++i) f(i, i + 4) = static_cast<double>(dt);
    return f;
}

StateMatrix process_noise(int dt, double q) {
    // Discretized piecewise-constant acceleration per (position, velocity) pair.
    const double t = static_cast<double>(dt);
    const double q11 = q * t * t * t * t / 4.0;
    const double q12 = q * t * t * t / 2.0;
    const double q22 = q * t * t;
    StateMatrix m = StateMatrix::Zero();
    for (int i = 0; i < 4; ++i) {
        m(i, i) = q11;
        m(i, i + 4) = q12;
        m(i + 4, i) = q12;
        m(i + 4, i + 4) = q22;
    }
    return m;
}

Eigen::Matrix<double, 4, 8> measurement_model() {
    Eigen::Matrix<double, 4, 8> h = Eigen::Matrix<double, 4, 8>::Zero();
    h.block<4, 4>(0, 0).setIdentity();
    return h;
}

void check_valid(StateMatrix& p) {
    p = 0.5 * (p + p.transpose()).eval();
    const Eigen::SelfAdjointEigenSolver<StateMatrix> es(p);
    if (es.eigenvalues().minCoeff() <= 0.0)
        throw std::runtime_error("kalman: covariance lost positive definiteness");
}

}  // namespace

Measurement box_to_measurement(const BBox& b) {
    Measurement z;
    z << b.cx(), b.cy(), b.width, b.height;
    return z;
}

BBox measurement_to_box(const Measurement& z) {
    const double w = std::max(z(2), 1e-3);
    const double h = std::max(z(3), 1e-3);
    return BBox(z(0) - 0.5 * w, z(1) - 0.5 * h, w, h);
}

KalmanState kalman_init(const Measurement& z, const KalmanModel& model) {
    KalmanState s;
    s.mean.head<4>() = z;
    s.covariance.setZero();
    s.covariance.block<4, 4>(0, 0) = model.measurement_noise * MeasurementMatrix::Identity();
    s.covariance.block<4, 4>(4, 4) =
        (model.measurement_noise + 10.0 * model.process_noise) * MeasurementMatrix::Identity();
    return s;
}

KalmanState kalman_predict(const KalmanState& s, int dt, const KalmanModel& model) {
    if (dt < 1) throw std::invalid_argument("kalman_predict: dt must be >= 1");
    const StateMatrix f = transition(dt);
    KalmanState out;
    out.mean = f * s.mean;
    out.covariance = f * s.covariance * f.transpose() + process_noise(dt, model.process_noise);
    check_valid(out.covariance);
    return out;
}

KalmanState kalman_update(const KalmanState& s, const Measurement& z, const KalmanModel& model) {
    const auto h = measurement_model();
    const MeasurementMatrix r = model.measurement_noise * MeasurementMatrix::Identity();
    const MeasurementMatrix innovation_cov = h * s.covariance * h.transpose() + r;
    const Eigen::Matrix<double, 8, 4> gain =
        s.covariance * h.transpose() * innovation_cov.inverse();

    KalmanState out;
    out.mean = s.mean + gain * (z - h * s.mean);
    // Joseph form.
    const StateMatrix ikh = StateMatrix::Identity() - gain * h;
    out.covariance = ikh * s.covariance * ikh.transpose() + gain * r * gain.transpose();
    check_valid(out.covariance);
    return out;
}

void predicted_measurement(const KalmanState& s, const KalmanModel& model, Measurement& z_hat,
                           MeasurementMatrix& innovation_cov) {
    const auto h = measurement_model();
    z_hat = h * s.mean;
    innovation_cov = h * s.covariance * h.transpose() +
                     model.measurement_noise * MeasurementMatrix::Identity();
}

double mahalanobis2(const Measurement& z, const Measurement& z_hat,
                    const MeasurementMatrix& innovation_cov) {
    const Measurement y = z - z_hat;
    return y.dot(innovation_cov.ldlt().solve(y));
}

double log_gaussian_density(const Measurement& z, const Measurement& z_hat,
                            const MeasurementMatrix& innovation_cov) {
    const double d2 = mahalanobis2(z, z_hat, innovation_cov);
    const double log_det = std::log(innovation_cov.determinant());
    constexpr double kLog2Pi = 1.8378770664093454835606594728112;
    return -0.5 * (d2 + log_det + 4.0 * kLog2Pi);
}

}  // namespace mot
