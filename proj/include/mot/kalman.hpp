#pragma once

#include <Eigen/Dense>

#include "mot/geometry.hpp"

namespace mot {

// Constant-velocity filter over box center, size and their velocities.
// State: [cx, cy, w, h, vcx, vcy, vw, vh]; measurement: [cx, cy, w, h].

using StateVector = Eigen::Matrix<double, 8, 1>;
using StateMatrix = Eigen::Matrix<double, 8, 8>;
using Measurement = Eigen::Matrix<double, 4, 1>;
using MeasurementMatrix = Eigen::Matrix<double, 4, 4>;

struct KalmanState {
    StateVector mean = StateVector::Zero();
    StateMatrix covariance = StateMatrix::Identity();
};

struct KalmanModel {
    double process_noise = 1.0;      // white-acceleration intensity q
    double measurement_noise = 4.0;  // R = r * I4
};

Measurement box_to_measurement(const BBox& b);
BBox measurement_to_box(const Measurement& z);

/// New filter state centered on a measurement with zero velocity.
KalmanState kalman_init(const Measurement& z, const KalmanModel& model);

KalmanState kalman_predict(const KalmanState& s, int dt, const KalmanModel& model);
KalmanState kalman_update(const KalmanState& s, const Measurement& z, const KalmanModel& model);

/// Predicted measurement mean and its innovation covariance S = H P H^T + R.
void predicted_measurement(const KalmanState& s, const KalmanModel& model, Measurement& z_hat,
                           MeasurementMatrix& innovation_cov);

double mahalanobis2(const Measurement& z, const Measurement& z_hat,
                    const MeasurementMatrix& innovation_cov);

/// log N(z; z_hat, S) for the 4-dimensional measurement model.
double log_gaussian_density(const Measurement& z, const Measurement& z_hat,
                            const MeasurementMatrix& innovation_cov);

}  // namespace mot
