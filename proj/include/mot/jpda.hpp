#pragma once

#include <vector>

#include <Eigen/Dense>

#include "mot/kalman.hpp"

namespace mot {

struct JPDAConfig {
    int m = 100;                    // joint hypotheses kept per frame
    double gate = 13.28;            // squared-Mahalanobis gate (chi^2, 4 dof, ~0.99)
    double p_detect = 0.9;
    double clutter_density = 1e-5;  // false measurements per unit area
};

struct JPDAMarginals {
    Eigen::MatrixXd beta;  // targets x measurements; zero outside the gate
    Eigen::VectorXd miss;  // per-target miss probability
};

// One frame of m-best joint probabilistic data association. Joint hypotheses
// (each target takes a gated measurement or misses; measurements never
// shared) are enumerated through murty_mbest on the negative-log-likelihood
// matrix and reduced to per-pair marginals. Rows of beta sum with miss to 1.
JPDAMarginals jpda_frame_association(const std::vector<KalmanState>& targets,
                                     const std::vector<Measurement>& measurements,
                                     const JPDAConfig& cfg, const KalmanModel& model);

// Probability-weighted Kalman update: innovation mixed by beta with the
// spread-of-innovations covariance correction; beta0 is the miss weight.
KalmanState jpda_update(const KalmanState& target, const std::vector<Measurement>& measurements,
                        const Eigen::VectorXd& beta, double beta0, const KalmanModel& model);

}  // namespace mot
