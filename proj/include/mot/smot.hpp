#pragma once

#include <vector>

#include <Eigen/Dense>

namespace mot {

// Smallest autoregressive order that explains the 2-d position sequence,
// read off the numerical rank of its block-Hankel matrix. A singular value
// counts toward the rank when it exceeds both rank_tol relative to the
// largest one and the spectral noise floor of a per-point residual of
// fit_tol (fit_tol * (sqrt(rows) + sqrt(cols))), so localization jitter
// below fit_tol never inflates the order. The sequence is mean-centered
// first: a constant track is order 1, a constant-velocity track order 2.
// Requires at least 4 positions.
int regressor_order(const std::vector<Eigen::Vector2d>& track_xy, double rank_tol,
                    double fit_tol = 0.0);

}  // namespace mot
