#pragma once

#include <vector>

#include <Eigen/Dense>

#include "mot/params.hpp"
#include "mot/types.hpp"

namespace mot {

// Continuous center track over a consecutive frame span; the concatenation of
// all targets' coordinates is the optimization variable.
struct CemTarget {
    int start_frame = 1;
    std::vector<Eigen::Vector2d> pos;

    int end_frame() const { return start_frame + static_cast<int>(pos.size()) - 1; }
    int length() const { return static_cast<int>(pos.size()); }
};

struct CEMState {
    std::vector<CemTarget> targets;

    int coord_count() const {
        int n = 0;
        for (const auto& t : targets) n += 2 * t.length();
        return n;
    }
};

// Five-term energy: detection attraction, second-difference smoothness,
// co-frame target repulsion, a sigmoid penalty on track ends in the image
// interior, and the target-count/track-length regularizer. All weights and
// shape constants come from the ParamSet.
double cem_energy(const CEMState& s, const std::vector<Detection>& detections,
                  const ParamSet& params);

// Exact analytic gradient of cem_energy with respect to every position, in
// (target, frame, x/y) flattening order.
Eigen::VectorXd cem_gradient(const CEMState& s, const std::vector<Detection>& detections,
                             const ParamSet& params);

// Energy value after every accepted descent step and jump move, starting
// with the initial energy.
using CemTrace = std::vector<double>;

std::vector<Trajectory> track_cem_traced(const std::vector<Detection>& detections,
                                         const ParamSet& params,
                                         const std::vector<Trajectory>& init, CemTrace* trace);

}  // namespace mot
