#include <vector>

#include <Eigen/Dense>

#include "mot/gla.hpp"
#include "mot/trackers.hpp"
#include "mot/tracklets.hpp"

namespace mot {

namespace {

constexpr int kVelocityWindow = 5;

}  // namespace

std::vector<Trajectory> track_tbd(const std::vector<Detection>& detections,
                                  const ParamSet& params) {
    if (detections.empty()) return {};
    const double overlap_min = params.get("overlap_min");
    const int occlusion_max = params.get_int("occlusion_max");
    const double bridge_gate = params.get("bridge_gate");

    const std::vector<Tracklet> tracklets = link_consecutive(detections, overlap_min);

    // Bridge gaps: rows are tracklet ends, cols are tracklet starts. A pair
    // qualifies when the gap fits the occlusion budget and the motion
    // extrapolation from the end lands within bridge_gate of the start.
    // Only multi-box tracklets take part: a lone detection never got linked
    // in stage 1 and carries no motion to extrapolate.
    const int n = static_cast<int>(tracklets.size());
    Eigen::MatrixXd sim = Eigen::MatrixXd::Zero(n, n);
    for (int a = 0; a < n; ++a) {
        if (tracklets[a].length() < 2) continue;
        const Eigen::Vector2d v = end_velocity(tracklets[a], kVelocityWindow);
        const Eigen::Vector2d last(tracklets[a].last_box().cx(), tracklets[a].last_box().cy());
        for (int b = 0; b < n; ++b) {
            if (a == b || tracklets[b].length() < 2) continue;
            const int gap = tracklets[b].start_frame() - tracklets[a].end_frame();
            if (gap < 1 || gap > occlusion_max) continue;
            const Eigen::Vector2d predicted = last + v * static_cast<double>(gap);
            const Eigen::Vector2d start(tracklets[b].first_box().cx(),
                                        tracklets[b].first_box().cy());
            const double dist = (predicted - start).norm();
            if (dist <= bridge_gate) sim(a, b) = bridge_gate - dist;
        }
    }

    const auto merged = merge_chains(tracklets, gla_solve(sim).pairs);
    return tracklets_to_trajectories(merged);
}

}  // namespace mot
