#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "mot/gla.hpp"
#include "mot/smot.hpp"
#include "mot/trackers.hpp"
#include "mot/tracklets.hpp"

namespace mot {

int regressor_order(const std::vector<Eigen::Vector2d>& track_xy, double rank_tol,
                    double fit_tol) {
    const int n = static_cast<int>(track_xy.size());
    if (n < 4) throw std::invalid_argument("regressor_order: need at least 4 positions");

    Eigen::Vector2d mean = Eigen::Vector2d::Zero();
    for (const auto& p : track_xy) mean += p;
    mean /= static_cast<double>(n);

    // Block-Hankel with k block rows of stacked (x, y) windows.
    const int k = (n + 1) / 2;
    Eigen::MatrixXd h(2 * k, n - k + 1);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j <= n - k; ++j) {
            h(2 * i, j) = track_xy[i + j].x() - mean.x();
            h(2 * i + 1, j) = track_xy[i + j].y() - mean.y();
        }

    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(h);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0 || sv(0) <= 0.0) return 1;  // constant track centers to zero
    const double noise_floor =
        fit_tol * (std::sqrt(static_cast<double>(h.rows())) +
                   std::sqrt(static_cast<double>(h.cols())));
    const double threshold = std::max(rank_tol * sv(0), noise_floor);
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv(i) > threshold) ++rank;
    return std::max(1, rank);
}

namespace {

std::vector<Eigen::Vector2d> centers(const Tracklet& t) {
    std::vector<Eigen::Vector2d> out;
    out.reserve(t.boxes.size());
    for (const auto& [frame, box] : t.boxes) out.emplace_back(box.cx(), box.cy());
    return out;
}

int tracklet_order(const Tracklet& t, double rank_tol, double fit_tol) {
    if (t.length() < 4) return std::min(t.length(), 2);
    return regressor_order(centers(t), rank_tol, fit_tol);
}

}  // namespace

std::vector<Trajectory> track_smot(const std::vector<Detection>& detections,
                                   const ParamSet& params) {
    if (detections.empty()) return {};
    const double overlap_min = params.get("overlap_min");
    const int max_gap = params.get_int("max_gap");
    const double rank_tol = params.get("rank_tol");
    const double fit_tol = params.get("fit_tol");

    std::vector<Tracklet> tracklets = link_consecutive(detections, overlap_min);
    while (tracklets.size() > 1) {
        const int n = static_cast<int>(tracklets.size());
        std::vector<int> order(n);
        for (int i = 0; i < n; ++i) order[i] = tracklet_order(tracklets[i], rank_tol, fit_tol);

        // Similar motion keeps the joint regressor order near the parts'
        // orders; dissimilar motion inflates it and zeroes the payoff.
        // Tracklets below 4 points have no defined regressor order and stay
        // out of the linking round.
        Eigen::MatrixXd sim = Eigen::MatrixXd::Zero(n, n);
        for (int a = 0; a < n; ++a) {
            if (tracklets[a].length() < 4) continue;
            for (int b = 0; b < n; ++b) {
                if (a == b || tracklets[b].length() < 4) continue;
                const int gap = tracklets[b].start_frame() - tracklets[a].end_frame();
                if (gap < 1 || gap > max_gap) continue;
                const Tracklet joint = merge_with_interpolation(tracklets[a], tracklets[b]);
                const int value =
                    order[a] + order[b] + 1 - tracklet_order(joint, rank_tol, fit_tol);
                if (value > 0) sim(a, b) = static_cast<double>(value);
            }
        }

        const auto links = gla_solve(sim).pairs;
        if (links.empty()) break;
        tracklets = merge_chains(tracklets, links);
    }
    return tracklets_to_trajectories(tracklets);
}

}  // namespace mot
