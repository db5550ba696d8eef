#pragma once

#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "mot/types.hpp"

namespace mot {

// A short track fragment: frame-ascending (frame, box) samples.
struct Tracklet {
    std::vector<std::pair<int, BBox>> boxes;

    int start_frame() const { return boxes.front().first; }
    int end_frame() const { return boxes.back().first; }
    const BBox& first_box() const { return boxes.front().second; }
    const BBox& last_box() const { return boxes.back().second; }
    int length() const { return static_cast<int>(boxes.size()); }
};

// Frame-to-frame growth: detections in frame f extend tracklets ending at
// f-1 when iou exceeds overlap_min (one-to-one, solved as a GLA instance on
// iou - overlap_min); leftovers start fresh tracklets. Output order is
// creation order.
std::vector<Tracklet> link_consecutive(const std::vector<Detection>& detections,
                                       double overlap_min);

// Mean center displacement per frame over the last `window` steps (zero for
// single-sample tracklets).
Eigen::Vector2d end_velocity(const Tracklet& t, int window);

// Concatenate a and b (a ends strictly before b starts), linearly
// interpolating one box per missing frame in between.
Tracklet merge_with_interpolation(const Tracklet& a, const Tracklet& b);

// Merge chained links (earlier index, later index): each chain collapses into
// one tracklet via merge_with_interpolation; untouched tracklets pass through.
// Output keeps the chain-head creation order.
std::vector<Tracklet> merge_chains(const std::vector<Tracklet>& tracklets,
                                   const std::vector<std::pair<int, int>>& links);

// Assign ids 1..K by start frame (creation order breaks ties).
std::vector<Trajectory> tracklets_to_trajectories(const std::vector<Tracklet>& tracklets);

}  // namespace mot
