#pragma once

#include <vector>

#include "mot/params.hpp"
#include "mot/types.hpp"

namespace mot {

// Unit-capacity min-cost-flow network over detections. Every detection is a
// split node (in/out) carrying a cost that decreases with confidence; source
// and sink connect to every detection with a uniform entry/exit cost.
struct FlowTransition {
    int from = 0;  // detection index
    int to = 0;    // detection index, strictly later frame
    double cost = 0.0;
};

struct FlowGraph {
    std::vector<Detection> detections;  // sorted by frame
    std::vector<double> det_cost;       // log((1 - conf) / conf), clamped to [-20, 20]
    double entry_cost = 0.0;
    double exit_cost = 0.0;
    std::vector<FlowTransition> transitions;  // sorted by (from, to)
    double nms_threshold = 0.5;               // used by the DP approximation only
};

// Parameters read: max_gap, gate_dist, sigma_trans, gap_cost, entry_exit_cost,
// nms_threshold. Transition edges connect detections 1..max_gap frames apart
// whose per-frame center velocity stays below gate_dist; the edge cost is the
// squared velocity over 2*sigma_trans^2 plus gap_cost per skipped frame.
// Detections must be sorted by frame.
FlowGraph build_flow_graph(const std::vector<Detection>& detections, const ParamSet& params);

// Exact solver: successive shortest paths with node potentials. Augments while
// the cheapest remaining source-sink path has negative cost. Returns
// node-disjoint paths of detection indices, sorted by (first frame, first
// index).
std::vector<std::vector<int>> min_cost_flow(const FlowGraph& g);

// Approximation: dynamic programming pulls out the single cheapest path, a
// non-maxima suppression pass removes detections overlapping the extracted
// ones (same frame, iou > nms_threshold), and the DP repeats until no path
// has negative cost. Same output ordering as min_cost_flow.
std::vector<std::vector<int>> dp_greedy_paths(const FlowGraph& g);

// Canonical total for a path set: per path entry + node costs + transition
// costs + exit, accumulated in path order. Both solvers and any external
// check should price a solution through this one function.
double flow_paths_cost(const FlowGraph& g, const std::vector<std::vector<int>>& paths);

}  // namespace mot
