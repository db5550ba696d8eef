#pragma once

#include <vector>

#include "mot/assignment.hpp"
#include "mot/flow.hpp"
#include "mot/jpda.hpp"

namespace mot {

// Brute-force reference implementations. Each enumerates the full solution
// space and is deliberately independent of the production solvers, so tests
// can diff the two. Size caps keep the enumerations tractable; exceeding a
// cap throws std::invalid_argument rather than silently degrading.

/// Exhaustive minimum-cost complete assignment; matrices up to 8x8.
/// Matches hungarian(): lexicographically smallest optimum, total summed
/// over pairs in row order.
Assignment oracle_assignment(const CostMatrix& cost);

/// All complete assignments sorted by (cost, pair sequence), truncated to m;
/// matrices up to 5x5. Matches murty_mbest().
std::vector<Assignment> oracle_kbest(const CostMatrix& cost, int m);

/// Exact JPDA marginals by direct enumeration of every joint hypothesis
/// (each target misses or claims a distinct gated measurement); up to 3
/// targets and 3 measurements. Matches jpda_frame_association() when m
/// covers the hypothesis space.
JPDAMarginals oracle_jpda(const std::vector<KalmanState>& targets,
                          const std::vector<Measurement>& measurements, const JPDAConfig& cfg,
                          const KalmanModel& model);

/// Minimum-cost node-disjoint path cover by enumerating every way to chain
/// detections along transition edges; up to 6 detections. Same output
/// ordering as min_cost_flow(); price either result with flow_paths_cost().
std::vector<std::vector<int>> oracle_flow(const FlowGraph& g);

}  // namespace mot
