#pragma once

#include <string>
#include <vector>

#include "mot/params.hpp"
#include "mot/types.hpp"

namespace mot {

enum class DpMode { exact, dp };

// Min-cost-flow tracker: builds the detection flow network and reads
// trajectories off the optimal (exact) or greedily extracted (dp) path set.
std::vector<Trajectory> track_dp_nms(const std::vector<Detection>& detections,
                                     const ParamSet& params, DpMode mode);

// Two-stage bipartite tracker: iou linking in consecutive frames, then
// occlusion bridging between tracklet ends and starts up to occlusion_max
// frames apart.
std::vector<Trajectory> track_tbd(const std::vector<Detection>& detections,
                                  const ParamSet& params);

// Tracklet linking by motion-dynamics similarity (Hankel regressor order),
// solved as repeated generalized linear assignment until no link remains.
std::vector<Trajectory> track_smot(const std::vector<Detection>& detections,
                                   const ParamSet& params);

// Online joint probabilistic data association with m-best hypothesis
// enumeration and one Kalman filter per target.
std::vector<Trajectory> track_jpda_m(const std::vector<Detection>& detections,
                                     const ParamSet& params);

// Continuous energy minimization over an initial labeling (conjugate-gradient
// descent alternated with deterministic jump moves).
std::vector<Trajectory> track_cem(const std::vector<Detection>& detections,
                                  const ParamSet& params,
                                  const std::vector<Trajectory>& init);

// Registry facade used by the CLI and the tuning loop.
const std::vector<std::string>& tracker_names();  // DP_NMS, CEM, SMOT, TBD, JPDA_m
ParamSet default_params(const std::string& tracker);
std::vector<Trajectory> run_tracker(const std::string& tracker,
                                    const std::vector<Detection>& detections,
                                    const ParamSet& params, DpMode mode = DpMode::exact);

}  // namespace mot
