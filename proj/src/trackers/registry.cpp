#include <stdexcept>

#include "mot/trackers.hpp"

namespace mot {

const std::vector<std::string>& tracker_names() {
    static const std::vector<std::string> names = {"DP_NMS", "CEM", "SMOT", "TBD", "JPDA_m"};
    return names;
}

ParamSet default_params(const std::string& tracker) {
    ParamSet p;
    if (tracker == "DP_NMS") {
        p.add("max_gap", 3, true)
            .add("gate_dist", 40.0)
            .add("sigma_trans", 4.0)
            .add("gap_cost", 0.5)
            .add("entry_exit_cost", 2.0)
            .add("nms_threshold", 0.5);
    } else if (tracker == "TBD") {
        p.add("overlap_min", 0.3).add("occlusion_max", 20, true).add("bridge_gate", 50.0);
    } else if (tracker == "SMOT") {
        p.add("overlap_min", 0.3)
            .add("max_gap", 15, true)
            .add("rank_tol", 0.05)
            .add("fit_tol", 3.0);
    } else if (tracker == "JPDA_m") {
        p.add("m", 100, true)
            .add("gate", 13.28)
            .add("p_detect", 0.9)
            .add("clutter_density", 1e-5)
            .add("q_process", 1.0)
            .add("r_measure", 4.0)
            .add("init_frames", 2, true)
            .add("birth_gate", 30.0)
            .add("birth_threshold", 0.3)
            .add("death_threshold", 0.7)
            .add("kill_frames", 5, true);
    } else if (tracker == "CEM") {
        p.add("w_data", 1.0)
            .add("w_dyn", 0.2)
            .add("w_exc", 1.0)
            .add("w_per", 1.0)
            .add("w_reg", 1.0)
            .add("lambda", 100.0)
            .add("sigma_exc", 50.0)
            .add("mu", 2.0)
            .add("border", 25.0)
            .add("gate", 60.0)
            .add("img_width", 640.0)
            .add("img_height", 480.0)
            .add("max_rounds", 3, true)
            .add("energy_tol", 1e-3);
    } else {
        throw std::invalid_argument("unknown tracker: " + tracker);
    }
    return p;
}

std::vector<Trajectory> run_tracker(const std::string& tracker,
                                    const std::vector<Detection>& detections,
                                    const ParamSet& params, DpMode mode) {
    if (tracker == "DP_NMS") return track_dp_nms(detections, params, mode);
    if (tracker == "TBD") return track_tbd(detections, params);
    if (tracker == "SMOT") return track_smot(detections, params);
    if (tracker == "JPDA_m") return track_jpda_m(detections, params);
    if (tracker == "CEM") {
        const auto init =
            track_dp_nms(detections, default_params("DP_NMS"), DpMode::dp);
        return track_cem(detections, params, init);
    }
    throw std::invalid_argument("unknown tracker: " + tracker);
}

}  // namespace mot
