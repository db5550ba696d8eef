#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mot/types.hpp"

namespace mot {

enum class MotionModel { constant_velocity, sinusoidal, crossing };

MotionModel motion_from_string(const std::string& name);
std::string motion_to_string(MotionModel m);

/// Suppresses all detections of one ground-truth target over a frame window.
struct OcclusionWindow {
    int target = 1;  // 1-based ground-truth id
    int first = 1;
    int last = 1;
};

struct SceneConfig {
    int n_targets = 5;
    int frame_count = 200;
    double width = 640.0;
    double height = 480.0;
    MotionModel motion = MotionModel::constant_velocity;
    double miss_rate = 0.0;      // per-box detector dropout probability, in [0, 1)
    double clutter_rate = 0.0;   // expected false alarms per frame (Poisson)
    double noise_sigma = 0.0;    // center localization noise, pixels
    std::vector<OcclusionWindow> occlusions;
    std::uint64_t seed = 1;
};

struct Scene {
    std::vector<Trajectory> ground_truth;  // ids 1..n_targets, one box per frame
    std::vector<Detection> detections;     // frame-major, targets before clutter
    SceneConfig config;
};

/// Deterministic in the seed.  Trajectories, detector noise, and clutter
/// are drawn from separate streams, so e.g. raising clutter_rate never
/// perturbs the ground truth.
Scene generate_scene(const SceneConfig& cfg);

Sequence scene_sequence(const Scene& scene, const std::string& name);

}  // namespace mot
