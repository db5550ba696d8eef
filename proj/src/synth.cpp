#include "mot/synth.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mot/random.hpp"

namespace mot {
namespace {

constexpr double kPi = 3.14159265358979323846;

// Simulated targets move inside this margin; it exceeds the largest half box
// so reflected tracks never leave the image.
constexpr double kMargin = 40.0;

struct Mover {
    double x, y, vx, vy;
    double w, h;
    // sinusoidal lateral wobble
    double amp = 0.0, omega = 0.0, phase = 0.0, base_y = 0.0;
};

void reflect(double& p, double& v, double lo, double hi) {
    if (p < lo) {
        p = 2.0 * lo - p;
        v = -v;
    } else if (p > hi) {
        p = 2.0 * hi - p;
        v = -v;
    }
}

}  // namespace

MotionModel motion_from_string(const std::string& name) {
    if (name == "constant_velocity") return MotionModel::constant_velocity;
    if (name == "sinusoidal") return MotionModel::sinusoidal;
    if (name == "crossing") return MotionModel::crossing;
    throw std::invalid_argument("unknown motion model: " + name);
}

std::string motion_to_string(MotionModel m) {
    switch (m) {
        case MotionModel::constant_velocity: return "constant_velocity";
        case MotionModel::sinusoidal: return "sinusoidal";
        case MotionModel::crossing: return "crossing";
    }
    return "constant_velocity";
}

Scene generate_scene(const SceneConfig& cfg) {
    if (cfg.n_targets < 1) throw std::invalid_argument("generate_scene: n_targets must be >= 1");
    if (cfg.frame_count < 1) throw std::invalid_argument("generate_scene: frame_count must be >= 1");
    if (cfg.miss_rate < 0.0 || cfg.miss_rate >= 1.0)
        throw std::invalid_argument("generate_scene: miss_rate must be in [0, 1)");
    if (cfg.clutter_rate < 0.0)
        throw std::invalid_argument("generate_scene: clutter_rate must be >= 0");
    if (cfg.noise_sigma < 0.0)
        throw std::invalid_argument("generate_scene: noise_sigma must be >= 0");
    if (cfg.width < 4.0 * kMargin || cfg.height < 4.0 * kMargin)
        throw std::invalid_argument("generate_scene: image too small");

    Rng truth(Rng::mix(cfg.seed, 1));
    Rng sensor(Rng::mix(cfg.seed, 2));
    Rng clutter(Rng::mix(cfg.seed, 3));

    const int n = cfg.n_targets;
    std::vector<Mover> movers(n);
    for (int i = 0; i < n; ++i) {
        Mover& m = movers[i];
        m.w = truth.uniform(24.0, 32.0);
        m.h = truth.uniform(48.0, 64.0);
        const double lane = cfg.height * (i + 1) / (n + 1);
        const double speed = truth.uniform(2.0, 4.0);
        switch (cfg.motion) {
            case MotionModel::constant_velocity:
                m.x = truth.uniform(kMargin, cfg.width - kMargin);
                m.y = lane;
                m.vx = (i % 2 == 0) ? speed : -speed;
                m.vy = 0.0;
                break;
            case MotionModel::sinusoidal:
                m.x = truth.uniform(kMargin, cfg.width - kMargin);
                m.base_y = lane;
                m.y = lane;
                m.vx = (i % 2 == 0) ? speed : -speed;
                m.vy = 0.0;
                m.amp = truth.uniform(15.0, 35.0);
                m.omega = truth.uniform(0.05, 0.15);
                m.phase = truth.uniform(0.0, 2.0 * kPi);
                break;
            case MotionModel::crossing:
                // Even targets sweep horizontally, odd ones vertically, so
                // their paths intersect around mid-sequence.
                if (i % 2 == 0) {
                    m.x = kMargin;
                    m.y = lane;
                    m.vx = speed;
                    m.vy = 0.0;
                } else {
                    m.x = cfg.width * (i + 1) / (n + 1);
                    m.y = kMargin;
                    m.vx = 0.0;
                    m.vy = speed;
                }
                break;
        }
    }

    Scene scene;
    scene.config = cfg;
    scene.ground_truth.resize(n);
    for (int i = 0; i < n; ++i) scene.ground_truth[i].id = i + 1;

    for (int f = 1; f <= cfg.frame_count; ++f) {
        for (int i = 0; i < n; ++i) {
            Mover& m = movers[i];
            if (f > 1) {
                m.x += m.vx;
                m.y += m.vy;
                reflect(m.x, m.vx, kMargin, cfg.width - kMargin);
                reflect(m.y, m.vy, kMargin, cfg.height - kMargin);
            }
            double cy = m.y;
            if (cfg.motion == MotionModel::sinusoidal) {
                cy = m.base_y + m.amp * std::sin(m.omega * f + m.phase);
            }
            scene.ground_truth[i].boxes.emplace(
                f, BBox(m.x - m.w / 2.0, cy - m.h / 2.0, m.w, m.h));
        }
    }

    // Detector pass: frame-major so the CSV reads naturally; draws happen in
    // a fixed order (per frame, per target) for reproducibility.
    for (int f = 1; f <= cfg.frame_count; ++f) {
        for (int i = 0; i < n; ++i) {
            bool occluded = false;
            for (const OcclusionWindow& w : cfg.occlusions) {
                if (w.target == i + 1 && f >= w.first && f <= w.last) occluded = true;
            }
            if (occluded) continue;
            if (cfg.miss_rate > 0.0 && sensor.uniform() < cfg.miss_rate) continue;
            const BBox& gt = scene.ground_truth[i].boxes.at(f);
            const double cx = gt.left + gt.width / 2.0 + sensor.normal(0.0, cfg.noise_sigma);
            const double cy = gt.top + gt.height / 2.0 + sensor.normal(0.0, cfg.noise_sigma);
            const double w = std::max(4.0, gt.width + sensor.normal(0.0, cfg.noise_sigma / 4.0));
            const double h = std::max(4.0, gt.height + sensor.normal(0.0, cfg.noise_sigma / 4.0));
            const double conf = sensor.uniform(0.6, 0.95);
            scene.detections.emplace_back(f, BBox(cx - w / 2.0, cy - h / 2.0, w, h), conf);
        }
        const int k = clutter.poisson(cfg.clutter_rate);
        for (int c = 0; c < k; ++c) {
            const double cx = clutter.uniform(0.0, cfg.width);
            const double cy = clutter.uniform(0.0, cfg.height);
            const double w = clutter.uniform(16.0, 48.0);
            const double h = clutter.uniform(32.0, 80.0);
            const double conf = clutter.uniform(0.2, 0.6);
            scene.detections.emplace_back(f, BBox(cx - w / 2.0, cy - h / 2.0, w, h), conf);
        }
    }
    return scene;
}

Sequence scene_sequence(const Scene& scene, const std::string& name) {
    Sequence seq;
    seq.name = name;
    seq.frame_count = scene.config.frame_count;
    seq.frame_rate = 30.0;
    seq.image_width = scene.config.width;
    seq.image_height = scene.config.height;
    return seq;
}

}  // namespace mot
