#include <doctest.h>

#include <cmath>
#include <map>

#include "mot/io.hpp"
#include "mot/synth.hpp"

using namespace mot;

TEST_CASE("scenes are deterministic in the seed") {
    SceneConfig cfg;
    cfg.n_targets = 4;
    cfg.frame_count = 100;
    cfg.miss_rate = 0.2;
    cfg.clutter_rate = 1.5;
    cfg.noise_sigma = 2.0;
    cfg.seed = 1234;
    const Scene a = generate_scene(cfg);
    const Scene b = generate_scene(cfg);
    CHECK(serialize_tracks(a.ground_truth) == serialize_tracks(b.ground_truth));
    CHECK(serialize_detections(a.detections) == serialize_detections(b.detections));

    cfg.seed = 1235;
    const Scene c = generate_scene(cfg);
    CHECK(serialize_detections(a.detections) != serialize_detections(c.detections));
}

TEST_CASE("sensor and clutter settings never perturb the ground truth") {
    SceneConfig base;
    base.n_targets = 3;
    base.frame_count = 80;
    base.seed = 42;
    const std::string gt = serialize_tracks(generate_scene(base).ground_truth);

    SceneConfig noisy = base;
    noisy.miss_rate = 0.4;
    noisy.clutter_rate = 3.0;
    noisy.noise_sigma = 5.0;
    CHECK(serialize_tracks(generate_scene(noisy).ground_truth) == gt);
}

TEST_CASE("ground truth covers every frame and stays inside the image") {
    for (const MotionModel motion : {MotionModel::constant_velocity, MotionModel::sinusoidal,
                                     MotionModel::crossing}) {
        SceneConfig cfg;
        cfg.n_targets = 5;
        cfg.frame_count = 300;
        cfg.motion = motion;
        cfg.seed = 9;
        const Scene scene = generate_scene(cfg);
        REQUIRE(scene.ground_truth.size() == 5);
        for (const Trajectory& t : scene.ground_truth) {
            CHECK(t.size() == 300);
            for (const auto& [f, b] : t.boxes) {
                CHECK(b.left >= 0.0);
                CHECK(b.top >= 0.0);
                CHECK(b.right() <= cfg.width);
                CHECK(b.bottom() <= cfg.height);
            }
        }
    }
}

TEST_CASE("miss rate thins detections at the expected rate") {
    SceneConfig cfg;
    cfg.n_targets = 5;
    cfg.frame_count = 200;
    cfg.miss_rate = 0.3;
    cfg.seed = 77;
    const Scene scene = generate_scene(cfg);
    const double expected = 5.0 * 200.0 * 0.7;
    const double sd = std::sqrt(1000.0 * 0.3 * 0.7);
    CHECK(std::abs(static_cast<double>(scene.detections.size()) - expected) < 5.0 * sd);
}

TEST_CASE("clutter count follows its Poisson budget") {
    SceneConfig cfg;
    cfg.n_targets = 2;
    cfg.frame_count = 200;
    cfg.clutter_rate = 2.0;
    cfg.seed = 78;
    const Scene scene = generate_scene(cfg);
    const double clutter = static_cast<double>(scene.detections.size()) - 2.0 * 200.0;
    // mean 400, sd 20
    CHECK(std::abs(clutter - 400.0) < 100.0);
}

TEST_CASE("occlusion windows silence one target") {
    SceneConfig cfg;
    cfg.n_targets = 2;
    cfg.frame_count = 60;
    cfg.occlusions.push_back(OcclusionWindow{1, 20, 35});
    cfg.seed = 5;
    const Scene scene = generate_scene(cfg);
    std::map<int, int> per_frame;
    for (const Detection& d : scene.detections) ++per_frame[d.frame];
    for (int f = 1; f <= 60; ++f) {
        const int want = (f >= 20 && f <= 35) ? 1 : 2;
        CHECK(per_frame[f] == want);
    }
}

TEST_CASE("invalid configurations are rejected") {
    SceneConfig cfg;
    cfg.n_targets = 0;
    CHECK_THROWS_AS(generate_scene(cfg), std::invalid_argument);
    cfg.n_targets = 2;
    cfg.miss_rate = 1.0;
    CHECK_THROWS_AS(generate_scene(cfg), std::invalid_argument);
    cfg.miss_rate = 0.0;
    cfg.clutter_rate = -1.0;
    CHECK_THROWS_AS(generate_scene(cfg), std::invalid_argument);
}

TEST_CASE("motion model names round-trip") {
    for (const MotionModel m : {MotionModel::constant_velocity, MotionModel::sinusoidal,
                                MotionModel::crossing})
        CHECK(motion_from_string(motion_to_string(m)) == m);
    CHECK_THROWS_AS(motion_from_string("warp"), std::invalid_argument);
}
