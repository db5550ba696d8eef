#include <doctest.h>

#include <vector>

#include "mot/metrics.hpp"
#include "mot/synth.hpp"
#include "mot/trackers.hpp"

using namespace mot;

namespace {

// Single target drifting right at 2 px/frame with a detection dropout.
std::vector<Detection> dropout_scene(int frames, int gap_first, int gap_last) {
    std::vector<Detection> dets;
    for (int f = 1; f <= frames; ++f) {
        if (f >= gap_first && f <= gap_last) continue;
        dets.emplace_back(f, BBox(10.0 + 2.0 * f, 80, 24, 48), 0.9);
    }
    return dets;
}

}  // namespace

TEST_CASE("15-frame dropout is bridged into one trajectory") {
    const auto tracks = track_tbd(dropout_scene(45, 16, 30), default_params("TBD"));
    REQUIRE(tracks.size() == 1);
    CHECK(tracks[0].start_frame() == 1);
    CHECK(tracks[0].end_frame() == 45);
    // The gap is interpolated, so the trajectory covers every frame.
    CHECK(tracks[0].size() == 45);
}

TEST_CASE("25-frame dropout exceeds the occlusion budget") {
    const auto tracks = track_tbd(dropout_scene(60, 16, 40), default_params("TBD"));
    REQUIRE(tracks.size() == 2);
    CHECK(tracks[0].end_frame() == 15);
    CHECK(tracks[1].start_frame() == 41);
}

TEST_CASE("bridging respects the spatial gate") {
    // Dropout plus a 400 px teleport: the extrapolation misses by far more
    // than bridge_gate, so the fragments stay separate.
    std::vector<Detection> dets;
    for (int f = 1; f <= 15; ++f) dets.emplace_back(f, BBox(10.0 + 2.0 * f, 80, 24, 48), 0.9);
    for (int f = 21; f <= 35; ++f) dets.emplace_back(f, BBox(450.0 + 2.0 * f, 80, 24, 48), 0.9);
    CHECK(track_tbd(dets, default_params("TBD")).size() == 2);
}

TEST_CASE("two targets stay separated through a clean scene") {
    SceneConfig cfg;
    cfg.n_targets = 2;
    cfg.frame_count = 80;
    cfg.noise_sigma = 1.0;
    cfg.seed = 7;
    const Scene scene = generate_scene(cfg);
    const auto tracks = track_tbd(scene.detections, default_params("TBD"));
    REQUIRE(tracks.size() == 2);
    EvalConfig ec;
    ec.frame_count = cfg.frame_count;
    const EvalRow row = evaluate(scene.ground_truth, tracks, ec).total;
    CHECK(row.mota >= 99.0);
    CHECK(row.idsw == 0);
}

TEST_CASE("empty input yields empty output") {
    CHECK(track_tbd({}, default_params("TBD")).empty());
}
