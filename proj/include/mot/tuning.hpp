#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mot/metrics.hpp"
#include "mot/params.hpp"
#include "mot/random.hpp"
#include "mot/types.hpp"

namespace mot {

struct TrainingSequence {
    std::string name = "seq";
    int frame_count = 0;  // 0: inferred from the data
    std::vector<Detection> detections;
    std::vector<Trajectory> ground_truth;
};

struct TuneConfig {
    int runs = 20;
    std::uint64_t seed = 1;
    double low_factor = 0.5;
    double high_factor = 2.0;
    double iou_min = 0.5;
    int jobs = 1;
};

struct TuneRun {
    int index = 0;
    ParamSet params;    // defaults for run 0, one fresh draw otherwise
    bool failed = false;
    std::string error;
    double mota = 0.0;  // pooled over the training sequences; -inf when failed
    EvalResult eval;
};

struct TuneReport {
    std::string tracker;
    TuneConfig config;
    std::vector<TuneRun> runs;
    int best_index = 0;
    ParamSet best_params;
};

/// One uniform draw per parameter over [theta * low, theta * high] with the
/// endpoints sorted, so negative defaults keep a proper interval and zero
/// stays pinned at zero. Integral parameters round to the nearest integer.
ParamSet sample_params(const ParamSet& defaults, Rng& rng, double low_factor = 0.5,
                       double high_factor = 2.0);

/// Randomized search around the defaults. Run 0 scores the defaults
/// untouched; each later run draws from its own stream Rng(mix(seed, run)),
/// so reordering or parallelizing runs cannot change any draw. Objective is
/// MOTA pooled over all training sequences; ties keep the lowest run index;
/// a tracker failure marks that run failed with MOTA = -inf and the search
/// continues. `jobs` only changes the wall clock, never the report.
TuneReport tune(const std::string& tracker, const std::vector<TrainingSequence>& training,
                const TuneConfig& cfg);

/// Deterministic key=value serialization of a report (identical bytes for
/// identical inputs, whatever the job count).
std::string render_tune_report(const TuneReport& report);

}  // namespace mot
