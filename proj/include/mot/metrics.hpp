#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "mot/types.hpp"

namespace mot {

struct EvalConfig {
    double iou_min = 0.5;
    int frame_count = 0;   // 0: infer from the last frame seen in gt or hyp
    double seconds = 0.0;  // wall clock behind the Hz column (0: unmeasured)
};

struct FrameMatch {
    int frame = 0;
    std::vector<std::pair<int, int>> pairs;  // (gt id, hyp id)
    std::vector<double> ious;                // aligned with pairs
    std::vector<int> unmatched_gt;
    std::vector<int> unmatched_hyp;
};

struct FrameMatching {
    std::vector<FrameMatch> frames;
};

// CLEAR matching: pairs carried over from the previous frame are kept while
// their iou stays at or above iou_min; the remainder is matched per frame
// with maximum cardinality first, then maximum total iou.
FrameMatching match_frames(const std::vector<Trajectory>& gt,
                           const std::vector<Trajectory>& hyp, double iou_min);

struct EvalCounts {
    long long gt_boxes = 0, hyp_boxes = 0, matched = 0;
    long long fp = 0, fn = 0, idsw = 0, fm = 0;
    double iou_sum = 0.0;
    long long frames = 0;
    long long gt_tracks = 0, mt = 0, ml = 0;
    double seconds = 0.0;
};

// Raw CLEAR counts for one sequence. Throws when gt carries no boxes.
EvalCounts evaluate_counts(const std::vector<Trajectory>& gt,
                           const std::vector<Trajectory>& hyp, const EvalConfig& cfg);

struct EvalRow {
    double mota = 0.0, motp = 0.0, far = 0.0, mt_pct = 0.0, ml_pct = 0.0;
    long long fp = 0, fn = 0, idsw = 0, fm = 0;
    double rel_id = 0.0, rel_fm = 0.0, hz = 0.0;
};

struct EvalResult {
    EvalRow total;
    std::map<std::string, EvalRow> per_sequence;
};

EvalRow finalize_counts(const EvalCounts& c);
EvalResult evaluate(const std::vector<Trajectory>& gt, const std::vector<Trajectory>& hyp,
                    const EvalConfig& cfg);
// Pooled counts across sequences (summed, then finalized once).
EvalResult pool(const std::vector<std::pair<std::string, EvalCounts>>& sequences);

// Aligned plain-text result table; one row per (method, result).
std::string render_table(const std::vector<std::pair<std::string, EvalRow>>& rows);
// Machine-readable key=value block, per-sequence rows prefixed `seq.<name>.`.
std::string render_kv(const EvalResult& result);

}  // namespace mot
