#include "mot/metrics.hpp"

#include <algorithm>
#include <climits>
#include <cstdio>
#include <map>
#include <set>
#include <stdexcept>

#include <Eigen/Dense>

#include "mot/geometry.hpp"
#include "mot/gla.hpp"

namespace mot {

namespace {

// id -> box for every frame, ids ascending within a frame.
std::map<int, std::vector<std::pair<int, const BBox*>>> boxes_by_frame(
    const std::vector<Trajectory>& tracks) {
    std::map<int, std::vector<std::pair<int, const BBox*>>> out;
    for (const auto& t : tracks)
        for (const auto& [frame, box] : t.boxes) out[frame].emplace_back(t.id, &box);
    for (auto& [frame, items] : out)
        std::sort(items.begin(), items.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
    return out;
}

// Cardinality dominates, then total iou decides.
constexpr double kCardinalityWeight = 1e6;

}  // namespace

FrameMatching match_frames(const std::vector<Trajectory>& gt,
                           const std::vector<Trajectory>& hyp, double iou_min) {
    const auto gt_frames = boxes_by_frame(gt);
    const auto hyp_frames = boxes_by_frame(hyp);

    int first = 0, last = -1;
    if (!gt_frames.empty() || !hyp_frames.empty()) {
        first = std::min(gt_frames.empty() ? INT_MAX : gt_frames.begin()->first,
                         hyp_frames.empty() ? INT_MAX : hyp_frames.begin()->first);
        last = std::max(gt_frames.empty() ? INT_MIN : gt_frames.rbegin()->first,
                        hyp_frames.empty() ? INT_MIN : hyp_frames.rbegin()->first);
    }

    FrameMatching out;
    std::map<int, int> carried;  // gt id -> hyp id matched in the previous frame
    static const std::vector<std::pair<int, const BBox*>> kNone;
    for (int f = first; f <= last; ++f) {
        const auto git = gt_frames.find(f);
        const auto hit = hyp_frames.find(f);
        const auto& gts = git == gt_frames.end() ? kNone : git->second;
        const auto& hyps = hit == hyp_frames.end() ? kNone : hit->second;

        FrameMatch fm;
        fm.frame = f;
        std::vector<char> gt_used(gts.size(), 0), hyp_used(hyps.size(), 0);

        const auto index_of = [](const std::vector<std::pair<int, const BBox*>>& items,
                                 int id) {
            for (std::size_t i = 0; i < items.size(); ++i)
                if (items[i].first == id) return static_cast<int>(i);
            return -1;
        };

        for (const auto& [gid, hid] : carried) {
            const int gi = index_of(gts, gid);
            const int hi = index_of(hyps, hid);
            if (gi < 0 || hi < 0 || hyp_used[hi]) continue;
            const double overlap = iou(*gts[gi].second, *hyps[hi].second);
            if (overlap < iou_min) continue;
            gt_used[gi] = 1;
            hyp_used[hi] = 1;
            fm.pairs.emplace_back(gid, hid);
            fm.ious.push_back(overlap);
        }

        std::vector<int> free_gt, free_hyp;
        for (std::size_t i = 0; i < gts.size(); ++i)
            if (!gt_used[i]) free_gt.push_back(static_cast<int>(i));
        for (std::size_t i = 0; i < hyps.size(); ++i)
            if (!hyp_used[i]) free_hyp.push_back(static_cast<int>(i));

        if (!free_gt.empty() && !free_hyp.empty()) {
            Eigen::MatrixXd sim =
                Eigen::MatrixXd::Zero(free_gt.size(), free_hyp.size());
            Eigen::MatrixXd overlaps = sim;
            for (std::size_t r = 0; r < free_gt.size(); ++r)
                for (std::size_t c = 0; c < free_hyp.size(); ++c) {
                    const double o =
                        iou(*gts[free_gt[r]].second, *hyps[free_hyp[c]].second);
                    overlaps(r, c) = o;
                    if (o >= iou_min) sim(r, c) = kCardinalityWeight + o;
                }
            for (const auto& [r, c] : gla_solve(sim).pairs) {
                gt_used[free_gt[r]] = 1;
                hyp_used[free_hyp[c]] = 1;
                fm.pairs.emplace_back(gts[free_gt[r]].first, hyps[free_hyp[c]].first);
                fm.ious.push_back(overlaps(r, c));
            }
        }

        for (std::size_t i = 0; i < gts.size(); ++i)
            if (!gt_used[i]) fm.unmatched_gt.push_back(gts[i].first);
        for (std::size_t i = 0; i < hyps.size(); ++i)
            if (!hyp_used[i]) fm.unmatched_hyp.push_back(hyps[i].first);

        carried.clear();
        for (const auto& [gid, hid] : fm.pairs) carried[gid] = hid;
        out.frames.push_back(std::move(fm));
    }
    return out;
}

EvalCounts evaluate_counts(const std::vector<Trajectory>& gt,
                           const std::vector<Trajectory>& hyp, const EvalConfig& cfg) {
    EvalCounts c;
    for (const auto& t : gt) c.gt_boxes += static_cast<long long>(t.boxes.size());
    for (const auto& t : hyp) c.hyp_boxes += static_cast<long long>(t.boxes.size());
    if (c.gt_boxes == 0) throw std::invalid_argument("evaluate: ground truth has no boxes");

    const FrameMatching matching = match_frames(gt, hyp, cfg.iou_min);

    std::map<int, int> last_partner;
    std::map<int, std::set<int>> matched_frames;  // gt id -> frames with a match
    for (const auto& fm : matching.frames) {
        c.fp += static_cast<long long>(fm.unmatched_hyp.size());
        c.fn += static_cast<long long>(fm.unmatched_gt.size());
        c.matched += static_cast<long long>(fm.pairs.size());
        for (double o : fm.ious) c.iou_sum += o;

        std::vector<std::pair<int, int>> ordered = fm.pairs;
        std::sort(ordered.begin(), ordered.end());
        for (const auto& [gid, hid] : ordered) {
            const auto it = last_partner.find(gid);
            if (it != last_partner.end() && it->second != hid) ++c.idsw;
            last_partner[gid] = hid;
            matched_frames[gid].insert(fm.frame);
        }
    }

    c.gt_tracks = static_cast<long long>(gt.size());
    for (const auto& t : gt) {
        const auto& hits = matched_frames[t.id];
        bool prev = false;
        bool seen = false;
        long long covered = 0;
        for (const auto& [frame, box] : t.boxes) {
            const bool cur = hits.count(frame) > 0;
            if (cur) ++covered;
            if (seen && prev && !cur) ++c.fm;
            prev = cur;
            seen = true;
        }
        const double coverage =
            static_cast<double>(covered) / static_cast<double>(t.boxes.size());
        if (coverage >= 0.8) ++c.mt;
        if (coverage <= 0.2) ++c.ml;
    }

    if (cfg.frame_count > 0) {
        c.frames = cfg.frame_count;
    } else {
        int last = 0;
        for (const auto& t : gt) last = std::max(last, t.boxes.empty() ? 0 : t.end_frame());
        for (const auto& t : hyp) last = std::max(last, t.boxes.empty() ? 0 : t.end_frame());
        c.frames = last;
    }
    c.seconds = cfg.seconds;
    return c;
}

EvalRow finalize_counts(const EvalCounts& c) {
    EvalRow r;
    const double gt_boxes = static_cast<double>(c.gt_boxes);
    const double recall = c.gt_boxes > 0 ? static_cast<double>(c.matched) / gt_boxes : 0.0;
    r.fp = c.fp;
    r.fn = c.fn;
    r.idsw = c.idsw;
    r.fm = c.fm;
    r.mota = 100.0 * (1.0 - static_cast<double>(c.fp + c.fn + c.idsw) / gt_boxes);
    r.motp = c.matched > 0 ? 100.0 * c.iou_sum / static_cast<double>(c.matched) : 0.0;
    r.far = c.frames > 0 ? static_cast<double>(c.fp) / static_cast<double>(c.frames) : 0.0;
    r.mt_pct =
        c.gt_tracks > 0 ? 100.0 * static_cast<double>(c.mt) / static_cast<double>(c.gt_tracks)
                        : 0.0;
    r.ml_pct =
        c.gt_tracks > 0 ? 100.0 * static_cast<double>(c.ml) / static_cast<double>(c.gt_tracks)
                        : 0.0;
    r.rel_id = recall > 0.0 ? static_cast<double>(c.idsw) / recall : 0.0;
    r.rel_fm = recall > 0.0 ? static_cast<double>(c.fm) / recall : 0.0;
    r.hz = c.seconds > 0.0 ? static_cast<double>(c.frames) / c.seconds : 0.0;
    return r;
}

EvalResult evaluate(const std::vector<Trajectory>& gt, const std::vector<Trajectory>& hyp,
                    const EvalConfig& cfg) {
    EvalResult res;
    res.total = finalize_counts(evaluate_counts(gt, hyp, cfg));
    return res;
}

EvalResult pool(const std::vector<std::pair<std::string, EvalCounts>>& sequences) {
    std::vector<std::pair<std::string, EvalCounts>> sorted = sequences;
    std::sort(sorted.begin(), sorted.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    EvalResult res;
    EvalCounts total;
    for (const auto& [name, c] : sorted) {
        total.gt_boxes += c.gt_boxes;
        total.hyp_boxes += c.hyp_boxes;
        total.matched += c.matched;
        total.fp += c.fp;
        total.fn += c.fn;
        total.idsw += c.idsw;
        total.fm += c.fm;
        total.iou_sum += c.iou_sum;
        total.frames += c.frames;
        total.gt_tracks += c.gt_tracks;
        total.mt += c.mt;
        total.ml += c.ml;
        total.seconds += c.seconds;
        res.per_sequence.emplace(name, finalize_counts(c));
    }
    res.total = finalize_counts(total);
    return res;
}

namespace {

std::string fmt(const char* spec, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), spec, v);
    return buf;
}

std::string fmt(const char* spec, long long v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), spec, v);
    return buf;
}

std::vector<std::string> row_cells(const EvalRow& r) {
    return {fmt("%.1f", r.mota), fmt("%.1f", r.motp),   fmt("%.1f", r.far),
            fmt("%.1f", r.mt_pct), fmt("%.1f", r.ml_pct), fmt("%lld", r.fp),
            fmt("%lld", r.fn),    fmt("%lld", r.idsw),  fmt("%.1f", r.rel_id),
            fmt("%lld", r.fm),    fmt("%.1f", r.rel_fm), fmt("%.1f", r.hz)};
}

}  // namespace

std::string render_table(const std::vector<std::pair<std::string, EvalRow>>& rows) {
    const std::vector<std::string> header = {"Method", "MOTA",   "MOTP", "FAR", "MT(%)",
                                             "ML(%)",  "FP",     "FN",   "IDsw", "rel.ID",
                                             "FM",     "rel.FM", "Hz"};
    std::vector<std::vector<std::string>> table;
    table.push_back(header);
    for (const auto& [name, r] : rows) {
        std::vector<std::string> cells = {name};
        const auto values = row_cells(r);
        cells.insert(cells.end(), values.begin(), values.end());
        table.push_back(std::move(cells));
    }

    std::vector<std::size_t> width(header.size(), 0);
    for (const auto& row : table)
        for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());

    std::string out;
    for (const auto& row : table) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i > 0) out += "  ";
            const std::size_t pad = width[i] - row[i].size();
            if (i == 0) {
                out += row[i];
                out.append(pad, ' ');
            } else {
                out.append(pad, ' ');
                out += row[i];
            }
        }
        out += '\n';
    }
    return out;
}

namespace {

void kv_row(std::string& out, const std::string& prefix, const EvalRow& r) {
    char buf[256];
    const auto add = [&](const char* key, const char* spec, double v) {
        std::snprintf(buf, sizeof(buf), "%s%s=%s\n", prefix.c_str(), key,
                      fmt(spec, v).c_str());
        out += buf;
    };
    add("mota", "%.6f", r.mota);
    add("motp", "%.6f", r.motp);
    add("far", "%.6f", r.far);
    add("mt_pct", "%.6f", r.mt_pct);
    add("ml_pct", "%.6f", r.ml_pct);
    out += prefix + "fp=" + fmt("%lld", r.fp) + "\n";
    out += prefix + "fn=" + fmt("%lld", r.fn) + "\n";
    out += prefix + "idsw=" + fmt("%lld", r.idsw) + "\n";
    add("rel_id", "%.6f", r.rel_id);
    out += prefix + "fm=" + fmt("%lld", r.fm) + "\n";
    add("rel_fm", "%.6f", r.rel_fm);
    add("hz", "%.6f", r.hz);
}

}  // namespace

std::string render_kv(const EvalResult& result) {
    std::string out;
    kv_row(out, "", result.total);
    for (const auto& [name, row] : result.per_sequence) kv_row(out, "seq." + name + ".", row);
    return out;
}

}  // namespace mot
