#include "mot/tuning.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <thread>
#include <utility>

#include "mot/trackers.hpp"

namespace mot {
namespace {

std::string fmt(const char* spec, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

TuneRun score_run(const std::string& tracker, const std::vector<TrainingSequence>& training,
                  const TuneConfig& cfg, int index, const ParamSet& params) {
    TuneRun run;
    run.index = index;
    run.params = params;
    try {
        std::vector<std::pair<std::string, EvalCounts>> per_seq;
        per_seq.reserve(training.size());
        for (const TrainingSequence& seq : training) {
            const std::vector<Trajectory> hyp = run_tracker(tracker, seq.detections, params);
            EvalConfig ec;
            ec.iou_min = cfg.iou_min;
            ec.frame_count = seq.frame_count;
            per_seq.emplace_back(seq.name, evaluate_counts(seq.ground_truth, hyp, ec));
        }
        run.eval = pool(per_seq);
        run.mota = run.eval.total.mota;
    } catch (const std::exception& e) {
        run.failed = true;
        run.error = e.what();
        run.mota = -std::numeric_limits<double>::infinity();
        run.eval = EvalResult{};
    }
    return run;
}

}  // namespace

ParamSet sample_params(const ParamSet& defaults, Rng& rng, double low_factor, double high_factor) {
    ParamSet out = defaults;
    for (const ParamSet::Entry& e : defaults.entries()) {
        double lo = e.def * low_factor;
        double hi = e.def * high_factor;
        if (lo > hi) std::swap(lo, hi);
        out.set(e.name, rng.uniform(lo, hi));
    }
    return out;
}

TuneReport tune(const std::string& tracker, const std::vector<TrainingSequence>& training,
                const TuneConfig& cfg) {
    if (cfg.runs < 1) throw std::invalid_argument("tune: runs must be >= 1");
    if (training.empty()) throw std::invalid_argument("tune: no training sequences");
    const ParamSet defaults = default_params(tracker);  // validates the tracker name

    TuneReport report;
    report.tracker = tracker;
    report.config = cfg;
    report.runs.resize(static_cast<std::size_t>(cfg.runs));

    // Each run owns its parameter draw up front; scoring is then a pure
    // function of (tracker, params, training), so any thread may take it.
    std::vector<ParamSet> draws;
    draws.reserve(static_cast<std::size_t>(cfg.runs));
    for (int i = 0; i < cfg.runs; ++i) {
        if (i == 0) {
            draws.push_back(defaults);
        } else {
            Rng rng(Rng::mix(cfg.seed, static_cast<std::uint64_t>(i)));
            draws.push_back(sample_params(defaults, rng, cfg.low_factor, cfg.high_factor));
        }
    }

    std::atomic<int> cursor{0};
    auto worker = [&]() {
        for (;;) {
            const int i = cursor.fetch_add(1);
            if (i >= cfg.runs) return;
            report.runs[static_cast<std::size_t>(i)] =
                score_run(tracker, training, cfg, i, draws[static_cast<std::size_t>(i)]);
        }
    };

    const int jobs = std::max(1, std::min(cfg.jobs, cfg.runs));
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(jobs));
        for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }

    report.best_index = 0;
    for (int i = 1; i < cfg.runs; ++i) {
        if (report.runs[static_cast<std::size_t>(i)].mota >
            report.runs[static_cast<std::size_t>(report.best_index)].mota)
            report.best_index = i;
    }
    report.best_params = report.runs[static_cast<std::size_t>(report.best_index)].params;
    return report;
}

std::string render_tune_report(const TuneReport& report) {
    std::string out;
    out += "tracker=" + report.tracker + "\n";
    out += "runs=" + std::to_string(report.config.runs) + "\n";
    out += "seed=" + std::to_string(report.config.seed) + "\n";
    out += "low_factor=" + fmt("%.17g", report.config.low_factor) + "\n";
    out += "high_factor=" + fmt("%.17g", report.config.high_factor) + "\n";
    out += "iou_min=" + fmt("%.17g", report.config.iou_min) + "\n";
    out += "best_index=" + std::to_string(report.best_index) + "\n";
    out += "best_mota=" + fmt("%.6f", report.runs.empty()
                                          ? 0.0
                                          : report.runs[static_cast<std::size_t>(
                                                            report.best_index)].mota) + "\n";
    out += "[best_params]\n";
    for (const ParamSet::Entry& e : report.best_params.entries())
        out += e.name + "=" + fmt("%.17g", e.current) + "\n";
    for (const TuneRun& run : report.runs) {
        out += "[run " + std::to_string(run.index) + "]\n";
        out += std::string("status=") + (run.failed ? "failed" : "ok") + "\n";
        if (run.failed) out += "error=" + run.error + "\n";
        out += "mota=" + fmt("%.6f", run.mota) + "\n";
        for (const ParamSet::Entry& e : run.params.entries())
            out += "param." + e.name + "=" + fmt("%.17g", e.current) + "\n";
        if (!run.failed) {
            const std::string kv = render_kv(run.eval);
            std::size_t start = 0;
            while (start < kv.size()) {
                std::size_t end = kv.find('\n', start);
                if (end == std::string::npos) end = kv.size();
                out += "eval." + kv.substr(start, end - start) + "\n";
                start = end + 1;
            }
        }
    }
    return out;
}

}  // namespace mot
