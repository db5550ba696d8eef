// motkit: command-line front end for the tracking toolkit.
//
//   motkit gen    synthesize a sequence (gt.csv, det.csv, seqinfo.txt)
//   motkit track  run one tracker over a detection file
//   motkit eval   score a hypothesis file against ground truth
//   motkit tune   randomized parameter search around the defaults

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mot/io.hpp"
#include "mot/metrics.hpp"
#include "mot/synth.hpp"
#include "mot/trackers.hpp"
#include "mot/tuning.hpp"

namespace fs = std::filesystem;

namespace {

constexpr const char* kVersion = "0.1.0";

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_output(const std::string& path, const std::string& text) {
    const fs::path parent = fs::path(path).parent_path();
    if (!parent.empty()) fs::create_directories(parent);
    mot::write_file(path, text);
}

double parse_double(const std::string& s, const std::string& what) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw std::runtime_error("bad numeric value for " + what + ": '" + s + "'");
    }
}

std::string valid_trackers() {
    std::string out;
    for (const std::string& n : mot::tracker_names()) {
        if (!out.empty()) out += ", ";
        out += n;
    }
    return out;
}

void require_tracker(const std::string& name) {
    for (const std::string& n : mot::tracker_names())
        if (n == name) return;
    throw std::runtime_error("unknown tracker '" + name + "' (valid: " + valid_trackers() + ")");
}

/// "k=v,k2=v2" applied on top of a ParamSet; unknown keys are fatal.
void apply_param_string(mot::ParamSet& params, const std::string& text) {
    std::size_t start = 0;
    while (start < text.size()) {
        std::size_t end = text.find(',', start);
        if (end == std::string::npos) end = text.size();
        const std::string item = text.substr(start, end - start);
        start = end + 1;
        if (item.empty()) continue;
        const std::size_t eq = item.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("bad --params item '" + item + "' (expected key=value)");
        params.set(item.substr(0, eq), parse_double(item.substr(eq + 1), item.substr(0, eq)));
    }
}

void apply_param_file(mot::ParamSet& params, const std::string& path) {
    for (const auto& [key, value] : mot::parse_key_values(mot::read_file(path)))
        params.set(key, parse_double(value, key));
}

// ---------------------------------------------------------------- gen ----

mot::SceneConfig read_scene_config(const std::string& path) {
    mot::SceneConfig cfg;
    for (const auto& [key, value] : mot::parse_key_values(mot::read_file(path))) {
        if (key == "n_targets") cfg.n_targets = static_cast<int>(parse_double(value, key));
        else if (key == "frame_count") cfg.frame_count = static_cast<int>(parse_double(value, key));
        else if (key == "width") cfg.width = parse_double(value, key);
        else if (key == "height") cfg.height = parse_double(value, key);
        else if (key == "motion") cfg.motion = mot::motion_from_string(value);
        else if (key == "miss_rate") cfg.miss_rate = parse_double(value, key);
        else if (key == "clutter_rate") cfg.clutter_rate = parse_double(value, key);
        else if (key == "noise_sigma") cfg.noise_sigma = parse_double(value, key);
        else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(parse_double(value, key));
        else if (key == "occlusion") {
            // target:first:last
            mot::OcclusionWindow w;
            if (std::sscanf(value.c_str(), "%d:%d:%d", &w.target, &w.first, &w.last) != 3)
                throw std::runtime_error("bad occlusion spec '" + value +
                                         "' (expected target:first:last)");
            cfg.occlusions.push_back(w);
        } else {
            throw std::runtime_error("unknown scene config key '" + key + "'");
        }
    }
    return cfg;
}

int cmd_gen(const std::string& config_path, const std::string& out_dir, std::int64_t seed,
            std::string name) {
    mot::SceneConfig cfg = read_scene_config(config_path);
    if (seed >= 0) cfg.seed = static_cast<std::uint64_t>(seed);
    const mot::Scene scene = mot::generate_scene(cfg);

    fs::create_directories(out_dir);
    if (name.empty()) name = fs::path(out_dir).filename().string();
    if (name.empty()) name = "seq";

    mot::write_file((fs::path(out_dir) / "gt.csv").string(),
                    mot::serialize_tracks(scene.ground_truth));
    mot::write_file((fs::path(out_dir) / "det.csv").string(),
                    mot::serialize_detections(scene.detections));
    mot::write_file((fs::path(out_dir) / "seqinfo.txt").string(),
                    mot::serialize_seqinfo(mot::scene_sequence(scene, name)));
    std::cout << "wrote " << scene.ground_truth.size() << " tracks, "
              << scene.detections.size() << " detections to " << out_dir << "\n";
    return 0;
}

// -------------------------------------------------------------- track ----

int cmd_track(const std::string& tracker, const std::string& det_path,
              const std::string& out_path, const std::string& params_file,
              const std::string& params_inline, const std::string& mode_name,
              std::int64_t seed) {
    require_tracker(tracker);
    const mot::DpMode mode = [&] {
        if (mode_name == "exact") return mot::DpMode::exact;
        if (mode_name == "dp") return mot::DpMode::dp;
        throw std::runtime_error("bad --mode '" + mode_name + "' (expected exact or dp)");
    }();

    mot::ParamSet params = mot::default_params(tracker);
    if (!params_file.empty()) apply_param_file(params, params_file);
    if (!params_inline.empty()) apply_param_string(params, params_inline);

    const std::vector<mot::Detection> detections =
        mot::parse_detections(mot::read_file(det_path));

    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<mot::Trajectory> tracks =
        mot::run_tracker(tracker, detections, params, mode);
    const double seconds = std::chrono::duration<double>(
                               std::chrono::steady_clock::now() - t0).count();

    write_output(out_path, mot::serialize_tracks(tracks));

    int last_frame = 0;
    for (const mot::Detection& d : detections) last_frame = std::max(last_frame, d.frame);
    std::string manifest;
    manifest += std::string("tracker=") + tracker + "\n";
    manifest += std::string("version=") + kVersion + "\n";
    manifest += "input=" + det_path + "\n";
    manifest += "output=" + out_path + "\n";
    manifest += "mode=" + mode_name + "\n";
    manifest += "seed=" + std::to_string(seed < 0 ? 0 : seed) + "\n";
    manifest += "frames=" + std::to_string(last_frame) + "\n";
    manifest += "seconds=" + fmt_double(seconds) + "\n";
    for (const mot::ParamSet::Entry& e : params.entries())
        manifest += "param." + e.name + "=" + fmt_double(e.current) + "\n";
    write_output(out_path + ".manifest", manifest);

    std::cout << "tracked " << detections.size() << " detections into " << tracks.size()
              << " trajectories (" << fmt_double(seconds) << " s)\n";
    return 0;
}

// --------------------------------------------------------------- eval ----

double manifest_seconds(const std::string& hyp_path, const std::string& manifest_flag) {
    std::string path = manifest_flag;
    if (path.empty()) {
        const std::string guess = hyp_path + ".manifest";
        if (fs::exists(guess)) path = guess;
    }
    if (path.empty()) return 0.0;
    for (const auto& [key, value] : mot::parse_key_values(mot::read_file(path)))
        if (key == "seconds") return parse_double(value, key);
    return 0.0;
}

int cmd_eval(const std::string& gt_path, const std::string& hyp_path,
             const std::string& out_prefix, const std::string& label, double iou_min,
             const std::string& seqinfo_path, const std::string& manifest_flag,
             const std::string& curves_path) {
    const std::vector<mot::Trajectory> gt = mot::parse_tracks(mot::read_file(gt_path));
    const std::vector<mot::Trajectory> hyp = mot::parse_tracks(mot::read_file(hyp_path));

    mot::EvalConfig cfg;
    cfg.iou_min = iou_min;
    cfg.seconds = manifest_seconds(hyp_path, manifest_flag);
    if (!seqinfo_path.empty())
        cfg.frame_count = mot::parse_seqinfo(mot::read_file(seqinfo_path)).frame_count;

    const mot::EvalResult result = mot::evaluate(gt, hyp, cfg);
    const std::string table = mot::render_table({{label, result.total}});

    std::cout << table;
    if (!out_prefix.empty()) {
        write_output(out_prefix + ".txt", table);
        write_output(out_prefix + ".kv", mot::render_kv(result));
    }

    if (!curves_path.empty()) {
        const mot::FrameMatching matching = mot::match_frames(gt, hyp, iou_min);
        std::string csv = "frame,fp,fn\n";
        for (const mot::FrameMatch& fmatch : matching.frames) {
            csv += std::to_string(fmatch.frame) + "," +
                   std::to_string(fmatch.unmatched_hyp.size()) + "," +
                   std::to_string(fmatch.unmatched_gt.size()) + "\n";
        }
        write_output(curves_path, csv);
    }
    return 0;
}

// --------------------------------------------------------------- tune ----

mot::TrainingSequence load_sequence(const fs::path& dir) {
    mot::TrainingSequence seq;
    seq.name = dir.filename().string();
    if (seq.name.empty()) seq.name = "seq";
    seq.detections = mot::parse_detections(mot::read_file((dir / "det.csv").string()));
    seq.ground_truth = mot::parse_tracks(mot::read_file((dir / "gt.csv").string()));
    const fs::path info = dir / "seqinfo.txt";
    if (fs::exists(info)) {
        const mot::Sequence s = mot::parse_seqinfo(mot::read_file(info.string()));
        seq.frame_count = s.frame_count;
        if (!s.name.empty()) seq.name = s.name;
    }
    return seq;
}

std::vector<mot::TrainingSequence> load_training_dir(const std::string& train_dir) {
    const fs::path root(train_dir);
    if (!fs::is_directory(root))
        throw std::runtime_error("--train is not a directory: " + train_dir);
    std::vector<mot::TrainingSequence> out;
    if (fs::exists(root / "det.csv") && fs::exists(root / "gt.csv")) {
        out.push_back(load_sequence(root));
        return out;
    }
    std::vector<fs::path> subdirs;
    for (const fs::directory_entry& e : fs::directory_iterator(root))
        if (e.is_directory() && fs::exists(e.path() / "det.csv") &&
            fs::exists(e.path() / "gt.csv"))
            subdirs.push_back(e.path());
    std::sort(subdirs.begin(), subdirs.end());
    for (const fs::path& p : subdirs) out.push_back(load_sequence(p));
    if (out.empty())
        throw std::runtime_error("no (det.csv, gt.csv) pairs under " + train_dir);
    return out;
}

int cmd_tune(const std::string& tracker, const std::string& train_dir,
             const std::string& out_path, int runs, std::int64_t seed, int jobs,
             double iou_min) {
    require_tracker(tracker);
    mot::TuneConfig cfg;
    cfg.runs = runs;
    cfg.seed = static_cast<std::uint64_t>(seed);
    cfg.jobs = jobs;
    cfg.iou_min = iou_min;

    const std::vector<mot::TrainingSequence> training = load_training_dir(train_dir);
    const mot::TuneReport report = mot::tune(tracker, training, cfg);
    write_output(out_path, mot::render_tune_report(report));

    char best[64];
    std::snprintf(best, sizeof best, "%.6f",
                  report.runs[static_cast<std::size_t>(report.best_index)].mota);
    std::cout << "tuned " << tracker << " over " << training.size() << " sequence(s): best run "
              << report.best_index << " (MOTA " << best << "), report in " << out_path << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"multi-object tracking toolkit"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    // gen
    std::string gen_config, gen_out, gen_name;
    std::int64_t gen_seed = -1;
    CLI::App* gen = app.add_subcommand("gen", "synthesize a sequence");
    gen->add_option("--config", gen_config, "scene config (key=value lines)")->required();
    gen->add_option("--out", gen_out, "output directory")->required();
    gen->add_option("--seed", gen_seed, "override the config seed");
    gen->add_option("--name", gen_name, "sequence name (default: directory name)");

    // track
    std::string tr_tracker, tr_det, tr_out, tr_params_file, tr_params, tr_mode = "exact";
    std::int64_t tr_seed = -1;
    CLI::App* track = app.add_subcommand("track", "run one tracker");
    track->add_option("--tracker", tr_tracker, "tracker name")->required();
    track->add_option("--det", tr_det, "detection csv")->required();
    track->add_option("--out", tr_out, "output track csv")->required();
    track->add_option("--params-file", tr_params_file, "parameter overrides, key=value lines");
    track->add_option("--params", tr_params, "inline overrides, k=v,k2=v2,...");
    track->add_option("--mode", tr_mode, "DP_NMS solver: exact or dp");
    track->add_option("--seed", tr_seed, "seed recorded in the manifest");

    // eval
    std::string ev_gt, ev_hyp, ev_out, ev_name = "result", ev_seqinfo, ev_manifest, ev_curves;
    double ev_iou = 0.5;
    CLI::App* eval = app.add_subcommand("eval", "score hypotheses against ground truth");
    eval->add_option("--gt", ev_gt, "ground-truth csv")->required();
    eval->add_option("--hyp", ev_hyp, "hypothesis csv")->required();
    eval->add_option("--out", ev_out, "output prefix (.txt table, .kv metrics)");
    eval->add_option("--name", ev_name, "row label in the table");
    eval->add_option("--iou-min", ev_iou, "match threshold");
    eval->add_option("--seqinfo", ev_seqinfo, "seqinfo.txt for the frame count");
    eval->add_option("--manifest", ev_manifest, "run manifest for the Hz column");
    eval->add_option("--curves", ev_curves, "per-frame fp/fn csv");

    // tune
    std::string tu_tracker, tu_train, tu_out;
    int tu_runs = 20, tu_jobs = 1;
    std::int64_t tu_seed = 1;
    double tu_iou = 0.5;
    CLI::App* tune = app.add_subcommand("tune", "randomized parameter search");
    tune->add_option("--tracker", tu_tracker, "tracker name")->required();
    tune->add_option("--train", tu_train, "training directory")->required();
    tune->add_option("--out", tu_out, "report path")->required();
    tune->add_option("--runs", tu_runs, "number of runs (run 0 = defaults)");
    tune->add_option("--seed", tu_seed, "search seed");
    tune->add_option("--jobs", tu_jobs, "worker threads");
    tune->add_option("--iou-min", tu_iou, "match threshold");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) return cmd_gen(gen_config, gen_out, gen_seed, gen_name);
        if (track->parsed())
            return cmd_track(tr_tracker, tr_det, tr_out, tr_params_file, tr_params, tr_mode,
                             tr_seed);
        if (eval->parsed())
            return cmd_eval(ev_gt, ev_hyp, ev_out, ev_name, ev_iou, ev_seqinfo, ev_manifest,
                            ev_curves);
        if (tune->parsed())
            return cmd_tune(tu_tracker, tu_train, tu_out, tu_runs, tu_seed, tu_jobs, tu_iou);
    } catch (const std::exception& e) {
        std::cerr << "motkit: error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
