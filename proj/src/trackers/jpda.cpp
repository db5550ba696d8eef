#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "mot/assignment.hpp"
#include "mot/jpda.hpp"
#include "mot/trackers.hpp"

namespace mot {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

StateMatrix symmetric_pd(StateMatrix p) {
    p = 0.5 * (p + p.transpose()).eval();
    const Eigen::SelfAdjointEigenSolver<StateMatrix> es(p);
    if (es.eigenvalues().minCoeff() <= 0.0)
        throw std::runtime_error("jpda: covariance lost positive definiteness");
    return p;
}

}  // namespace

JPDAMarginals jpda_frame_association(const std::vector<KalmanState>& targets,
                                     const std::vector<Measurement>& measurements,
                                     const JPDAConfig& cfg, const KalmanModel& model) {
    const int t = static_cast<int>(targets.size());
    const int m = static_cast<int>(measurements.size());
    JPDAMarginals out;
    out.beta = Eigen::MatrixXd::Zero(t, m);
    out.miss = Eigen::VectorXd::Zero(t);
    if (t == 0) return out;

    // Rows: targets. Columns: measurements, then one private miss column per
    // target. A complete row assignment is exactly one joint hypothesis.
    CostMatrix cost = CostMatrix::Constant(t, m + t, kInf);
    const double log_clutter = std::log(cfg.clutter_density);
    for (int i = 0; i < t; ++i) {
        Measurement z_hat;
        MeasurementMatrix s;
        predicted_measurement(targets[i], model, z_hat, s);
        for (int j = 0; j < m; ++j) {
            if (mahalanobis2(measurements[j], z_hat, s) > cfg.gate) continue;
            cost(i, j) = -std::log(cfg.p_detect) -
                         log_gaussian_density(measurements[j], z_hat, s) + log_clutter;
        }
        cost(i, m + i) = -std::log(1.0 - cfg.p_detect);
    }

    const std::vector<Assignment> hypotheses = murty_mbest(cost, cfg.m);
    const double c_min = hypotheses.front().total_cost;
    double weight_sum = 0.0;
    std::vector<double> weight(hypotheses.size());
    for (std::size_t h = 0; h < hypotheses.size(); ++h) {
        weight[h] = std::exp(-(hypotheses[h].total_cost - c_min));
        weight_sum += weight[h];
    }
    for (std::size_t h = 0; h < hypotheses.size(); ++h) {
        const double w = weight[h] / weight_sum;
        for (const auto& [i, j] : hypotheses[h].pairs) {
            if (j < m)
                out.beta(i, j) += w;
            else
                out.miss(i) += w;
        }
    }
    return out;
}

KalmanState jpda_update(const KalmanState& target, const std::vector<Measurement>& measurements,
                        const Eigen::VectorXd& beta, double beta0, const KalmanModel& model) {
    Measurement z_hat;
    MeasurementMatrix s;
    predicted_measurement(target, model, z_hat, s);

    Eigen::Matrix<double, 4, 8> h = Eigen::Matrix<double, 4, 8>::Zero();
    h.block<4, 4>(0, 0).setIdentity();
    const Eigen::Matrix<double, 8, 4> gain = target.covariance * h.transpose() * s.inverse();

    Measurement mixed = Measurement::Zero();
    MeasurementMatrix spread = MeasurementMatrix::Zero();
    for (int j = 0; j < static_cast<int>(measurements.size()); ++j) {
        const Measurement y = measurements[j] - z_hat;
        mixed += beta(j) * y;
        spread += beta(j) * y * y.transpose();
    }
    spread -= mixed * mixed.transpose();

    KalmanState out;
    out.mean = target.mean + gain * mixed;
    out.covariance = target.covariance -
                     (1.0 - beta0) * gain * s * gain.transpose() +
                     gain * spread * gain.transpose();
    out.covariance = symmetric_pd(out.covariance);
    return out;
}

namespace {

struct JpdaTarget {
    int id = 0;
    KalmanState state;
    int miss_streak = 0;
    bool alive = true;
    std::map<int, BBox> boxes;
};

struct BirthChain {
    int last_frame = 0;
    std::vector<Measurement> zs;
};

}  // namespace

std::vector<Trajectory> track_jpda_m(const std::vector<Detection>& detections,
                                     const ParamSet& params) {
    if (detections.empty()) return {};

    JPDAConfig cfg;
    cfg.m = params.get_int("m");
    cfg.gate = params.get("gate");
    cfg.p_detect = params.get("p_detect");
    cfg.clutter_density = params.get("clutter_density");
    KalmanModel model;
    model.process_noise = params.get("q_process");
    model.measurement_noise = params.get("r_measure");
    const int init_frames = params.get_int("init_frames");
    const double birth_gate = params.get("birth_gate");
    const double birth_threshold = params.get("birth_threshold");
    const double death_threshold = params.get("death_threshold");
    const int kill_frames = params.get_int("kill_frames");

    std::vector<Detection> sorted = detections;
    std::sort(sorted.begin(), sorted.end(), [](const Detection& a, const Detection& b) {
        const auto key = [](const Detection& d) {
            return std::make_tuple(d.frame, d.box.left, d.box.top, d.box.width, d.box.height,
                                   d.confidence);
        };
        return key(a) < key(b);
    });

    std::map<int, std::vector<Measurement>> frames;
    for (const auto& d : sorted) frames[d.frame].push_back(box_to_measurement(d.box));

    std::vector<JpdaTarget> targets;
    std::vector<BirthChain> chains;
    int next_id = 1;
    const int last_frame = frames.rbegin()->first;
    for (int f = frames.begin()->first; f <= last_frame; ++f) {
        const auto it = frames.find(f);
        const std::vector<Measurement> zs =
            it == frames.end() ? std::vector<Measurement>{} : it->second;

        std::vector<int> alive_idx;
        for (int i = 0; i < static_cast<int>(targets.size()); ++i)
            if (targets[i].alive) alive_idx.push_back(i);

        std::vector<KalmanState> predicted;
        for (int i : alive_idx) {
            targets[i].state = kalman_predict(targets[i].state, 1, model);
            predicted.push_back(targets[i].state);
        }

        Eigen::VectorXd best_for_measurement = Eigen::VectorXd::Zero(zs.size());
        if (!alive_idx.empty()) {
            const JPDAMarginals marg = jpda_frame_association(predicted, zs, cfg, model);
            for (int r = 0; r < static_cast<int>(alive_idx.size()); ++r) {
                JpdaTarget& tgt = targets[alive_idx[r]];
                tgt.state = jpda_update(tgt.state, zs, marg.beta.row(r).transpose(),
                                        marg.miss(r), model);
                tgt.boxes.emplace(f, measurement_to_box(tgt.state.mean.head<4>()));
                if (marg.miss(r) > death_threshold) {
                    if (++tgt.miss_streak >= kill_frames) tgt.alive = false;
                } else {
                    tgt.miss_streak = 0;
                }
            }
            for (int j = 0; j < static_cast<int>(zs.size()); ++j)
                best_for_measurement(j) = marg.beta.col(j).maxCoeff();
        }

        // Birth bookkeeping: chain unmatched measurements across consecutive
        // frames; a chain init_frames long becomes a target at this frame.
        std::vector<char> extended(chains.size(), 0);
        std::vector<BirthChain> next_chains;
        for (int j = 0; j < static_cast<int>(zs.size()); ++j) {
            if (best_for_measurement(j) >= birth_threshold) continue;
            int best_chain = -1;
            double best_dist = birth_gate;
            for (int c = 0; c < static_cast<int>(chains.size()); ++c) {
                if (extended[c] || chains[c].last_frame != f - 1) continue;
                const double dist =
                    (chains[c].zs.back().head<2>() - zs[j].head<2>()).norm();
                if (dist <= best_dist) {
                    best_dist = dist;
                    best_chain = c;
                }
            }
            BirthChain grown;
            if (best_chain >= 0) {
                extended[best_chain] = 1;
                grown = chains[best_chain];
            }
            grown.last_frame = f;
            grown.zs.push_back(zs[j]);
            if (static_cast<int>(grown.zs.size()) >= init_frames) {
                JpdaTarget t;
                t.id = next_id++;
                t.state = kalman_init(grown.zs.back(), model);
                if (grown.zs.size() >= 2) {
                    const auto& a = grown.zs[grown.zs.size() - 2];
                    const auto& b = grown.zs.back();
                    t.state.mean.segment<2>(4) = (b.head<2>() - a.head<2>());
                }
                t.boxes.emplace(f, measurement_to_box(grown.zs.back()));
                targets.push_back(std::move(t));
            } else {
                next_chains.push_back(std::move(grown));
            }
        }
        chains = std::move(next_chains);  // stale chains (not extended) drop out
    }

    std::vector<Trajectory> out;
    for (auto& t : targets) {
        Trajectory traj;
        traj.id = t.id;
        traj.boxes = std::move(t.boxes);
        out.push_back(std::move(traj));
    }
    return out;
}

}  // namespace mot
