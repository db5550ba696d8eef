#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <vector>

#include "mot/cem.hpp"
#include "mot/geometry.hpp"
#include "mot/trackers.hpp"

namespace mot {

namespace {

constexpr double kExcEps = 1.0;

struct CemParams {
    double w_data, w_dyn, w_exc, w_per, w_reg;
    double lambda, sigma_exc, mu, border, gate;
    double img_w, img_h;
    int max_rounds;
    double energy_tol;
};

CemParams read_params(const ParamSet& p) {
    CemParams c;
    c.w_data = p.get("w_data");
    c.w_dyn = p.get("w_dyn");
    c.w_exc = p.get("w_exc");
    c.w_per = p.get("w_per");
    c.w_reg = p.get("w_reg");
    c.lambda = p.get("lambda");
    c.sigma_exc = p.get("sigma_exc");
    c.mu = p.get("mu");
    c.border = p.get("border");
    c.gate = p.get("gate");
    c.img_w = p.get("img_width");
    c.img_h = p.get("img_height");
    c.max_rounds = p.get_int("max_rounds");
    c.energy_tol = p.get("energy_tol");
    return c;
}

struct Context {
    std::map<int, std::vector<int>> by_frame;
    std::vector<Eigen::Vector2d> centers;
    int seq_first = 0, seq_last = 0;
};

Context make_context(const std::vector<Detection>& dets) {
    Context ctx;
    ctx.centers.reserve(dets.size());
    for (int i = 0; i < static_cast<int>(dets.size()); ++i) {
        ctx.by_frame[dets[i].frame].push_back(i);
        ctx.centers.emplace_back(dets[i].box.cx(), dets[i].box.cy());
    }
    if (!ctx.by_frame.empty()) {
        ctx.seq_first = ctx.by_frame.begin()->first;
        ctx.seq_last = ctx.by_frame.rbegin()->first;
    }
    return ctx;
}

double border_distance(const Eigen::Vector2d& p, const CemParams& pp) {
    return std::min(std::min(p.x(), pp.img_w - p.x()), std::min(p.y(), pp.img_h - p.y()));
}

// Direction of increasing border distance (the active side of the min).
Eigen::Vector2d border_direction(const Eigen::Vector2d& p, const CemParams& pp) {
    const double d = border_distance(p, pp);
    if (d == p.x()) return {1.0, 0.0};
    if (d == pp.img_w - p.x()) return {-1.0, 0.0};
    if (d == p.y()) return {0.0, 1.0};
    return {0.0, -1.0};
}

double sigmoid(double z) {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-std::min(z, 500.0)));
    const double e = std::exp(std::max(z, -500.0));
    return e / (1.0 + e);
}

double endpoint_penalty(const Eigen::Vector2d& p, const CemParams& pp) {
    const double scale = std::max(pp.border / 4.0, 1e-6);
    return sigmoid((border_distance(p, pp) - pp.border) / scale);
}

double energy(const CEMState& s, const Context& ctx, const CemParams& pp) {
    double e_data = 0.0, e_dyn = 0.0, e_exc = 0.0, e_per = 0.0, e_reg = 0.0;
    const double gate2 = pp.gate * pp.gate;

    for (const auto& t : s.targets) {
        for (int i = 0; i < t.length(); ++i) {
            const auto it = ctx.by_frame.find(t.start_frame + i);
            if (it == ctx.by_frame.end()) continue;
            for (int d : it->second) {
                const double d2 = (t.pos[i] - ctx.centers[d]).squaredNorm();
                if (d2 <= gate2) e_data -= pp.lambda / (d2 + pp.lambda);
            }
        }
        for (int i = 0; i + 2 < t.length(); ++i)
            e_dyn += (t.pos[i + 2] - 2.0 * t.pos[i + 1] + t.pos[i]).squaredNorm();
        if (t.start_frame > ctx.seq_first) e_per += endpoint_penalty(t.pos.front(), pp);
        if (t.end_frame() < ctx.seq_last) e_per += endpoint_penalty(t.pos.back(), pp);
        e_reg += pp.mu / static_cast<double>(t.length());
    }
    e_reg += static_cast<double>(s.targets.size());

    const int k = static_cast<int>(s.targets.size());
    for (int i = 0; i < k; ++i) {
        for (int j = i + 1; j < k; ++j) {
            const CemTarget& a = s.targets[i];
            const CemTarget& b = s.targets[j];
            const int lo = std::max(a.start_frame, b.start_frame);
            const int hi = std::min(a.end_frame(), b.end_frame());
            for (int f = lo; f <= hi; ++f) {
                const Eigen::Vector2d delta =
                    a.pos[f - a.start_frame] - b.pos[f - b.start_frame];
                e_exc += pp.sigma_exc / (delta.squaredNorm() + kExcEps);
            }
        }
    }

    return pp.w_data * e_data + pp.w_dyn * e_dyn + pp.w_exc * e_exc + pp.w_per * e_per +
           pp.w_reg * e_reg;
}

Eigen::VectorXd gradient(const CEMState& s, const Context& ctx, const CemParams& pp) {
    std::vector<int> offset(s.targets.size() + 1, 0);
    for (std::size_t t = 0; t < s.targets.size(); ++t)
        offset[t + 1] = offset[t] + 2 * s.targets[t].length();
    Eigen::VectorXd g = Eigen::VectorXd::Zero(offset.back());
    const auto at = [&](int t, int i) { return g.segment<2>(offset[t] + 2 * i); };
    const double gate2 = pp.gate * pp.gate;

    for (int t = 0; t < static_cast<int>(s.targets.size()); ++t) {
        const CemTarget& tgt = s.targets[t];
        for (int i = 0; i < tgt.length(); ++i) {
            const auto it = ctx.by_frame.find(tgt.start_frame + i);
            if (it == ctx.by_frame.end()) continue;
            for (int d : it->second) {
                const Eigen::Vector2d diff = tgt.pos[i] - ctx.centers[d];
                const double d2 = diff.squaredNorm();
                if (d2 > gate2) continue;
                const double denom = d2 + pp.lambda;
                at(t, i) += pp.w_data * 2.0 * pp.lambda / (denom * denom) * diff;
            }
        }
        for (int i = 0; i + 2 < tgt.length(); ++i) {
            const Eigen::Vector2d v = tgt.pos[i + 2] - 2.0 * tgt.pos[i + 1] + tgt.pos[i];
            at(t, i) += pp.w_dyn * 2.0 * v;
            at(t, i + 1) -= pp.w_dyn * 4.0 * v;
            at(t, i + 2) += pp.w_dyn * 2.0 * v;
        }
        const double scale = std::max(pp.border / 4.0, 1e-6);
        if (tgt.start_frame > ctx.seq_first) {
            const double pen = endpoint_penalty(tgt.pos.front(), pp);
            at(t, 0) += pp.w_per * pen * (1.0 - pen) / scale * border_direction(tgt.pos.front(), pp);
        }
        if (tgt.end_frame() < ctx.seq_last) {
            const double pen = endpoint_penalty(tgt.pos.back(), pp);
            at(t, tgt.length() - 1) +=
                pp.w_per * pen * (1.0 - pen) / scale * border_direction(tgt.pos.back(), pp);
        }
    }

    const int k = static_cast<int>(s.targets.size());
    for (int i = 0; i < k; ++i) {
        for (int j = i + 1; j < k; ++j) {
            const CemTarget& a = s.targets[i];
            const CemTarget& b = s.targets[j];
            const int lo = std::max(a.start_frame, b.start_frame);
            const int hi = std::min(a.end_frame(), b.end_frame());
            for (int f = lo; f <= hi; ++f) {
                const int ia = f - a.start_frame, ib = f - b.start_frame;
                const Eigen::Vector2d delta = a.pos[ia] - b.pos[ib];
                const double denom = delta.squaredNorm() + kExcEps;
                const Eigen::Vector2d dg =
                    pp.w_exc * (-2.0) * pp.sigma_exc / (denom * denom) * delta;
                at(i, ia) += dg;
                at(j, ib) -= dg;
            }
        }
    }
    return g;
}

Eigen::VectorXd flatten(const CEMState& s) {
    Eigen::VectorXd x(s.coord_count());
    int k = 0;
    for (const auto& t : s.targets)
        for (const auto& p : t.pos) {
            x(k++) = p.x();
            x(k++) = p.y();
        }
    return x;
}

void unflatten(const Eigen::VectorXd& x, CEMState& s) {
    int k = 0;
    for (auto& t : s.targets)
        for (auto& p : t.pos) {
            p.x() = x(k++);
            p.y() = x(k++);
        }
}

struct Optimizer {
    const Context& ctx;
    const CemParams& pp;
    CemTrace* trace;

    double eval(const CEMState& s) const { return energy(s, ctx, pp); }

    void record(double e) const {
        if (trace) trace->push_back(e);
    }

    // Polak-Ribiere conjugate gradient with restarts and Armijo backtracking.
    double descend(CEMState& s, double e) const {
        if (s.coord_count() == 0) return e;
        Eigen::VectorXd x = flatten(s);
        Eigen::VectorXd g = gradient(s, ctx, pp);
        Eigen::VectorXd d = -g;
        CEMState trial = s;
        for (int iter = 0; iter < 60; ++iter) {
            if (g.lpNorm<Eigen::Infinity>() < 1e-8) break;
            double gd = g.dot(d);
            if (gd >= 0.0) {
                d = -g;
                gd = -g.squaredNorm();
            }
            double alpha = 1.0;
            bool accepted = false;
            double e_trial = e;
            Eigen::VectorXd x_trial;
            for (int h = 0; h < 40; ++h) {
                x_trial = x + alpha * d;
                unflatten(x_trial, trial);
                e_trial = eval(trial);
                if (e_trial <= e + 1e-4 * alpha * gd) {
                    accepted = true;
                    break;
                }
                alpha *= 0.5;
            }
            if (!accepted) {
                if ((d + g).lpNorm<Eigen::Infinity>() == 0.0) break;  // already steepest descent
                d = -g;
                continue;
            }
            x = x_trial;
            e = e_trial;
            record(e);
            const Eigen::VectorXd g_new = gradient(trial, ctx, pp);
            const double beta = std::max(0.0, g_new.dot(g_new - g) / g.squaredNorm());
            d = -g_new + beta * d;
            g = g_new;
        }
        unflatten(x, s);
        return e;
    }

    bool has_support(int frame, const Eigen::Vector2d& p) const {
        const auto it = ctx.by_frame.find(frame);
        if (it == ctx.by_frame.end()) return false;
        const double gate2 = pp.gate * pp.gate;
        for (int d : it->second)
            if ((p - ctx.centers[d]).squaredNorm() <= gate2) return true;
        return false;
    }

    std::vector<CEMState> grow_candidates(const CEMState& s) const {
        std::vector<CEMState> out;
        for (int t = 0; t < static_cast<int>(s.targets.size()); ++t) {
            const CemTarget& tgt = s.targets[t];
            const int len = tgt.length();
            if (tgt.end_frame() < ctx.seq_last) {
                const Eigen::Vector2d p = len >= 2
                                              ? (2.0 * tgt.pos[len - 1] - tgt.pos[len - 2]).eval()
                                              : tgt.pos.back();
                if (has_support(tgt.end_frame() + 1, p)) {
                    CEMState c = s;
                    c.targets[t].pos.push_back(p);
                    out.push_back(std::move(c));
                }
            }
            if (tgt.start_frame > ctx.seq_first) {
                const Eigen::Vector2d p =
                    len >= 2 ? (2.0 * tgt.pos[0] - tgt.pos[1]).eval() : tgt.pos.front();
                if (has_support(tgt.start_frame - 1, p)) {
                    CEMState c = s;
                    c.targets[t].pos.insert(c.targets[t].pos.begin(), p);
                    c.targets[t].start_frame -= 1;
                    out.push_back(std::move(c));
                }
            }
        }
        return out;
    }

    std::vector<CEMState> shrink_candidates(const CEMState& s) const {
        std::vector<CEMState> out;
        for (int t = 0; t < static_cast<int>(s.targets.size()); ++t) {
            if (s.targets[t].length() < 2) continue;
            CEMState back = s;
            back.targets[t].pos.pop_back();
            out.push_back(std::move(back));
            CEMState front = s;
            front.targets[t].pos.erase(front.targets[t].pos.begin());
            front.targets[t].start_frame += 1;
            out.push_back(std::move(front));
        }
        return out;
    }

    std::vector<CEMState> merge_candidates(const CEMState& s) const {
        std::vector<CEMState> out;
        const int k = static_cast<int>(s.targets.size());
        for (int a = 0; a < k; ++a) {
            for (int b = 0; b < k; ++b) {
                if (a == b) continue;
                const CemTarget& ta = s.targets[a];
                const CemTarget& tb = s.targets[b];
                const int gap = tb.start_frame - ta.end_frame();
                if (gap < 1) continue;
                CemTarget merged;
                merged.start_frame = ta.start_frame;
                merged.pos = ta.pos;
                for (int g = 1; g < gap; ++g) {
                    const double w = static_cast<double>(g) / static_cast<double>(gap);
                    merged.pos.push_back((1.0 - w) * ta.pos.back() + w * tb.pos.front());
                }
                merged.pos.insert(merged.pos.end(), tb.pos.begin(), tb.pos.end());
                CEMState c = s;
                c.targets[std::min(a, b)] = std::move(merged);
                c.targets.erase(c.targets.begin() + std::max(a, b));
                out.push_back(std::move(c));
            }
        }
        return out;
    }

    std::vector<CEMState> split_candidates(const CEMState& s) const {
        std::vector<CEMState> out;
        for (int t = 0; t < static_cast<int>(s.targets.size()); ++t) {
            const CemTarget& tgt = s.targets[t];
            const int len = tgt.length();
            if (len < 2) continue;
            int cut = 0;  // last index of the first part
            double worst = -1.0;
            for (int i = 1; i + 1 < len; ++i) {
                const double kink =
                    (tgt.pos[i + 1] - 2.0 * tgt.pos[i] + tgt.pos[i - 1]).norm();
                if (kink > worst) {
                    worst = kink;
                    cut = i;
                }
            }
            CemTarget head, tail;
            head.start_frame = tgt.start_frame;
            head.pos.assign(tgt.pos.begin(), tgt.pos.begin() + cut + 1);
            tail.start_frame = tgt.start_frame + cut + 1;
            tail.pos.assign(tgt.pos.begin() + cut + 1, tgt.pos.end());
            CEMState c = s;
            c.targets[t] = std::move(head);
            c.targets.insert(c.targets.begin() + t + 1, std::move(tail));
            out.push_back(std::move(c));
        }
        return out;
    }

    std::vector<CEMState> add_candidates(const CEMState& s) const {
        // Chains of detections no current target accounts for.
        const double gate2 = pp.gate * pp.gate;
        struct Chain {
            int last_frame;
            std::vector<Eigen::Vector2d> pos;
        };
        std::vector<Chain> chains, done;
        for (const auto& [frame, dets] : ctx.by_frame) {
            for (int d : dets) {
                bool claimed = false;
                for (const auto& t : s.targets) {
                    if (frame < t.start_frame || frame > t.end_frame()) continue;
                    if ((t.pos[frame - t.start_frame] - ctx.centers[d]).squaredNorm() <= gate2) {
                        claimed = true;
                        break;
                    }
                }
                if (claimed) continue;
                int best = -1;
                double best_dist = pp.gate;
                for (int c = 0; c < static_cast<int>(chains.size()); ++c) {
                    if (chains[c].last_frame != frame - 1) continue;
                    const double dist = (chains[c].pos.back() - ctx.centers[d]).norm();
                    if (dist <= best_dist) {
                        best_dist = dist;
                        best = c;
                    }
                }
                if (best >= 0) {
                    chains[best].pos.push_back(ctx.centers[d]);
                    chains[best].last_frame = frame;
                } else {
                    chains.push_back({frame, {ctx.centers[d]}});
                }
            }
            // Chains that can no longer extend move to the finished list.
            std::vector<Chain> open;
            for (auto& c : chains)
                (c.last_frame < frame ? done : open).push_back(std::move(c));
            chains = std::move(open);
        }
        done.insert(done.end(), chains.begin(), chains.end());

        std::vector<CEMState> out;
        for (const auto& chain : done) {
            if (static_cast<int>(chain.pos.size()) < 3) continue;
            CemTarget t;
            t.start_frame = chain.last_frame - static_cast<int>(chain.pos.size()) + 1;
            t.pos = chain.pos;
            CEMState c = s;
            c.targets.push_back(std::move(t));
            out.push_back(std::move(c));
        }
        return out;
    }

    std::vector<CEMState> remove_candidates(const CEMState& s) const {
        std::vector<CEMState> out;
        for (int t = 0; t < static_cast<int>(s.targets.size()); ++t) {
            CEMState c = s;
            c.targets.erase(c.targets.begin() + t);
            out.push_back(std::move(c));
        }
        return out;
    }

    template <typename Gen>
    double apply_until_stable(CEMState& s, double e, Gen gen) const {
        for (int pass = 0; pass < 200; ++pass) {
            bool improved = false;
            for (auto& cand : gen(s)) {
                const double ec = eval(cand);
                if (ec < e) {
                    s = std::move(cand);
                    e = ec;
                    record(e);
                    improved = true;
                    break;
                }
            }
            if (!improved) break;
        }
        return e;
    }

    double sweep(CEMState& s, double e) const {
        e = apply_until_stable(s, e, [this](const CEMState& c) { return grow_candidates(c); });
        e = apply_until_stable(s, e, [this](const CEMState& c) { return shrink_candidates(c); });
        e = apply_until_stable(s, e, [this](const CEMState& c) { return merge_candidates(c); });
        e = apply_until_stable(s, e, [this](const CEMState& c) { return split_candidates(c); });
        e = apply_until_stable(s, e, [this](const CEMState& c) { return add_candidates(c); });
        e = apply_until_stable(s, e, [this](const CEMState& c) { return remove_candidates(c); });
        return e;
    }
};

CEMState state_from_trajectories(const std::vector<Trajectory>& trajs) {
    CEMState s;
    for (const auto& traj : trajs) {
        if (traj.boxes.empty()) continue;
        CemTarget t;
        t.start_frame = traj.start_frame();
        auto prev = traj.boxes.begin();
        for (auto it = traj.boxes.begin(); it != traj.boxes.end(); prev = it, ++it) {
            for (int f = prev->first + 1; f < it->first; ++f) {
                const double w = static_cast<double>(f - prev->first) /
                                 static_cast<double>(it->first - prev->first);
                const BBox b = lerp(prev->second, it->second, w);
                t.pos.emplace_back(b.cx(), b.cy());
            }
            t.pos.emplace_back(it->second.cx(), it->second.cy());
        }
        s.targets.push_back(std::move(t));
    }
    return s;
}

std::vector<Trajectory> attach_boxes(const CEMState& s, const Context& ctx,
                                     const std::vector<Detection>& dets) {
    std::vector<int> order(s.targets.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return s.targets[a].start_frame < s.targets[b].start_frame;
    });

    std::vector<Trajectory> out;
    int id = 1;
    for (int t : order) {
        const CemTarget& tgt = s.targets[t];
        std::vector<std::pair<double, double>> size(tgt.length(), {-1.0, -1.0});
        for (int i = 0; i < tgt.length(); ++i) {
            const auto it = ctx.by_frame.find(tgt.start_frame + i);
            if (it == ctx.by_frame.end()) continue;
            int best = -1;
            double best_d2 = std::numeric_limits<double>::infinity();
            for (int d : it->second) {
                const double d2 = (tgt.pos[i] - ctx.centers[d]).squaredNorm();
                if (d2 < best_d2) {
                    best_d2 = d2;
                    best = d;
                }
            }
            if (best >= 0) size[i] = {dets[best].box.width, dets[best].box.height};
        }
        for (int i = 1; i < tgt.length(); ++i)
            if (size[i].first < 0.0) size[i] = size[i - 1];
        for (int i = tgt.length() - 2; i >= 0; --i)
            if (size[i].first < 0.0) size[i] = size[i + 1];

        Trajectory traj;
        traj.id = id++;
        for (int i = 0; i < tgt.length(); ++i) {
            const double w = size[i].first > 0.0 ? size[i].first : 24.0;
            const double h = size[i].second > 0.0 ? size[i].second : 48.0;
            traj.boxes.emplace(tgt.start_frame + i,
                               BBox(tgt.pos[i].x() - w / 2.0, tgt.pos[i].y() - h / 2.0, w, h));
        }
        out.push_back(std::move(traj));
    }
    return out;
}

}  // namespace

double cem_energy(const CEMState& s, const std::vector<Detection>& detections,
                  const ParamSet& params) {
    return energy(s, make_context(detections), read_params(params));
}

Eigen::VectorXd cem_gradient(const CEMState& s, const std::vector<Detection>& detections,
                             const ParamSet& params) {
    return gradient(s, make_context(detections), read_params(params));
}

std::vector<Trajectory> track_cem_traced(const std::vector<Detection>& detections,
                                         const ParamSet& params,
                                         const std::vector<Trajectory>& init, CemTrace* trace) {
    if (detections.empty() || init.empty()) return {};
    const Context ctx = make_context(detections);
    const CemParams pp = read_params(params);
    const Optimizer opt{ctx, pp, trace};

    CEMState s = state_from_trajectories(init);
    double e = opt.eval(s);
    opt.record(e);
    for (int round = 0; round < pp.max_rounds; ++round) {
        const double e_before = e;
        e = opt.descend(s, e);
        e = opt.sweep(s, e);
        if (e_before - e < pp.energy_tol) break;
    }
    return attach_boxes(s, ctx, detections);
}

std::vector<Trajectory> track_cem(const std::vector<Detection>& detections,
                                  const ParamSet& params,
                                  const std::vector<Trajectory>& init) {
    return track_cem_traced(detections, params, init, nullptr);
}

}  // namespace mot
