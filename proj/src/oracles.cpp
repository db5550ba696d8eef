#include "mot/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace mot {
namespace {

// Mirrors the solver's tie window: optima within a relative 1e-9 of the
// minimum count as equal-cost and the lexicographically smallest wins.
double tie_tolerance(double best) { return 1e-9 * std::max(1.0, std::abs(best)); }

void enumerate_assignments(const CostMatrix& cost, int row, std::vector<int>& col_of,
                           std::vector<bool>& col_used,
                           std::vector<Assignment>& out) {
    const int rows = static_cast<int>(cost.rows());
    const int cols = static_cast<int>(cost.cols());
    if (row == rows) {
        Assignment a;
        for (int r = 0; r < rows; ++r) {
            if (col_of[r] >= 0) a.pairs.emplace_back(r, col_of[r]);
        }
        a.total_cost = 0.0;
        for (const auto& [r, c] : a.pairs) a.total_cost += cost(r, c);
        out.push_back(std::move(a));
        return;
    }
    // A row may stay bare only when rows outnumber columns; complete
    // assignments use min(rows, cols) pairs.
    const int remaining_rows = rows - row;
    int free_cols = 0;
    for (int c = 0; c < cols; ++c)
        if (!col_used[c]) ++free_cols;
    if (remaining_rows > free_cols) {
        col_of[row] = -1;
        enumerate_assignments(cost, row + 1, col_of, col_used, out);
    }
    for (int c = 0; c < cols; ++c) {
        if (col_used[c] || !std::isfinite(cost(row, c))) continue;
        col_used[c] = true;
        col_of[row] = c;
        enumerate_assignments(cost, row + 1, col_of, col_used, out);
        col_used[c] = false;
        col_of[row] = -1;
    }
}

std::vector<Assignment> all_complete_assignments(const CostMatrix& cost) {
    const int rows = static_cast<int>(cost.rows());
    const int cols = static_cast<int>(cost.cols());
    std::vector<Assignment> out;
    if (rows == 0 || cols == 0) {
        out.push_back(Assignment{});
        return out;
    }
    std::vector<int> col_of(rows, -1);
    std::vector<bool> col_used(cols, false);
    enumerate_assignments(cost, 0, col_of, col_used, out);
    const std::size_t want = static_cast<std::size_t>(std::min(rows, cols));
    out.erase(std::remove_if(out.begin(), out.end(),
                             [&](const Assignment& a) { return a.pairs.size() != want; }),
              out.end());
    return out;
}

}  // namespace

Assignment oracle_assignment(const CostMatrix& cost) {
    if (cost.rows() > 8 || cost.cols() > 8)
        throw std::invalid_argument("oracle_assignment: matrices larger than 8x8 unsupported");
    std::vector<Assignment> all = all_complete_assignments(cost);
    if (all.empty()) throw InfeasibleError("oracle_assignment: no complete assignment");
    double best = std::numeric_limits<double>::infinity();
    for (const Assignment& a : all) best = std::min(best, a.total_cost);
    const double tol = tie_tolerance(best);
    const Assignment* pick = nullptr;
    for (const Assignment& a : all) {
        if (a.total_cost > best + tol) continue;
        if (pick == nullptr || lex_less(a.pairs, pick->pairs)) pick = &a;
    }
    return *pick;
}

std::vector<Assignment> oracle_kbest(const CostMatrix& cost, int m) {
    if (cost.rows() > 5 || cost.cols() > 5)
        throw std::invalid_argument("oracle_kbest: matrices larger than 5x5 unsupported");
    if (m <= 0) return {};
    std::vector<Assignment> all = all_complete_assignments(cost);
    std::sort(all.begin(), all.end(), [](const Assignment& a, const Assignment& b) {
        if (a.total_cost != b.total_cost) return a.total_cost < b.total_cost;
        return lex_less(a.pairs, b.pairs);
    });
    if (static_cast<int>(all.size()) > m) all.resize(static_cast<std::size_t>(m));
    return all;
}

namespace {

struct JpdaHypothesisScan {
    int t = 0, mcount = 0;
    const Eigen::MatrixXd* log_pair = nullptr;  // -inf outside the gate
    double log_miss = 0.0;
    std::vector<int> choice;          // per target: measurement index or -1
    std::vector<bool> used;
    std::vector<std::pair<std::vector<int>, double>> hyps;  // (choices, log weight)

    void recurse(int i, double acc) {
        if (i == t) {
            hyps.emplace_back(choice, acc);
            return;
        }
        choice[i] = -1;
        recurse(i + 1, acc + log_miss);
        for (int j = 0; j < mcount; ++j) {
            if (used[j] || !std::isfinite((*log_pair)(i, j))) continue;
            used[j] = true;
            choice[i] = j;
            recurse(i + 1, acc + (*log_pair)(i, j));
            used[j] = false;
            choice[i] = -1;
        }
    }
};

}  // namespace

JPDAMarginals oracle_jpda(const std::vector<KalmanState>& targets,
                          const std::vector<Measurement>& measurements, const JPDAConfig& cfg,
                          const KalmanModel& model) {
    const int t = static_cast<int>(targets.size());
    const int mcount = static_cast<int>(measurements.size());
    if (t > 3 || mcount > 3)
        throw std::invalid_argument("oracle_jpda: more than 3 targets or measurements unsupported");

    // Per-hypothesis log weight: gated pairs contribute
    // log p_d + log N(z; z_hat, S) - log lambda, misses log(1 - p_d).
    Eigen::MatrixXd log_pair(t, mcount);
    log_pair.setConstant(-std::numeric_limits<double>::infinity());
    for (int i = 0; i < t; ++i) {
        Measurement z_hat;
        MeasurementMatrix s;
        predicted_measurement(targets[i], model, z_hat, s);
        for (int j = 0; j < mcount; ++j) {
            if (mahalanobis2(measurements[j], z_hat, s) > cfg.gate) continue;
            log_pair(i, j) = std::log(cfg.p_detect) +
                             log_gaussian_density(measurements[j], z_hat, s) -
                             std::log(cfg.clutter_density);
        }
    }

    JpdaHypothesisScan scan;
    scan.t = t;
    scan.mcount = mcount;
    scan.log_pair = &log_pair;
    scan.log_miss = std::log(1.0 - cfg.p_detect);
    scan.choice.assign(static_cast<std::size_t>(std::max(t, 1)), -1);
    scan.used.assign(static_cast<std::size_t>(std::max(mcount, 1)), false);
    scan.recurse(0, 0.0);

    double peak = -std::numeric_limits<double>::infinity();
    for (const auto& [choices, lw] : scan.hyps) peak = std::max(peak, lw);
    JPDAMarginals marg;
    marg.beta = Eigen::MatrixXd::Zero(t, mcount);
    marg.miss = Eigen::VectorXd::Zero(t);
    if (!std::isfinite(peak)) {
        marg.miss.setOnes();
        return marg;
    }
    double total = 0.0;
    for (const auto& [choices, lw] : scan.hyps) {
        const double w = std::exp(lw - peak);
        total += w;
        for (int i = 0; i < t; ++i) {
            if (choices[static_cast<std::size_t>(i)] >= 0)
                marg.beta(i, choices[static_cast<std::size_t>(i)]) += w;
            else
                marg.miss(i) += w;
        }
    }
    marg.beta /= total;
    marg.miss /= total;
    return marg;
}

namespace {

struct FlowScan {
    const FlowGraph* g = nullptr;
    std::map<std::pair<int, int>, double> edge;
    std::vector<std::vector<int>> chains;
    std::vector<std::vector<int>> best;
    double best_cost = 0.0;  // the empty path set costs zero

    double price() const {
        double total = 0.0;
        for (const std::vector<int>& p : chains) {
            total += g->entry_cost + g->exit_cost;
            for (std::size_t k = 0; k < p.size(); ++k) {
                total += g->det_cost[static_cast<std::size_t>(p[k])];
                if (k + 1 < p.size()) total += edge.at({p[k], p[k + 1]});
            }
        }
        return total;
    }

    void recurse(int i) {
        const int n = static_cast<int>(g->detections.size());
        if (i == n) {
            const double c = price();
            if (c < best_cost) {
                best_cost = c;
                best = chains;
            }
            return;
        }
        recurse(i + 1);  // detection unused
        chains.push_back({i});
        recurse(i + 1);
        chains.pop_back();
        for (std::vector<int>& c : chains) {
            if (edge.count({c.back(), i}) == 0) continue;
            c.push_back(i);
            recurse(i + 1);
            c.pop_back();
        }
    }
};

}  // namespace

std::vector<std::vector<int>> oracle_flow(const FlowGraph& g) {
    if (g.detections.size() > 6)
        throw std::invalid_argument("oracle_flow: more than 6 detections unsupported");
    FlowScan scan;
    scan.g = &g;
    for (const FlowTransition& tr : g.transitions) scan.edge[{tr.from, tr.to}] = tr.cost;
    scan.recurse(0);
    std::sort(scan.best.begin(), scan.best.end(),
              [](const std::vector<int>& a, const std::vector<int>& b) { return a[0] < b[0]; });
    return scan.best;
}

}  // namespace mot
