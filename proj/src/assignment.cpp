#include "mot/assignment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

namespace mot {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double rel_tol(double reference) { return 1e-9 * std::max(1.0, std::abs(reference)); }

/// O(n^3) shortest-augmenting-path solver for a square matrix with finite
/// costs. Returns the column assigned to each row.
std::vector<int> kuhn_munkres(const Eigen::MatrixXd& a) {
    const int n = static_cast<int>(a.rows());
    std::vector<double> u(static_cast<std::size_t>(n) + 1, 0.0), v(static_cast<std::size_t>(n) + 1, 0.0);
    std::vector<int> p(static_cast<std::size_t>(n) + 1, 0), way(static_cast<std::size_t>(n) + 1, 0);
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<double> minv(static_cast<std::size_t>(n) + 1, kInf);
        std::vector<char> used(static_cast<std::size_t>(n) + 1, 0);
        do {
            used[static_cast<std::size_t>(j0)] = 1;
            const int i0 = p[static_cast<std::size_t>(j0)];
            int j1 = 0;
            double delta = kInf;
            for (int j = 1; j <= n; ++j) {
                if (used[static_cast<std::size_t>(j)]) continue;
                const double cur = a(i0 - 1, j - 1) - u[static_cast<std::size_t>(i0)] - v[static_cast<std::size_t>(j)];
                if (cur < minv[static_cast<std::size_t>(j)]) {
                    minv[static_cast<std::size_t>(j)] = cur;
                    way[static_cast<std::size_t>(j)] = j0;
                }
                if (minv[static_cast<std::size_t>(j)] < delta) {
                    delta = minv[static_cast<std::size_t>(j)];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[static_cast<std::size_t>(j)]) {
                    u[static_cast<std::size_t>(p[static_cast<std::size_t>(j)])] += delta;
                    v[static_cast<std::size_t>(j)] -= delta;
                } else {
                    minv[static_cast<std::size_t>(j)] -= delta;
                }
            }
            j0 = j1;
        } while (p[static_cast<std::size_t>(j0)] != 0);
        do {
            const int j1 = way[static_cast<std::size_t>(j0)];
            p[static_cast<std::size_t>(j0)] = p[static_cast<std::size_t>(j1)];
            j0 = j1;
        } while (j0 != 0);
    }
    std::vector<int> col_of_row(static_cast<std::size_t>(n), -1);
    for (int j = 1; j <= n; ++j)
        if (p[static_cast<std::size_t>(j)] != 0) col_of_row[static_cast<std::size_t>(p[static_cast<std::size_t>(j)]) - 1] = j - 1;
    return col_of_row;
}

struct SolveResult {
    bool feasible = false;
    double total = 0.0;
    std::vector<std::pair<int, int>> pairs;  // sorted by row
};

/// Solve a rectangular matrix with forbidden (+inf) cells by padding to a
/// square with zero-cost dummies and mapping +inf to a large finite value.
SolveResult solve_complete(const CostMatrix& cost) {
    const int rows = static_cast<int>(cost.rows());
    const int cols = static_cast<int>(cost.cols());
    const int n = std::max(rows, cols);

    double max_abs = 0.0;
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c)
            if (std::isfinite(cost(r, c))) max_abs = std::max(max_abs, std::abs(cost(r, c)));
    const double big = (max_abs + 1.0) * (n + 1);

    Eigen::MatrixXd padded = Eigen::MatrixXd::Zero(n, n);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) padded(r, c) = std::isfinite(cost(r, c)) ? cost(r, c) : big;

    const std::vector<int> col_of_row = kuhn_munkres(padded);

    SolveResult res;
    res.feasible = true;
    for (int r = 0; r < rows; ++r) {
        const int c = col_of_row[static_cast<std::size_t>(r)];
        if (c >= cols) continue;  // row parked on a dummy column
        if (!std::isfinite(cost(r, c))) {
            res.feasible = false;
            return res;
        }
        res.pairs.emplace_back(r, c);
        res.total += cost(r, c);
    }
    return res;
}

void force_pair(CostMatrix& w, int row, int col) {
    for (int c = 0; c < w.cols(); ++c)
        if (c != col) w(row, c) = kInf;
    for (int r = 0; r < w.rows(); ++r)
        if (r != row) w(r, col) = kInf;
}

/// Lexicographically smallest optimal pair sequence of `w`, given the
/// optimal total `target`. Decided greedily, one forced pair at a time.
std::vector<std::pair<int, int>> lexmin_pairs(CostMatrix w, double target) {
    const int rows = static_cast<int>(w.rows());
    const int cols = static_cast<int>(w.cols());
    const int k = std::min(rows, cols);
    const double tol = rel_tol(target);

    std::vector<std::pair<int, int>> pairs;
    std::vector<char> col_used(static_cast<std::size_t>(cols), 0);
    int remaining = k;
    for (int r = 0; r < rows && remaining > 0; ++r) {
        bool placed = false;
        for (int c = 0; c < cols; ++c) {
            if (col_used[static_cast<std::size_t>(c)] || !std::isfinite(w(r, c))) continue;
            CostMatrix trial = w;
            force_pair(trial, r, c);
            const SolveResult sr = solve_complete(trial);
            if (sr.feasible && std::abs(sr.total - target) <= tol) {
                w = std::move(trial);
                col_used[static_cast<std::size_t>(c)] = 1;
                pairs.emplace_back(r, c);
                --remaining;
                placed = true;
                break;
            }
        }
        if (!placed) {
            if (rows - r <= remaining)
                throw std::logic_error("assignment refinement failed to place a required row");
            // Every optimum leaves this row unassigned.
            for (int c = 0; c < cols; ++c) w(r, c) = kInf;
        }
    }
    if (remaining != 0) throw std::logic_error("assignment refinement incomplete");
    return pairs;
}

double pairs_total(const CostMatrix& cost, const std::vector<std::pair<int, int>>& pairs) {
    double total = 0.0;
    for (const auto& [r, c] : pairs) total += cost(r, c);
    return total;
}

Assignment solve_lexmin(const CostMatrix& cost) {
    const SolveResult base = solve_complete(cost);
    if (!base.feasible) throw InfeasibleError("no feasible complete assignment");
    Assignment a;
    a.pairs = lexmin_pairs(cost, base.total);
    a.total_cost = pairs_total(cost, a.pairs);
    return a;
}

}  // namespace

bool lex_less(const std::vector<std::pair<int, int>>& a, const std::vector<std::pair<int, int>>& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

Assignment hungarian(const CostMatrix& cost) {
    if (cost.rows() < 1 || cost.cols() < 1)
        throw std::invalid_argument("hungarian: matrix must be at least 1x1");
    return solve_lexmin(cost);
}

Assignment hungarian_fast(const CostMatrix& cost) {
    if (cost.rows() < 1 || cost.cols() < 1)
        throw std::invalid_argument("hungarian_fast: matrix must be at least 1x1");
    const SolveResult base = solve_complete(cost);
    if (!base.feasible) throw InfeasibleError("no feasible complete assignment");
    Assignment a;
    a.pairs = base.pairs;
    a.total_cost = base.total;
    return a;
}

std::vector<Assignment> murty_mbest(const CostMatrix& cost, int m) {
    if (m < 1) throw std::invalid_argument("murty_mbest: m must be >= 1");

    struct Sub {
        CostMatrix cost;
        std::vector<std::pair<int, int>> forced;
        Assignment best;
    };
    auto later = [](const Sub& a, const Sub& b) {
        if (a.best.total_cost != b.best.total_cost) return a.best.total_cost > b.best.total_cost;
        return lex_less(b.best.pairs, a.best.pairs);
    };
    std::priority_queue<Sub, std::vector<Sub>, decltype(later)> queue(later);

    queue.push(Sub{cost, {}, hungarian(cost)});  // throws InfeasibleError upfront

    std::vector<Assignment> out;
    while (!queue.empty() && static_cast<int>(out.size()) < m) {
        Sub sub = queue.top();
        queue.pop();
        out.push_back(sub.best);
        if (static_cast<int>(out.size()) == m) break;

        // Partition the remaining solution space on the free pairs of the
        // popped solution: child t forbids pair t and keeps pairs < t forced.
        std::vector<std::pair<int, int>> free_pairs;
        for (const auto& p : sub.best.pairs)
            if (std::find(sub.forced.begin(), sub.forced.end(), p) == sub.forced.end())
                free_pairs.push_back(p);

        CostMatrix w = sub.cost;
        std::vector<std::pair<int, int>> forced = sub.forced;
        for (const auto& p : free_pairs) {
            CostMatrix child = w;
            child(p.first, p.second) = kInf;
            const SolveResult sr = solve_complete(child);
            if (sr.feasible) {
                Sub c;
                c.best.pairs = lexmin_pairs(child, sr.total);
                c.best.total_cost = pairs_total(child, c.best.pairs);
                c.cost = std::move(child);
                c.forced = forced;
                queue.push(std::move(c));
            }
            force_pair(w, p.first, p.second);
            forced.push_back(p);
        }
    }
    return out;
}

}  // namespace mot
