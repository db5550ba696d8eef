#include "mot/gla.hpp"

#include <cmath>
#include <limits>

namespace mot {

Assignment gla_solve(const Eigen::MatrixXd& similarity) {
    const int rows = static_cast<int>(similarity.rows());
    const int cols = static_cast<int>(similarity.cols());
    Assignment out;
    if (rows == 0 || cols == 0) return out;

    // Reduce to a complete min-cost assignment on an (R+C) square: each row
    // and each column gets a zero-cost slack, so staying unassigned is always
    // available and non-positive similarities are forbidden outright.
    const double inf = std::numeric_limits<double>::infinity();
    const int n = rows + cols;
    CostMatrix cost = CostMatrix::Constant(n, n, inf);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c)
            if (similarity(r, c) > 0.0) cost(r, c) = -similarity(r, c);
    for (int r = 0; r < rows; ++r) cost(r, cols + r) = 0.0;
    for (int c = 0; c < cols; ++c) cost(rows + c, c) = 0.0;
    cost.block(rows, cols, cols, rows).setZero();

    const Assignment full = hungarian_fast(cost);
    for (const auto& [r, c] : full.pairs) {
        if (r < rows && c < cols) {
            out.pairs.emplace_back(r, c);
            out.total_cost += similarity(r, c);
        }
    }
    return out;
}

}  // namespace mot
