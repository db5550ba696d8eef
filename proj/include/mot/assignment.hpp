#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <utility>
#include <vector>

namespace mot {

/// Cost matrix for assignment problems. +infinity marks a forbidden pair.
using CostMatrix = Eigen::MatrixXd;

class InfeasibleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// One-to-one pairing; each row and each column used at most once.
struct Assignment {
    std::vector<std::pair<int, int>> pairs;  // sorted by (row, col)
    double total_cost = 0.0;
};

/// True if a's pair sequence precedes b's lexicographically.
bool lex_less(const std::vector<std::pair<int, int>>& a, const std::vector<std::pair<int, int>>& b);

/// Minimum-cost complete assignment of size min(rows, cols).
/// Among equal-cost optima, returns the lexicographically smallest
/// (row, col) pair sequence. Throws InfeasibleError when no complete
/// assignment avoids forbidden pairs.
Assignment hungarian(const CostMatrix& cost);

/// The m lowest-cost complete assignments, sorted by (cost, pair sequence),
/// all pairwise distinct; fewer are returned when fewer exist.
std::vector<Assignment> murty_mbest(const CostMatrix& cost, int m);

/// Same optimum as hungarian() but without the lexicographic tie
/// refinement. Deterministic for identical inputs; intended for large
/// matrices where equal-cost ties carry no meaning.
Assignment hungarian_fast(const CostMatrix& cost);

}  // namespace mot
