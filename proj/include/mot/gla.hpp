#pragma once

#include "mot/assignment.hpp"

namespace mot {

/// Generalized linear assignment: a partial one-to-one matching maximizing
/// total similarity. Rows and columns may stay unassigned; pairs with
/// similarity <= 0 are never assigned. The returned total_cost holds the
/// maximized total similarity.
Assignment gla_solve(const Eigen::MatrixXd& similarity);

}  // namespace mot
