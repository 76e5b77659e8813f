// assignment.hpp: minimum-cost bipartite assignment.
#pragma once

#include <vector>

namespace obbtrack {

/// Sentinel for forbidden pairs. Large enough to dominate any feasible
/// assignment, small enough that the solver's dual arithmetic keeps
/// sub-1e-9 precision on the real costs.
inline constexpr double kUnmatchableCost = 1e5;

/// Solve min-cost assignment on a rows x cols matrix (shortest augmenting
/// paths with dual potentials, O(n^2 m)). Exactly min(rows, cols) pairs are
/// assigned; the returned vector maps each row to its column or -1. Costs
/// must be finite; mark forbidden pairs with kUnmatchableCost and filter
/// the result.
std::vector<int> solve_min_cost_assignment(const std::vector<std::vector<double>>& cost);

}  // namespace obbtrack
