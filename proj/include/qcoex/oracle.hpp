#pragma once

#include <vector>

#include "qcoex/operation.hpp"

namespace qcoex {
namespace oracle {

/// Pair of operations with simultaneously diagonal Choi operators in the
/// fixed product basis; p, q hold the diagonals, index (j,k) -> j*d + k.
struct DiagonalInstance {
  std::size_t d = 0;
  std::vector<double> p;
  std::vector<double> q;
};

void validate(const DiagonalInstance& inst);

/// Exact coexistence test for commuting (diagonal) effects: for every i the
/// interval [max(0, a_i + b_i - 1), min(a_i, b_i)] must be nonempty.
bool diagonal_effects_oracle(const std::vector<double>& a, const std::vector<double>& b);

/// Exact coexistence test for diagonal operation pairs:
/// d * sum_j max(p,q)_(j,k) <= 1 for every second-factor index k.
/// Obtained by taking the entrywise-maximal feasible x = min(p, q).
bool diagonal_operations_oracle(const DiagonalInstance& inst);

/// Exhaustive grid search for a joint effect G of two qubit effects.
/// A `true` is reliable (a near-feasible G was found, slack = grid spacing);
/// a `false` is corroborating evidence only.
bool grid_search_effects(const Effect& a, const Effect& b, std::size_t steps);

}  // namespace oracle
}  // namespace qcoex
