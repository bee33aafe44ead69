#pragma once

#include <span>
#include <vector>

#include "sparsetree/feasible_set.hpp"
#include "sparsetree/polytope.hpp"

namespace sparsetree {

inline constexpr std::size_t kOracleMaxDim = 12;
inline constexpr std::size_t kOracleMaxHullVertices = 200;

struct OracleResult {
  std::size_t max_vanish = 0;
  std::vector<Coord> witness;  // coordinates that vanish together
  std::size_t lp_solves = 0;
};

// Largest set of coordinates that can be zero simultaneously at some point of
// S, by enumerating zero patterns from largest to smallest with an LP
// feasibility check each. Throws Error(kSizeLimitExceeded) for N > 12.
OracleResult brute_force_over_set(const HalfspaceSet& set);

// Same, restricted to conv(P): a pattern is feasible when convex weights
// lambda >= 0, sum lambda = 1 exist whose combination is zero off-support.
// Throws Error(kSizeLimitExceeded) for N > 12 or |P| > 200.
OracleResult brute_force_over_hull(const Polytope& p);

// L1 distance from x to conv(vertices); zero (to LP accuracy) iff x is in the hull.
double hull_distance(const Polytope& vertices, std::span<const double> x);
bool in_convex_hull(const Polytope& vertices, std::span<const double> x, double tol);

}  // namespace sparsetree
