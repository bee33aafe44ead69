#pragma once

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

namespace sparsetree::lp {

inline constexpr double kFeasTol = 1e-8;
inline constexpr double kPivotTol = 1e-10;
inline constexpr double kObjTol = 1e-7;

// minimize objective' x  s.t.  ineq_matrix x <= ineq_rhs,  eq_matrix x = eq_rhs.
// Variables are free unless flagged in `nonnegative` (empty means all free).
struct LpProblem {
  Eigen::VectorXd objective;
  Eigen::MatrixXd ineq_matrix;
  Eigen::VectorXd ineq_rhs;
  Eigen::MatrixXd eq_matrix;
  Eigen::VectorXd eq_rhs;
  std::vector<bool> nonnegative;

  Eigen::Index num_vars() const { return objective.size(); }
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

struct LpOutcome {
  LpStatus status = LpStatus::kInfeasible;
  std::optional<Eigen::VectorXd> solution;
  std::optional<double> objective_value;
  int iterations = 0;

  bool optimal() const { return status == LpStatus::kOptimal; }
};

struct SolverOptions {
  // When non-empty, every pivot is appended to this text file.
  std::string debug_dump_path;
};

// Two-phase dense tableau simplex. Free variables are split into positive and
// negative parts, so an Optimal answer is always a basic feasible solution.
// Dantzig pricing; Bland's rule takes over after 2(m+p) consecutive degenerate
// pivots. Throws Error(kMaxIterationsExceeded) past 50(n+m+p) pivots and
// Error(kDimensionMismatch | kInvalidArgument) on malformed input.
LpOutcome solve(const LpProblem& problem, const SolverOptions& options = {});

// Largest violation max(A x - b, |E x - f|) (0 when feasible).
double max_violation(const LpProblem& problem, const Eigen::VectorXd& x);

}  // namespace sparsetree::lp
