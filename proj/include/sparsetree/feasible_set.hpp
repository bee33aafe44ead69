#pragma once

#include <Eigen/Dense>

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sparsetree/lp_solver.hpp"
#include "sparsetree/random.hpp"
#include "sparsetree/types.hpp"

namespace sparsetree {

// Convex feasible set S = {x in R^N : A x <= b} in half-space form.
// Immutable after construction.
class HalfspaceSet {
 public:
  HalfspaceSet(Eigen::MatrixXd rows, Eigen::VectorXd rhs, std::string label = {});

  std::size_t dim() const { return static_cast<std::size_t>(a_.cols()); }
  std::size_t num_rows() const { return static_cast<std::size_t>(a_.rows()); }
  const Eigen::MatrixXd& matrix() const { return a_; }
  const Eigen::VectorXd& rhs() const { return b_; }
  const std::string& label() const { return label_; }

  // max_i (a_i x - b_i), clamped at zero.
  double violation(std::span<const double> x) const;
  bool contains(std::span<const double> x, double tol) const;

 private:
  Eigen::MatrixXd a_;
  Eigen::VectorXd b_;
  std::string label_;
};

enum class SampleStatus { kVertex, kInfeasible, kUnbounded };

struct VertexSample {
  SampleStatus status = SampleStatus::kInfeasible;
  Vector point;  // set iff status == kVertex
};

// Basic feasible solution of min objective' x over S.
VertexSample sample_vertex(const HalfspaceSet& set, std::span<const double> objective);

// Objective with i.i.d. coefficients uniform on [-1, 1].
Vector random_objective(std::size_t dim, Rng& rng);

// Draws random objectives until a bounded one yields a vertex. Throws
// Error(kUnbounded) after 100 consecutive unbounded draws and
// Error(kInfeasibleSet) when S is empty.
Vector sample_random_vertex(const HalfspaceSet& set, Rng& rng);

// The LP min +-x_target over S with x_k = 0 for k in `vanished`. Returns the
// optimum (vanished entries stamped to exact 0.0) when it exists and carries
// the requested sign with magnitude above kZeroTol; otherwise nullopt.
std::optional<Vector> sample_targeted(const HalfspaceSet& set, std::span<const Coord> vanished, Coord target,
                                      Sign sign);

// LP over S with additional equalities x_k = 0 for k in `zeros`.
lp::LpProblem make_problem(const HalfspaceSet& set, std::span<const double> objective,
                           std::span<const Coord> zeros = {});

}  // namespace sparsetree
