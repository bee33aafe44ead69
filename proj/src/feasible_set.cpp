#include "sparsetree/feasible_set.hpp"

#include <algorithm>
#include <cmath>

#include "sparsetree/errors.hpp"

namespace sparsetree {

HalfspaceSet::HalfspaceSet(Eigen::MatrixXd rows, Eigen::VectorXd rhs, std::string label)
    : a_(std::move(rows)), b_(std::move(rhs)), label_(std::move(label)) {
  if (a_.cols() < 1) fail(ErrorCode::kInvalidArgument, "half-space set needs dim >= 1");
  if (a_.rows() != b_.size()) fail(ErrorCode::kDimensionMismatch, "row count differs from rhs length");
  if (!a_.allFinite() || !b_.allFinite()) fail(ErrorCode::kInvalidArgument, "non-finite half-space entry");
  for (Eigen::Index i = 0; i < a_.rows(); ++i) {
    if ((a_.row(i).array() == 0.0).all()) {
      fail(ErrorCode::kInvalidArgument, "half-space row " + std::to_string(i) + " is all zeros");
    }
  }
}

double HalfspaceSet::violation(std::span<const double> x) const {
  if (x.size() != dim()) fail(ErrorCode::kDimensionMismatch, "point length differs from set dimension");
  if (a_.rows() == 0) return 0.0;
  const Eigen::Map<const Eigen::VectorXd> xv(x.data(), static_cast<Eigen::Index>(x.size()));
  return std::max(0.0, (a_ * xv - b_).maxCoeff());
}

bool HalfspaceSet::contains(std::span<const double> x, double tol) const { return violation(x) <= tol; }

lp::LpProblem make_problem(const HalfspaceSet& set, std::span<const double> objective,
                           std::span<const Coord> zeros) {
  if (objective.size() != set.dim()) fail(ErrorCode::kDimensionMismatch, "objective length differs from set dimension");
  lp::LpProblem pb;
  const auto n = static_cast<Eigen::Index>(set.dim());
  pb.objective = Eigen::Map<const Eigen::VectorXd>(objective.data(), n);
  pb.ineq_matrix = set.matrix();
  pb.ineq_rhs = set.rhs();
  pb.eq_matrix = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(zeros.size()), n);
  pb.eq_rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(zeros.size()));
  for (std::size_t i = 0; i < zeros.size(); ++i) {
    if (zeros[i] >= set.dim()) fail(ErrorCode::kDimensionMismatch, "vanished coordinate out of range");
    pb.eq_matrix(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(zeros[i])) = 1.0;
  }
  return pb;
}

VertexSample sample_vertex(const HalfspaceSet& set, std::span<const double> objective) {
  const lp::LpOutcome res = lp::solve(make_problem(set, objective));
  VertexSample out;
  switch (res.status) {
    case lp::LpStatus::kOptimal:
      out.status = SampleStatus::kVertex;
      out.point.assign(res.solution->data(), res.solution->data() + res.solution->size());
      break;
    case lp::LpStatus::kInfeasible: out.status = SampleStatus::kInfeasible; break;
    case lp::LpStatus::kUnbounded: out.status = SampleStatus::kUnbounded; break;
  }
  return out;
}

Vector random_objective(std::size_t dim, Rng& rng) {
  Vector c(dim);
  for (double& v : c) v = rng.uniform(-1.0, 1.0);
  return c;
}

Vector sample_random_vertex(const HalfspaceSet& set, Rng& rng) {
  constexpr int kMaxUnbounded = 100;
  for (int attempt = 0; attempt < kMaxUnbounded; ++attempt) {
    const Vector c = random_objective(set.dim(), rng);
    VertexSample s = sample_vertex(set, c);
    if (s.status == SampleStatus::kVertex) return std::move(s.point);
    if (s.status == SampleStatus::kInfeasible) fail(ErrorCode::kInfeasibleSet, "feasible set is empty");
  }
  fail(ErrorCode::kUnbounded, "100 consecutive random objectives were unbounded");
}

std::optional<Vector> sample_targeted(const HalfspaceSet& set, std::span<const Coord> vanished, Coord target,
                                      Sign sign) {
  if (target >= set.dim()) fail(ErrorCode::kDimensionMismatch, "target coordinate out of range");
  if (std::find(vanished.begin(), vanished.end(), target) != vanished.end()) {
    fail(ErrorCode::kVanishedCoordinate, "target coordinate is already vanished");
  }
  Vector c(set.dim(), 0.0);
  // Minimizing -x_target pushes it positive, +x_target pushes it negative.
  c[target] = sign == Sign::kPositive ? -1.0 : 1.0;
  const lp::LpOutcome res = lp::solve(make_problem(set, c, vanished));
  Vector x;
  if (res.status == lp::LpStatus::kOptimal) {
    x.assign(res.solution->data(), res.solution->data() + res.solution->size());
  } else if (res.status == lp::LpStatus::kUnbounded) {
    // The ray is unbounded in the wanted direction; any feasible point with the
    // right sign will do, so re-solve with the target pinned at +-1.
    lp::LpProblem pb = make_problem(set, Vector(set.dim(), 0.0), vanished);
    const Eigen::Index rows = pb.eq_matrix.rows();
    pb.eq_matrix.conservativeResize(rows + 1, Eigen::NoChange);
    pb.eq_matrix.row(rows).setZero();
    pb.eq_matrix(rows, static_cast<Eigen::Index>(target)) = 1.0;
    pb.eq_rhs.conservativeResize(rows + 1);
    pb.eq_rhs[rows] = sign == Sign::kPositive ? 1.0 : -1.0;
    const lp::LpOutcome pinned = lp::solve(pb);
    if (!pinned.optimal()) return std::nullopt;
    x.assign(pinned.solution->data(), pinned.solution->data() + pinned.solution->size());
  } else {
    return std::nullopt;
  }
  for (Coord k : vanished) x[k] = 0.0;
  const double v = x[target];
  const bool ok = sign == Sign::kPositive ? v > kZeroTol : v < -kZeroTol;
  if (!ok) return std::nullopt;
  return x;
}

}  // namespace sparsetree
