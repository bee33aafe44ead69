#include "sparsetree/oracle.hpp"

#include <algorithm>

#include "sparsetree/errors.hpp"

namespace sparsetree {
namespace {

// Calls fn(subset) for every size-k subset of [0, n) in lexicographic order
// until fn returns true.
template <typename Fn>
bool for_each_subset(std::size_t n, std::size_t k, Fn&& fn) {
  std::vector<Coord> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    if (fn(idx)) return true;
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) return false;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

lp::LpProblem hull_problem(const Polytope& p, std::span<const Coord> zeros) {
  const auto v = static_cast<Eigen::Index>(p.size());
  const auto z = static_cast<Eigen::Index>(zeros.size());
  lp::LpProblem pb;
  pb.objective = Eigen::VectorXd::Zero(v);
  pb.eq_matrix = Eigen::MatrixXd::Zero(z + 1, v);
  pb.eq_rhs = Eigen::VectorXd::Zero(z + 1);
  for (Eigen::Index i = 0; i < v; ++i) {
    const auto x = p.vertex(static_cast<std::size_t>(i));
    for (Eigen::Index r = 0; r < z; ++r) pb.eq_matrix(r, i) = x[zeros[static_cast<std::size_t>(r)]];
    pb.eq_matrix(z, i) = 1.0;
  }
  pb.eq_rhs[z] = 1.0;
  pb.nonnegative.assign(static_cast<std::size_t>(v), true);
  return pb;
}

template <typename Feasible>
OracleResult search_patterns(std::size_t dim, Feasible&& feasible) {
  OracleResult out;
  for (std::size_t k = dim + 1; k-- > 0;) {
    const bool found = for_each_subset(dim, k, [&](const std::vector<Coord>& zeros) {
      ++out.lp_solves;
      if (!feasible(zeros)) return false;
      out.max_vanish = k;
      out.witness = zeros;
      return true;
    });
    if (found) return out;
  }
  return out;  // S empty: nothing is feasible
}

}  // namespace

OracleResult brute_force_over_set(const HalfspaceSet& set) {
  if (set.dim() > kOracleMaxDim) {
    fail(ErrorCode::kSizeLimitExceeded, "brute force over S supports N <= " + std::to_string(kOracleMaxDim));
  }
  const Vector zero_obj(set.dim(), 0.0);
  return search_patterns(set.dim(), [&](const std::vector<Coord>& zeros) {
    return lp::solve(make_problem(set, zero_obj, zeros)).optimal();
  });
}

OracleResult brute_force_over_hull(const Polytope& p) {
  if (p.dim() > kOracleMaxDim || p.size() > kOracleMaxHullVertices) {
    fail(ErrorCode::kSizeLimitExceeded, "brute force over conv(P) supports N <= 12 and |P| <= 200");
  }
  return search_patterns(p.dim(), [&](const std::vector<Coord>& zeros) {
    return lp::solve(hull_problem(p, zeros)).optimal();
  });
}

double hull_distance(const Polytope& vertices, std::span<const double> x) {
  if (x.size() != vertices.dim()) fail(ErrorCode::kDimensionMismatch, "point length differs from polytope dimension");
  const auto v = static_cast<Eigen::Index>(vertices.size());
  const auto n = static_cast<Eigen::Index>(vertices.dim());
  // Variables [lambda (v), e+ (n), e- (n)], all nonnegative:
  // minimize sum(e+ + e-) s.t. V' lambda + e+ - e- = x, sum lambda = 1.
  lp::LpProblem pb;
  pb.objective = Eigen::VectorXd::Zero(v + 2 * n);
  pb.objective.tail(2 * n).setOnes();
  pb.eq_matrix = Eigen::MatrixXd::Zero(n + 1, v + 2 * n);
  pb.eq_rhs = Eigen::VectorXd::Zero(n + 1);
  for (Eigen::Index i = 0; i < v; ++i) {
    const auto xi = vertices.vertex(static_cast<std::size_t>(i));
    for (Eigen::Index k = 0; k < n; ++k) pb.eq_matrix(k, i) = xi[static_cast<std::size_t>(k)];
    pb.eq_matrix(n, i) = 1.0;
  }
  for (Eigen::Index k = 0; k < n; ++k) {
    pb.eq_matrix(k, v + k) = 1.0;
    pb.eq_matrix(k, v + n + k) = -1.0;
    pb.eq_rhs[k] = x[static_cast<std::size_t>(k)];
  }
  pb.eq_rhs[n] = 1.0;
  pb.nonnegative.assign(static_cast<std::size_t>(v + 2 * n), true);
  const lp::LpOutcome res = lp::solve(pb);
  if (!res.optimal()) fail(ErrorCode::kInvalidArgument, "hull distance LP did not solve");
  return std::max(0.0, *res.objective_value);
}

bool in_convex_hull(const Polytope& vertices, std::span<const double> x, double tol) {
  return hull_distance(vertices, x) <= tol;
}

}  // namespace sparsetree
