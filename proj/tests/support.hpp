#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <optional>
#include <vector>

#include "sparsetree/feasible_set.hpp"
#include "sparsetree/lp_solver.hpp"
#include "sparsetree/polytope.hpp"
#include "sparsetree/random.hpp"

namespace testsupport {

using namespace sparsetree;

inline HalfspaceSet unit_box(std::size_t n, double lo = -1.0, double hi = 1.0) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(2 * n), static_cast<Eigen::Index>(n));
  Eigen::VectorXd b(2 * n);
  for (std::size_t k = 0; k < n; ++k) {
    a(static_cast<Eigen::Index>(2 * k), static_cast<Eigen::Index>(k)) = 1.0;
    b[static_cast<Eigen::Index>(2 * k)] = hi;
    a(static_cast<Eigen::Index>(2 * k + 1), static_cast<Eigen::Index>(k)) = -1.0;
    b[static_cast<Eigen::Index>(2 * k + 1)] = -lo;
  }
  return HalfspaceSet(std::move(a), std::move(b), "box");
}

inline HalfspaceSet triangle() {
  Eigen::MatrixXd a(3, 2);
  a << 0, 1, 2, -1, -2, -1;
  Eigen::VectorXd b(3);
  b << 1, 1, 1;
  return HalfspaceSet(std::move(a), std::move(b), "triangle");
}

// Random normals around a random centre c, b = a c + U(0.2, 1), so c is
// strictly interior. Sets that are unbounded in some coordinate direction are
// redrawn.
inline HalfspaceSet random_bounded_set(std::size_t n, std::size_t m, Rng& rng) {
  std::normal_distribution<double> gauss;
  while (true) {
    Eigen::MatrixXd a(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
    Eigen::VectorXd c(static_cast<Eigen::Index>(n));
    for (Eigen::Index k = 0; k < c.size(); ++k) c[k] = rng.uniform(-0.5, 0.5);
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      for (Eigen::Index k = 0; k < a.cols(); ++k) a(i, k) = gauss(rng.engine());
    }
    Eigen::VectorXd b = a * c;
    for (Eigen::Index i = 0; i < b.size(); ++i) b[i] += rng.uniform(0.2, 1.0);
    HalfspaceSet set(a, b, "random");
    bool bounded = true;
    for (std::size_t k = 0; k < n && bounded; ++k) {
      for (double s : {1.0, -1.0}) {
        Vector obj(n, 0.0);
        obj[k] = s;
        if (sample_vertex(set, obj).status != SampleStatus::kVertex) bounded = false;
      }
    }
    if (bounded) return set;
  }
}

inline Polytope random_polytope(std::size_t n, std::size_t count, Rng& rng, std::vector<Coord> vanished = {}) {
  Polytope p(n, vanished);
  while (p.size() < count) {
    Vector x(n);
    for (double& v : x) v = rng.uniform(-1.0, 1.0);
    for (Coord k : p.vanished()) x[k] = 0.0;
    p.add_unique(x);
  }
  return p;
}

// Exhaustive LP reference: minimum of c'x over every vertex obtained by
// solving n of the inequality rows with equality. Valid for bounded problems
// without equality rows. nullopt when no vertex is feasible.
struct BruteLp {
  std::optional<double> value;
  Vector point;
};

inline BruteLp brute_force_lp(const lp::LpProblem& pb, double tol = 1e-7) {
  const auto n = pb.objective.size();
  const auto m = pb.ineq_matrix.rows();
  BruteLp best;
  std::vector<int> pick(static_cast<std::size_t>(m), 0);
  std::fill(pick.begin(), pick.begin() + n, 1);
  std::sort(pick.begin(), pick.end(), std::greater<>());
  do {
    Eigen::MatrixXd sub(n, n);
    Eigen::VectorXd rhs(n);
    Eigen::Index r = 0;
    for (Eigen::Index i = 0; i < m; ++i) {
      if (!pick[static_cast<std::size_t>(i)]) continue;
      sub.row(r) = pb.ineq_matrix.row(i);
      rhs[r++] = pb.ineq_rhs[i];
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(sub);
    if (lu.rank() < n) continue;
    const Eigen::VectorXd x = lu.solve(rhs);
    if (((pb.ineq_matrix * x - pb.ineq_rhs).array() > tol).any()) continue;
    const double v = pb.objective.dot(x);
    if (!best.value || v < *best.value) {
      best.value = v;
      best.point.assign(x.data(), x.data() + x.size());
    }
  } while (std::prev_permutation(pick.begin(), pick.end()));
  return best;
}

}  // namespace testsupport
