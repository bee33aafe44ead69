#include "doctest.h"

#include <cstdio>
#include <fstream>

#include "sparsetree/errors.hpp"
#include "support.hpp"

using namespace sparsetree;
using namespace sparsetree::lp;

namespace {

LpProblem make(std::initializer_list<double> c, std::initializer_list<std::initializer_list<double>> a,
               std::initializer_list<double> b) {
  LpProblem pb;
  pb.objective = Eigen::Map<const Eigen::VectorXd>(std::data(c), static_cast<Eigen::Index>(c.size()));
  pb.ineq_matrix.resize(static_cast<Eigen::Index>(a.size()), pb.objective.size());
  Eigen::Index i = 0;
  for (const auto& row : a) {
    Eigen::Index k = 0;
    for (double v : row) pb.ineq_matrix(i, k++) = v;
    ++i;
  }
  pb.ineq_rhs = Eigen::Map<const Eigen::VectorXd>(std::data(b), static_cast<Eigen::Index>(b.size()));
  return pb;
}

}  // namespace

TEST_CASE("1-D box minimum at the lower bound") {
  const LpOutcome r = solve(make({1}, {{1}, {-1}}, {1, 0}));
  REQUIRE(r.status == LpStatus::kOptimal);
  CHECK((*r.solution)[0] == doctest::Approx(0.0));
  CHECK(*r.objective_value == doctest::Approx(0.0));
}

TEST_CASE("unit-box corner") {
  const LpOutcome r = solve(make({-1, -1}, {{1, 0}, {0, 1}, {-1, 0}, {0, -1}}, {1, 1, 0, 0}));
  REQUIRE(r.optimal());
  CHECK((*r.solution)[0] == doctest::Approx(1.0));
  CHECK((*r.solution)[1] == doctest::Approx(1.0));
  CHECK(*r.objective_value == doctest::Approx(-2.0));
}

TEST_CASE("unbounded ray") {
  CHECK(solve(make({-1}, {{-1}}, {0})).status == LpStatus::kUnbounded);
}

TEST_CASE("contradictory bounds are infeasible") {
  const LpOutcome r = solve(make({0}, {{1}, {-1}}, {-1, -1}));
  CHECK(r.status == LpStatus::kInfeasible);
  CHECK_FALSE(r.solution.has_value());
  CHECK_FALSE(r.objective_value.has_value());
}

TEST_CASE("equality rows and nonnegative variables") {
  // min x + 2y  s.t.  x + y = 1, x, y >= 0  ->  (1, 0)
  LpProblem pb;
  pb.objective = Eigen::Vector2d(1, 2);
  pb.ineq_matrix.resize(0, 2);
  pb.ineq_rhs.resize(0);
  pb.eq_matrix = Eigen::RowVector2d(1, 1);
  pb.eq_rhs = Eigen::VectorXd::Constant(1, 1.0);
  pb.nonnegative = {true, true};
  const LpOutcome r = solve(pb);
  REQUIRE(r.optimal());
  CHECK((*r.solution)[0] == doctest::Approx(1.0));
  CHECK((*r.solution)[1] == doctest::Approx(0.0));
  CHECK(max_violation(pb, *r.solution) <= kFeasTol);

  SUBCASE("redundant equality rows") {
    pb.eq_matrix = (Eigen::MatrixXd(2, 2) << 1, 1, 2, 2).finished();
    pb.eq_rhs = Eigen::Vector2d(1, 2);
    const LpOutcome r2 = solve(pb);
    REQUIRE(r2.optimal());
    CHECK(*r2.objective_value == doctest::Approx(1.0));
  }
}

TEST_CASE("malformed problems are rejected") {
  LpProblem pb = make({1, 1}, {{1, 0}}, {1});
  pb.ineq_rhs.resize(2);
  pb.ineq_rhs << 1, 2;
  CHECK_THROWS_AS(solve(pb), Error);
  try {
    solve(pb);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kDimensionMismatch);
  }
  LpProblem nan = make({1}, {{1}}, {1});
  nan.ineq_rhs[0] = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(solve(nan), Error);
}

TEST_CASE("degenerate problem terminates") {
  // Many constraints through the optimum (0, 0): classic cycling bait.
  LpProblem pb = make({-1, -1}, {{1, 1}, {1, 2}, {2, 1}, {1, 3}, {3, 1}, {-1, 0}, {0, -1}}, {0, 0, 0, 0, 0, 0, 0});
  const LpOutcome r = solve(pb);
  REQUIRE(r.optimal());
  CHECK(*r.objective_value == doctest::Approx(0.0));
}

TEST_CASE("random bounded problems agree with vertex enumeration") {
  Rng rng(2024);
  std::normal_distribution<double> gauss;
  int infeasible_seen = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(trial % 4);  // 2..5
    const std::size_t m = 6 + static_cast<std::size_t>(trial % 7);
    LpProblem pb;
    const auto ni = static_cast<Eigen::Index>(n);
    pb.objective.resize(ni);
    for (Eigen::Index k = 0; k < ni; ++k) pb.objective[k] = rng.uniform(-1.0, 1.0);
    // Random rows plus a box |x_k| <= 3 keep everything bounded.
    pb.ineq_matrix = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m + 2 * n), ni);
    pb.ineq_rhs.resize(static_cast<Eigen::Index>(m + 2 * n));
    for (std::size_t i = 0; i < m; ++i) {
      for (Eigen::Index k = 0; k < ni; ++k) pb.ineq_matrix(static_cast<Eigen::Index>(i), k) = gauss(rng.engine());
      pb.ineq_rhs[static_cast<Eigen::Index>(i)] = rng.uniform(trial % 5 == 0 ? -2.0 : -0.2, 1.0);
    }
    for (std::size_t k = 0; k < n; ++k) {
      pb.ineq_matrix(static_cast<Eigen::Index>(m + 2 * k), static_cast<Eigen::Index>(k)) = 1.0;
      pb.ineq_matrix(static_cast<Eigen::Index>(m + 2 * k + 1), static_cast<Eigen::Index>(k)) = -1.0;
      pb.ineq_rhs[static_cast<Eigen::Index>(m + 2 * k)] = 3.0;
      pb.ineq_rhs[static_cast<Eigen::Index>(m + 2 * k + 1)] = 3.0;
    }
    const testsupport::BruteLp ref = testsupport::brute_force_lp(pb);
    const LpOutcome r = solve(pb);
    CAPTURE(trial);
    if (!ref.value) {
      ++infeasible_seen;
      CHECK(r.status == LpStatus::kInfeasible);
      continue;
    }
    REQUIRE(r.optimal());
    CHECK(*r.objective_value == doctest::Approx(*ref.value).epsilon(1e-7));
    CHECK(max_violation(pb, *r.solution) <= kFeasTol);
    // Basic solution: at least n active rows.
    const Eigen::VectorXd slack = pb.ineq_rhs - pb.ineq_matrix * *r.solution;
    CHECK((slack.array().abs() < 1e-7).count() >= static_cast<Eigen::Index>(n));
  }
  CHECK(infeasible_seen > 0);
}

TEST_CASE("identical problems give identical outcomes") {
  Rng rng(5);
  const HalfspaceSet set = testsupport::random_bounded_set(5, 14, rng);
  LpProblem pb;
  pb.objective = Eigen::VectorXd::LinSpaced(5, -1.0, 1.0);
  pb.ineq_matrix = set.matrix();
  pb.ineq_rhs = set.rhs();
  const LpOutcome a = solve(pb);
  const LpOutcome b = solve(pb);
  REQUIRE(a.optimal());
  CHECK(a.iterations == b.iterations);
  CHECK(*a.solution == *b.solution);
}

TEST_CASE("debug dump writes pivots") {
  const std::string path = "lp_debug_dump.txt";
  std::remove(path.c_str());
  SolverOptions opt;
  opt.debug_dump_path = path;
  const LpOutcome r = solve(make({-1, -1}, {{1, 0}, {0, 1}, {-1, 0}, {0, -1}}, {1, 1, 0, 0}), opt);
  REQUIRE(r.optimal());
  std::ifstream f(path);
  REQUIRE(f.good());
  std::string line;
  int lines = 0;
  while (std::getline(f, line)) ++lines;
  CHECK(lines >= r.iterations);
  std::remove(path.c_str());
}
