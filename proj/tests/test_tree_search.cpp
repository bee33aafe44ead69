#include "doctest.h"

#include <set>

#include "sparsetree/errors.hpp"
#include "sparsetree/json_io.hpp"
#include "sparsetree/oracle.hpp"
#include "sparsetree/tree_search.hpp"
#include "support.hpp"

using namespace sparsetree;
using testsupport::triangle;
using testsupport::unit_box;

namespace {

SearchConfig small_config(std::size_t m, std::size_t cap, std::uint64_t seed) {
  SearchConfig c;
  c.root_vertices = m;
  c.cap_pos = cap;
  c.cap_neg = cap;
  c.seed = seed;
  return c;
}

}  // namespace

TEST_CASE("triangle walk") {
  const SearchTrace t = run_depth_first(triangle(), small_config(3, 3, 1));
  CHECK(t.walk.size() == 2);
  CHECK(t.final_polytope.generation() == 2);
  REQUIRE(t.final_polytope.size() == 1);
  CHECK(t.chosen_solution == Vector{0.0, 0.0});
  CHECK(t.per_generation.front().census.coordinate == t.walk.front());
}

TEST_CASE("strictly positive set is a leaf at the root") {
  const HalfspaceSet box = unit_box(3, 1.0, 2.0);
  const SearchTrace t = run_depth_first(box, small_config(8, 8, 3));
  CHECK(t.walk.empty());
  CHECK(t.final_polytope.size() == 8);
}

TEST_CASE("config validation") {
  SearchConfig c = small_config(1, 3, 1);
  CHECK_THROWS_AS(run_depth_first(triangle(), c), Error);
  c = small_config(3, 0, 1);
  CHECK_THROWS_AS(run_depth_first(triangle(), c), Error);
  c = small_config(3, 3, 1);
  c.max_generations = 3;
  CHECK_THROWS_AS(run_depth_first(triangle(), c), Error);
  c = small_config(3, 3, 1);
  c.protocol = Protocol::kBfs;
  CHECK_THROWS_AS(run_depth_first(triangle(), c), Error);
  c.bfs_width_cap = 0;
  CHECK_THROWS_AS(run_breadth_first(triangle(), c), Error);
  c = small_config(3, 3, 1);
  c.protocol = Protocol::kDfsFixedOrder;
  c.fixed_order = std::vector<Coord>{0, 0};
  CHECK_THROWS_AS(run_depth_first(triangle(), c), Error);
}

TEST_CASE("max_generations stops early") {
  SearchConfig c = small_config(3, 3, 1);
  c.max_generations = 1;
  const SearchTrace t = run_depth_first(triangle(), c);
  CHECK(t.walk.size() == 1);
}

TEST_CASE("DFS determinism and invariants on random sets") {
  Rng gen(101);
  for (int trial = 0; trial < 6; ++trial) {
    const HalfspaceSet set = testsupport::random_bounded_set(6, 14, gen);
    const SearchConfig c = small_config(30, 30, 1000 + trial);
    const SearchTrace a = run_depth_first(set, c, [&](const Polytope&, const Polytope& child, const GenerationRecord& r) {
      CHECK(r.raw_count >= r.unique_count);
      for (std::size_t i = 0; i < child.size(); ++i) {
        CHECK(l0_norm(child.vertex(i)) <= 6 - child.generation());
        for (Coord k : child.vanished()) CHECK(child.vertex(i)[k] == 0.0);
        CHECK(set.contains(child.vertex(i), lp::kFeasTol * (1.0 + static_cast<double>(child.generation()))));
      }
    });
    const SearchTrace b = run_depth_first(set, c);
    CHECK(a.walk == b.walk);
    CHECK(a.chosen_solution == b.chosen_solution);
    CHECK(io::to_json(a).dump() == io::to_json(b).dump());
    CHECK(std::set<Coord>(a.walk.begin(), a.walk.end()).size() == a.walk.size());
    CHECK(unveil_children(a.final_polytope).empty());
    CHECK(a.walk.size() == a.final_polytope.generation());
    bool member = false;
    for (std::size_t i = 0; i < a.final_polytope.size() && !member; ++i) {
      member = a.final_polytope.vertex_copy(i) == a.chosen_solution;
    }
    CHECK(member);
  }
}

TEST_CASE("resume from a checkpoint replays the walk") {
  Rng gen(7);
  const HalfspaceSet set = testsupport::random_bounded_set(6, 14, gen);
  SearchConfig c = small_config(30, 30, 5);
  const SearchTrace full = run_depth_first(set, c);
  Rng sampling = Rng(5).substream("sampling");
  c.resume_from = init_root(set, 30, sampling);
  const SearchTrace resumed = run_depth_first(set, c);
  CHECK(full.walk == resumed.walk);
  CHECK(full.chosen_solution == resumed.chosen_solution);
}

TEST_CASE("min-residual pick") {
  SearchConfig c = small_config(3, 3, 1);
  c.solution_pick = SolutionPick::kMinResidual;
  const SearchTrace t = run_depth_first(triangle(), c);
  CHECK(t.chosen_solution == Vector{0.0, 0.0});
}

TEST_CASE("fixed order from the 1-norm relaxation") {
  // x_0 pinned to 5 by two opposing half-spaces, |x_1| <= 1.
  Eigen::MatrixXd a(4, 2);
  a << 1, 0, -1, 0, 0, 1, 0, -1;
  const HalfspaceSet pinned(a, Eigen::Vector4d(5, -5, 1, 1));
  const Vector x = l1_relaxation(pinned);
  CHECK(x[0] == doctest::Approx(5.0));
  CHECK(x[1] == doctest::Approx(0.0));
  CHECK(fixed_order_from_l1(pinned) == std::vector<Coord>{1, 0});

  CHECK(fixed_order_from_l1(unit_box(4)) == std::vector<Coord>{0, 1, 2, 3});

  Eigen::MatrixXd e(2, 1);
  e << 1, -1;
  const HalfspaceSet empty(e, Eigen::Vector2d(-1, -1));
  CHECK_THROWS_AS(fixed_order_from_l1(empty), Error);
}

TEST_CASE("fixed-order DFS skips coordinates that are not children") {
  SearchConfig c = small_config(3, 3, 1);
  c.protocol = Protocol::kDfsFixedOrder;
  c.fixed_order = std::vector<Coord>{0, 1};
  const SearchTrace t = run_depth_first(triangle(), c);
  // x_0 first: pairs (1,1)/(-1,1) -> (0,1); then x_1 has no negative vertex.
  CHECK(t.walk == std::vector<Coord>{0});
  c.fixed_order = std::vector<Coord>{1, 0};
  CHECK(run_depth_first(triangle(), c).walk == std::vector<Coord>{1, 0});
}

TEST_CASE("leaf restart extends a walk") {
  // Root {(1,1), (-1,1)} of the triangle: x_1 lacks a negative vertex.
  SearchConfig c = small_config(2, 3, 1);
  c.protocol = Protocol::kDfsFixedOrder;
  c.fixed_order = std::vector<Coord>{0, 1};
  c.resume_from = Polytope::from_vertices(2, {{1, 1}, {-1, 1}});
  const SearchTrace plain = run_depth_first(triangle(), c);
  CHECK(plain.walk == std::vector<Coord>{0});

  c.protocol = Protocol::kDfsRuntime;
  c.subtree_exploration = SubtreeExploration::kLeafRestart;
  const SearchTrace t = run_depth_first(triangle(), c);
  CHECK(t.walk.size() == 2);
  CHECK(t.restarts >= 1);
  CHECK(t.chosen_solution == Vector{0.0, 0.0});
}

TEST_CASE("merge_siblings") {
  const Polytope a = Polytope::from_vertices(2, {{0, 1}}, {0});
  const Polytope b = Polytope::from_vertices(2, {{0, -1}}, {0});
  CHECK(unveil_children(a).empty());
  CHECK(unveil_children(b).empty());
  const Polytope m = merge_siblings(a, b);
  CHECK(m.size() == 2);
  CHECK(unveil_children(m) == std::vector<Coord>{1});
  CHECK(merge_siblings(a, a).size() == 1);
  CHECK_THROWS_AS(merge_siblings(a, Polytope::from_vertices(2, {{1, 0}}, {1})), Error);

  SUBCASE("random same-pattern pairs") {
    Rng rng(3);
    for (int t = 0; t < 20; ++t) {
      const Polytope x = testsupport::random_polytope(5, 5 + rng.uniform_index(10), rng, {2});
      const Polytope y = testsupport::random_polytope(5, 5 + rng.uniform_index(10), rng, {2});
      const Polytope u = merge_siblings(x, y);
      CHECK(u.size() <= x.size() + y.size());
      std::set<Coord> want;
      for (Coord d : unveil_children(x)) want.insert(d);
      for (Coord d : unveil_children(y)) want.insert(d);
      const std::vector<Coord> got = unveil_children(u);
      for (Coord d : want) CHECK(std::find(got.begin(), got.end(), d) != got.end());
    }
  }

  SUBCASE("DFS merge mode uses a checkpoint") {
    SearchConfig c = small_config(2, 3, 1);
    c.protocol = Protocol::kDfsFixedOrder;
    c.fixed_order = std::vector<Coord>{0, 1};
    c.resume_from = a;
    c.subtree_exploration = SubtreeExploration::kLeafRestartPlusMerge;
    c.merge_candidates = {b};
    // x_0 = 0 and 0 <= x_1 <= 1: targeted resampling cannot produce x_1 < 0,
    // so only the merge candidate (taken on trust) unveils the child.
    const Eigen::MatrixXd rows = (Eigen::MatrixXd(4, 2) << 1, 0, -1, 0, 0, 1, 0, -1).finished();
    const HalfspaceSet strip(rows, (Eigen::Vector4d() << 0, 0, 1, 0).finished());
    const SearchTrace t = run_depth_first(strip, c);
    CHECK(t.restarts == 0);
    CHECK(t.merges == 1);
    CHECK(t.walk == std::vector<Coord>{1});
    CHECK(t.final_polytope.generation() == 2);
  }
}

TEST_CASE("BFS on the triangle") {
  SearchConfig c = small_config(3, 3, 1);
  c.protocol = Protocol::kBfs;
  const BreadthFirstResult r = run_breadth_first(triangle(), c);
  REQUIRE_FALSE(r.widths.empty());
  CHECK(r.widths.front().generation == 1);
  CHECK(r.widths.front().children == 2);
  CHECK(r.widths.front().bound == 2);
  // Vanishing x_0 first leaves {(0, 1)}, a leaf; vanishing x_1 first
  // continues to the origin.
  std::vector<std::size_t> lengths;
  for (const SearchTrace& leaf : r.leaves) lengths.push_back(leaf.walk.size());
  std::sort(lengths.begin(), lengths.end());
  CHECK(lengths == std::vector<std::size_t>{1, 2});
}

TEST_CASE("BFS width bound, caps and dominance over DFS") {
  Rng gen(55);
  for (int trial = 0; trial < 4; ++trial) {
    const HalfspaceSet set = testsupport::random_bounded_set(6, 14, gen);
    SearchConfig c = small_config(20, 20, 300 + trial);
    c.protocol = Protocol::kBfs;
    c.bfs_width_cap = 50;
    const BreadthFirstResult r = run_breadth_first(set, c);
    std::size_t prev = 1;
    for (const WidthRecord& w : r.widths) {
      CHECK(w.bound == prev * (6 - w.generation + 1));
      CHECK(w.children <= w.bound);
      CHECK(w.merged <= w.children);
      CHECK(w.kept <= 50);
      prev = w.kept;
    }
    std::size_t deepest = 0;
    for (const SearchTrace& leaf : r.leaves) deepest = std::max(deepest, leaf.walk.size());
    SearchConfig d = c;
    d.protocol = Protocol::kDfsRuntime;
    CHECK(deepest >= run_depth_first(set, d).walk.size());

    SearchConfig one = c;
    one.bfs_width_cap = 1;
    for (const WidthRecord& w : run_breadth_first(set, one).widths) CHECK(w.kept <= 1);
  }
}

TEST_CASE("greedy never beats the hull oracle") {
  Rng gen(909);
  for (int trial = 0; trial < 8; ++trial) {
    const HalfspaceSet set = testsupport::random_bounded_set(6, 14, gen);
    SearchConfig c = small_config(30, 30, trial + 1);
    Rng sampling = Rng(c.seed).substream("sampling");
    c.resume_from = init_root(set, 30, sampling);
    const OracleResult hull = brute_force_over_hull(*c.resume_from);
    const OracleResult over_s = brute_force_over_set(set);
    const SearchTrace t = run_depth_first(set, c);
    CHECK(t.walk.size() <= hull.max_vanish);
    CHECK(hull.max_vanish <= over_s.max_vanish);
  }
}
