#include "sparsetree/tree_search.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <numeric>

#include "parallel_for.hpp"
#include "sparsetree/errors.hpp"

namespace sparsetree {
namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::size_t pick_solution(const HalfspaceSet& set, const Polytope& p, SolutionPick pick, Rng& rng) {
  if (pick == SolutionPick::kUniform) return rng.uniform_index(p.size());
  std::vector<double> viol(p.size());
  kernels::serial::halfspace_violations(set.matrix(), set.rhs(), p.data(), viol);
  return static_cast<std::size_t>(std::min_element(viol.begin(), viol.end()) - viol.begin());
}

// Leaf-to-parent transformation: for unvanished coordinates in ascending
// order, draw a vertex carrying a sign the polytope lacks there. Stops at the
// first success.
bool try_leaf_restart(const HalfspaceSet& set, Polytope& p, const std::vector<SignCensus>& census) {
  for (Coord k = 0; k < p.dim(); ++k) {
    if (p.is_vanished(k)) continue;
    for (Sign s : {Sign::kPositive, Sign::kNegative}) {
      const bool missing = s == Sign::kPositive ? census[k].pos_count == 0 : census[k].neg_count == 0;
      if (!missing) continue;
      std::optional<Vector> x = sample_targeted(set, p.vanished(), k, s);
      if (x && p.add_unique(*x)) return true;
    }
  }
  return false;
}

void check_permutation(const std::vector<Coord>& order, std::size_t dim) {
  std::vector<bool> seen(dim, false);
  if (order.size() != dim) fail(ErrorCode::kInvalidArgument, "fixed order must list every coordinate once");
  for (Coord c : order) {
    if (c >= dim || seen[c]) fail(ErrorCode::kInvalidArgument, "fixed order is not a permutation");
    seen[c] = true;
  }
}

}  // namespace

const char* to_string(Protocol p) {
  switch (p) {
    case Protocol::kDfsRuntime: return "dfs_runtime";
    case Protocol::kDfsFixedOrder: return "dfs_fixed_order";
    case Protocol::kBfs: return "bfs";
  }
  return "?";
}

const char* to_string(SubtreeExploration e) {
  switch (e) {
    case SubtreeExploration::kOff: return "off";
    case SubtreeExploration::kLeafRestart: return "leaf_restart";
    case SubtreeExploration::kLeafRestartPlusMerge: return "leaf_restart_plus_merge";
  }
  return "?";
}

const char* to_string(SolutionPick s) {
  switch (s) {
    case SolutionPick::kUniform: return "uniform";
    case SolutionPick::kMinResidual: return "min_residual";
  }
  return "?";
}

void validate(const SearchConfig& config, std::size_t dim) {
  if (config.root_vertices < 2 && !config.resume_from) fail(ErrorCode::kInvalidArgument, "M must be >= 2");
  if (config.cap_pos < 1 || config.cap_neg < 1) fail(ErrorCode::kInvalidArgument, "reduction caps must be >= 1");
  if (config.max_generations && *config.max_generations > dim) {
    fail(ErrorCode::kInvalidArgument, "max_generations exceeds the dimension");
  }
  if (config.protocol == Protocol::kBfs && config.bfs_width_cap < 1) {
    fail(ErrorCode::kInvalidArgument, "bfs_width_cap must be >= 1");
  }
  if (config.fixed_order) check_permutation(*config.fixed_order, dim);
  if (config.resume_from && config.resume_from->dim() != dim) {
    fail(ErrorCode::kDimensionMismatch, "resume polytope dimension differs from the problem");
  }
  for (const Polytope& c : config.merge_candidates) {
    if (c.dim() != dim) fail(ErrorCode::kDimensionMismatch, "merge candidate dimension differs from the problem");
  }
}

Polytope init_root(const HalfspaceSet& set, std::size_t m, Rng& rng) {
  if (m < 2) fail(ErrorCode::kInvalidArgument, "root needs M >= 2 vertices");
  constexpr std::size_t kMaxUnbounded = 100;
  const std::size_t limit = 10 * m;
  Polytope root(set.dim());
  root.reserve(m);
  std::size_t attempts = 0;
  std::size_t unbounded_run = 0;
  while (root.size() < m) {
    if (attempts >= limit) {
      fail(ErrorCode::kSamplingStalled, "only " + std::to_string(root.size()) + " unique vertices after " +
                                            std::to_string(attempts) + " draws");
    }
    // Objectives are drawn serially so the stream does not depend on the
    // thread count; the LPs themselves are independent.
    const std::size_t batch = std::min(m - root.size(), limit - attempts);
    std::vector<Vector> objectives(batch);
    for (Vector& c : objectives) c = random_objective(set.dim(), rng);
    std::vector<VertexSample> results(batch);
    detail::parallel_for(static_cast<long>(batch), [&](long i) {
      results[static_cast<std::size_t>(i)] = sample_vertex(set, objectives[static_cast<std::size_t>(i)]);
    });
    for (VertexSample& s : results) {
      ++attempts;
      switch (s.status) {
        case SampleStatus::kInfeasible: fail(ErrorCode::kInfeasibleSet, "feasible set is empty");
        case SampleStatus::kUnbounded:
          if (++unbounded_run >= kMaxUnbounded) {
            fail(ErrorCode::kUnbounded, "100 consecutive random objectives were unbounded");
          }
          break;
        case SampleStatus::kVertex:
          unbounded_run = 0;
          if (root.size() < m) root.add_unique(s.point);
          break;
      }
    }
  }
  return root;
}

SearchTrace run_depth_first(const HalfspaceSet& set, const SearchConfig& config, const GenerationHook& hook) {
  if (config.protocol == Protocol::kBfs) fail(ErrorCode::kInvalidArgument, "run_depth_first needs a DFS protocol");
  const std::size_t dim = set.dim();
  validate(config, dim);

  const Rng master(config.seed);
  Rng sampling = master.substream("sampling");
  Rng reduction = master.substream("reduction");
  Rng selection = master.substream("selection");

  SearchTrace trace;
  auto t_root = Clock::now();
  Polytope p = config.resume_from ? *config.resume_from : init_root(set, config.root_vertices, sampling);
  trace.root_elapsed_ms = ms_since(t_root);

  std::vector<Coord> order;
  if (config.protocol == Protocol::kDfsFixedOrder) {
    order = config.fixed_order ? *config.fixed_order : fixed_order_from_l1(set);
  }
  std::size_t order_pos = 0;
  const std::size_t max_gen = config.max_generations.value_or(dim);
  std::vector<bool> candidate_used(config.merge_candidates.size(), false);
  const VanishOptions vanish_opts{config.carry_zero_vertices, kernels::Backend::kParallel};

  while (p.generation() < max_gen) {
    const std::vector<SignCensus> census = census_all(p);
    const std::vector<Coord> children = unveil_children(p, census);
    std::optional<Coord> d;
    if (!children.empty()) {
      if (config.protocol == Protocol::kDfsRuntime) {
        d = select_coordinate(census, children);
      } else {
        // Single pass over the order; entries that are not children now are
        // skipped for the rest of the walk.
        while (order_pos < order.size() && !d) {
          const Coord c = order[order_pos++];
          if (std::binary_search(children.begin(), children.end(), c)) d = c;
        }
        if (!d) break;
      }
    } else {
      if (config.subtree_exploration != SubtreeExploration::kOff && try_leaf_restart(set, p, census)) {
        ++trace.restarts;
        continue;
      }
      if (config.subtree_exploration == SubtreeExploration::kLeafRestartPlusMerge) {
        bool merged = false;
        for (std::size_t i = 0; i < config.merge_candidates.size() && !merged; ++i) {
          if (candidate_used[i] || config.merge_candidates[i].vanished() != p.vanished()) continue;
          candidate_used[i] = true;
          p = merge_siblings(p, config.merge_candidates[i]);
          ++trace.merges;
          merged = !unveil_children(p).empty();
        }
        if (merged) continue;
      }
      break;
    }

    const auto t0 = Clock::now();
    GenerationRecord rec;
    rec.chosen_d = *d;
    rec.census = census[*d];
    rec.parent_count = p.size();
    const Polytope reduced =
        reduce_complexity(p, *d, config.cap_pos, config.cap_neg, reduction, config.carry_zero_vertices);
    VanishStats stats;
    Polytope child = vanish_coordinate(reduced, *d, vanish_opts, &stats);
    rec.raw_count = stats.raw_pairs;
    rec.unique_count = stats.unique;
    rec.elapsed_ms = ms_since(t0);
    if (hook) hook(p, child, rec);
    trace.walk.push_back(*d);
    trace.per_generation.push_back(rec);
    p = std::move(child);
  }

  const std::size_t pick = pick_solution(set, p, config.solution_pick, selection);
  trace.chosen_solution = p.vertex_copy(pick);
  trace.final_polytope = std::move(p);
  return trace;
}

Polytope merge_siblings(const Polytope& a, const Polytope& b) {
  if (a.dim() != b.dim() || a.vanished() != b.vanished()) {
    fail(ErrorCode::kPatternMismatch, "siblings must share the same vanished coordinates");
  }
  Polytope u(a.dim(), a.vanished());
  u.reserve(a.size() + b.size());
  std::vector<double>& buf = u.mutable_data();
  buf.insert(buf.end(), a.data().begin(), a.data().end());
  buf.insert(buf.end(), b.data().begin(), b.data().end());
  return deduplicated(u);
}

BreadthFirstResult run_breadth_first(const HalfspaceSet& set, const SearchConfig& config) {
  if (config.protocol != Protocol::kBfs) fail(ErrorCode::kInvalidArgument, "run_breadth_first needs protocol bfs");
  const std::size_t dim = set.dim();
  validate(config, dim);

  const Rng master(config.seed);
  Rng sampling = master.substream("sampling");
  Rng reduction = master.substream("reduction");
  Rng selection = master.substream("selection");

  struct Node {
    Polytope poly{1};
    std::vector<Coord> walk;
    std::vector<GenerationRecord> history;
  };

  BreadthFirstResult result;
  std::vector<Node> frontier;
  frontier.push_back(
      {config.resume_from ? *config.resume_from : init_root(set, config.root_vertices, sampling), {}, {}});
  const std::size_t max_gen = config.max_generations.value_or(dim);
  std::vector<Node> leaves;

  while (!frontier.empty()) {
    struct Task {
      std::size_t node;
      Coord d;
      SignCensus census;
      std::uint64_t seed;
    };
    std::vector<Task> tasks;
    std::vector<bool> expanded(frontier.size(), false);
    for (std::size_t i = 0; i < frontier.size(); ++i) {
      const Polytope& p = frontier[i].poly;
      if (p.generation() >= max_gen) continue;
      const std::vector<SignCensus> census = census_all(p);
      for (Coord d : unveil_children(p, census)) {
        tasks.push_back({i, d, census[d], reduction.next_u64()});
        expanded[i] = true;
      }
    }
    for (std::size_t i = 0; i < frontier.size(); ++i) {
      if (!expanded[i]) leaves.push_back(std::move(frontier[i]));
    }
    if (tasks.empty()) break;

    const std::size_t g = frontier.front().poly.generation() + 1;
    std::vector<Node> children(tasks.size());
    detail::parallel_for(static_cast<long>(tasks.size()), [&](long ti) {
      const Task& t = tasks[static_cast<std::size_t>(ti)];
      const Node& parent = frontier[t.node];
      const auto t0 = Clock::now();
      Rng local(t.seed);
      const Polytope reduced =
          reduce_complexity(parent.poly, t.d, config.cap_pos, config.cap_neg, local, config.carry_zero_vertices);
      VanishStats stats;
      Node child{vanish_coordinate(reduced, t.d, {config.carry_zero_vertices, kernels::Backend::kSerial}, &stats),
                 parent.walk, parent.history};
      GenerationRecord rec{t.d, t.census, parent.poly.size(), stats.raw_pairs, stats.unique, ms_since(t0)};
      child.walk.push_back(t.d);
      child.history.push_back(rec);
      children[static_cast<std::size_t>(ti)] = std::move(child);
    });

    WidthRecord width;
    width.generation = g;
    width.children = children.size();
    width.bound = frontier.size() * (dim - g + 1);

    // Same-pattern siblings collapse into the first one discovered.
    std::vector<Node> merged;
    std::map<std::vector<Coord>, std::size_t> by_pattern;
    for (Node& c : children) {
      auto it = by_pattern.find(c.poly.vanished());
      if (it == by_pattern.end()) {
        by_pattern.emplace(c.poly.vanished(), merged.size());
        merged.push_back(std::move(c));
      } else {
        Node& into = merged[it->second];
        into.poly = merge_siblings(into.poly, c.poly);
      }
    }
    width.merged = merged.size();

    std::vector<std::size_t> rank(merged.size());
    std::iota(rank.begin(), rank.end(), 0);
    std::stable_sort(rank.begin(), rank.end(),
                     [&merged](std::size_t a, std::size_t b) { return merged[a].poly.size() > merged[b].poly.size(); });
    if (rank.size() > config.bfs_width_cap) rank.resize(config.bfs_width_cap);
    std::sort(rank.begin(), rank.end());
    std::vector<Node> next;
    next.reserve(rank.size());
    for (std::size_t r : rank) next.push_back(std::move(merged[r]));
    width.kept = next.size();
    result.widths.push_back(width);
    frontier = std::move(next);
  }

  for (Node& leaf : leaves) {
    SearchTrace t;
    t.walk = std::move(leaf.walk);
    t.per_generation = std::move(leaf.history);
    t.chosen_solution = leaf.poly.vertex_copy(pick_solution(set, leaf.poly, config.solution_pick, selection));
    t.final_polytope = std::move(leaf.poly);
    result.leaves.push_back(std::move(t));
  }
  return result;
}

Vector l1_relaxation(const HalfspaceSet& set) {
  const auto n = static_cast<Eigen::Index>(set.dim());
  const auto m = static_cast<Eigen::Index>(set.num_rows());
  lp::LpProblem pb;
  // Variables [x, t]: minimize sum t subject to -t <= x <= t and x in S.
  pb.objective = Eigen::VectorXd::Zero(2 * n);
  pb.objective.tail(n).setOnes();
  pb.ineq_matrix = Eigen::MatrixXd::Zero(m + 2 * n, 2 * n);
  pb.ineq_rhs = Eigen::VectorXd::Zero(m + 2 * n);
  pb.ineq_matrix.topLeftCorner(m, n) = set.matrix();
  pb.ineq_rhs.head(m) = set.rhs();
  for (Eigen::Index k = 0; k < n; ++k) {
    pb.ineq_matrix(m + k, k) = 1.0;
    pb.ineq_matrix(m + k, n + k) = -1.0;
    pb.ineq_matrix(m + n + k, k) = -1.0;
    pb.ineq_matrix(m + n + k, n + k) = -1.0;
  }
  pb.nonnegative.assign(static_cast<std::size_t>(2 * n), false);
  for (Eigen::Index k = 0; k < n; ++k) pb.nonnegative[static_cast<std::size_t>(n + k)] = true;
  const lp::LpOutcome res = lp::solve(pb);
  if (res.status == lp::LpStatus::kInfeasible) fail(ErrorCode::kInfeasibleSet, "feasible set is empty");
  if (!res.optimal()) fail(ErrorCode::kUnbounded, "1-norm relaxation reported unbounded");
  return Vector(res.solution->data(), res.solution->data() + n);
}

std::vector<Coord> fixed_order_from_l1(const HalfspaceSet& set) {
  const Vector x = l1_relaxation(set);
  std::vector<double> mag(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) mag[k] = std::abs(x[k]) <= kZeroTol ? 0.0 : std::abs(x[k]);
  std::vector<Coord> order(x.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&mag](Coord a, Coord b) { return mag[a] < mag[b]; });
  return order;
}

}  // namespace sparsetree
