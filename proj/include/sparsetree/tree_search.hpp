#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "sparsetree/feasible_set.hpp"
#include "sparsetree/polytope.hpp"

namespace sparsetree {

enum class Protocol { kDfsRuntime, kDfsFixedOrder, kBfs };
enum class SubtreeExploration { kOff, kLeafRestart, kLeafRestartPlusMerge };
enum class SolutionPick { kUniform, kMinResidual };

struct SearchConfig {
  Protocol protocol = Protocol::kDfsRuntime;
  std::size_t root_vertices = 500;  // M
  std::size_t cap_pos = 500;
  std::size_t cap_neg = 500;
  std::uint64_t seed = 1;
  bool carry_zero_vertices = false;
  SubtreeExploration subtree_exploration = SubtreeExploration::kOff;
  std::optional<std::size_t> max_generations;  // defaults to N
  std::size_t bfs_width_cap = 64;
  std::optional<std::vector<Coord>> fixed_order;  // computed from the 1-norm relaxation when absent
  SolutionPick solution_pick = SolutionPick::kUniform;
  // Same-pattern checkpoints merged into a DFS leaf when running with
  // kLeafRestartPlusMerge.
  std::vector<Polytope> merge_candidates;
  // Start from this polytope instead of sampling a root (checkpoint resume).
  std::optional<Polytope> resume_from;
};

// Throws Error(kInvalidArgument) when the config is unusable for dimension N.
void validate(const SearchConfig& config, std::size_t dim);

struct GenerationRecord {
  Coord chosen_d = 0;
  SignCensus census;              // at chosen_d, before reduction
  std::size_t parent_count = 0;   // vertices before reduction
  std::size_t raw_count = 0;      // M'_d = M+_d * M-_d after reduction
  std::size_t unique_count = 0;   // vertices in the child
  double elapsed_ms = 0.0;
};

struct SearchTrace {
  std::vector<Coord> walk;
  std::vector<GenerationRecord> per_generation;
  Polytope final_polytope{1};
  Vector chosen_solution;
  std::size_t restarts = 0;
  std::size_t merges = 0;
  double root_elapsed_ms = 0.0;
};

struct WidthRecord {
  std::size_t generation = 0;
  std::size_t children = 0;      // generated before sibling merging
  std::size_t merged = 0;        // distinct sparsity patterns
  std::size_t bound = 0;         // previous kept width * (N - g + 1)
  std::size_t kept = 0;          // after the width cap
};

struct BreadthFirstResult {
  std::vector<SearchTrace> leaves;
  std::vector<WidthRecord> widths;
};

// Observer invoked after each vanish with the unreduced parent and the child.
using GenerationHook = std::function<void(const Polytope& parent, const Polytope& child, const GenerationRecord&)>;

// M unique vertices of S from random-objective LPs. Throws kInvalidArgument
// (M < 2), kInfeasibleSet, kUnbounded or kSamplingStalled (10 M attempts).
Polytope init_root(const HalfspaceSet& set, std::size_t m, Rng& rng);

// Single-path depth-first walk with randomized reduction and either the
// runtime product rule or a fixed order.
SearchTrace run_depth_first(const HalfspaceSet& set, const SearchConfig& config, const GenerationHook& hook = {});

// Level-by-level expansion of every child of every node, with same-pattern
// siblings merged and at most bfs_width_cap nodes kept per generation.
BreadthFirstResult run_breadth_first(const HalfspaceSet& set, const SearchConfig& config);

// Union of two same-pattern polytopes with duplicates removed.
Polytope merge_siblings(const Polytope& a, const Polytope& b);

// Coordinates sorted by ascending magnitude in a minimum 1-norm point of S
// (ties, including magnitudes below kZeroTol, by lowest index).
std::vector<Coord> fixed_order_from_l1(const HalfspaceSet& set);
Vector l1_relaxation(const HalfspaceSet& set);

const char* to_string(Protocol p);
const char* to_string(SubtreeExploration e);
const char* to_string(SolutionPick s);

}  // namespace sparsetree
