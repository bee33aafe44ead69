#pragma once

#include <span>
#include <vector>

#include "sparsetree/kernels.hpp"
#include "sparsetree/random.hpp"
#include "sparsetree/types.hpp"

namespace sparsetree {

// Vertex-representation polytope: conv of a finite vertex list, together with
// the coordinates vanished on the path from the root. Every vertex holds an
// exact 0.0 at each vanished coordinate.
class Polytope {
 public:
  explicit Polytope(std::size_t dim, std::vector<Coord> vanished = {});
  static Polytope from_vertices(std::size_t dim, const std::vector<Vector>& vertices,
                                std::vector<Coord> vanished = {});

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return dim_ == 0 ? 0 : coords_.size() / dim_; }
  bool empty() const { return coords_.empty(); }
  std::size_t generation() const { return vanished_.size(); }
  const std::vector<Coord>& vanished() const { return vanished_; }
  bool is_vanished(Coord k) const;

  std::span<const double> vertex(std::size_t i) const { return {coords_.data() + i * dim_, dim_}; }
  std::span<const double> data() const { return coords_; }
  Vector vertex_copy(std::size_t i) const;
  std::vector<Vector> vertices() const;

  void reserve(std::size_t count) { coords_.reserve(count * dim_); }
  // Appends without any duplicate check.
  void add_vertex(std::span<const double> x);
  // Appends unless a vertex within `tol` (max-norm) is already present.
  bool add_unique(std::span<const double> x, double tol = kDupTol);

  // Flat storage; callers writing through this must keep vanished entries zero.
  std::vector<double>& mutable_data() { return coords_; }

 private:
  std::size_t dim_;
  std::vector<double> coords_;
  std::vector<Coord> vanished_;
};

struct SignCensus {
  Coord coordinate = 0;
  std::size_t pos_count = 0;
  std::size_t neg_count = 0;
  std::size_t zero_count = 0;
};

struct VanishOptions {
  // Copy vertices with |x_d| <= kZeroTol into the child (d stamped to zero).
  bool carry_zero_vertices = false;
  kernels::Backend backend = kernels::Backend::kParallel;
};

struct VanishStats {
  std::size_t raw_pairs = 0;  // M+_d * M-_d, before duplicate removal
  std::size_t carried = 0;    // zero-at-d vertices copied through
  std::size_t unique = 0;     // vertices in the child
};

std::size_t l0_norm(std::span<const double> x, double tol = kZeroTol);
double linf_distance(std::span<const double> a, std::span<const double> b);

// Throws Error(kVanishedCoordinate) when d is already vanished.
SignCensus count_signs(const Polytope& p, Coord d);
// Census of every coordinate (vanished ones included, they count as zero).
std::vector<SignCensus> census_all(const Polytope& p, kernels::Backend backend = kernels::Backend::kParallel);

// Coordinates that can be vanished: unvanished d with at least one strictly
// positive and one strictly negative vertex. Empty means the node is a leaf.
std::vector<Coord> unveil_children(const Polytope& p);
std::vector<Coord> unveil_children(const Polytope& p, const std::vector<SignCensus>& census);

// New polytope from all (x+, x-) pairs straddling zero at d, combined as
// (-x-_d x+ + x+_d x-) / (x+_d - x-_d). Pair order is
// (positive index, negative index); duplicates are removed as in
// unique_vertex_indices.
Polytope vanish_coordinate(const Polytope& p, Coord d, const VanishOptions& options = {},
                           VanishStats* stats = nullptr);

// Keeps at most cap_pos vertices with x_d > 0 and cap_neg with x_d < 0, each
// side chosen uniformly without replacement. Zero-at-d vertices survive only
// when carry_zero_vertices is set. Survivors keep their relative order.
Polytope reduce_complexity(const Polytope& p, Coord d, std::size_t cap_pos, std::size_t cap_neg, Rng& rng,
                           bool carry_zero_vertices = false);

// argmax_{d in children} pos_count(d) * neg_count(d); ties go to the lowest d.
Coord select_coordinate(const Polytope& p, std::span<const Coord> children);
Coord select_coordinate(const std::vector<SignCensus>& census, std::span<const Coord> children);

// Indices of the vertices that survive duplicate removal (first occurrence in
// a deterministic projection order wins), in ascending index order.
std::vector<std::size_t> unique_vertex_indices(const Polytope& p, double tol = kDupTol,
                                               kernels::Backend backend = kernels::Backend::kParallel);
Polytope deduplicated(const Polytope& p, double tol = kDupTol,
                      kernels::Backend backend = kernels::Backend::kParallel);

// k-subset of [0, n) chosen uniformly, returned sorted.
std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k, Rng& rng);

}  // namespace sparsetree
