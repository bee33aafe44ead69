#include "sparsetree/polytope.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sparsetree/errors.hpp"

namespace sparsetree {
namespace {

void check_vanished(std::size_t dim, std::vector<Coord>& vanished) {
  std::sort(vanished.begin(), vanished.end());
  if (std::adjacent_find(vanished.begin(), vanished.end()) != vanished.end()) {
    fail(ErrorCode::kInvalidArgument, "vanished coordinates repeat");
  }
  if (!vanished.empty() && vanished.back() >= dim) {
    fail(ErrorCode::kDimensionMismatch, "vanished coordinate out of range");
  }
}

// Fixed, generic projection weights in [0.5, 1.5). Two vertices within tol in
// the max-norm have keys within tol * sum(weights).
std::vector<double> projection_weights(std::size_t dim) {
  std::vector<double> w(dim);
  for (std::size_t k = 0; k < dim; ++k) w[k] = 0.5 + std::fmod(0.6180339887498949 * static_cast<double>(k + 1), 1.0);
  return w;
}

}  // namespace

Polytope::Polytope(std::size_t dim, std::vector<Coord> vanished) : dim_(dim), vanished_(std::move(vanished)) {
  if (dim_ == 0) fail(ErrorCode::kInvalidArgument, "polytope dimension must be positive");
  check_vanished(dim_, vanished_);
}

Polytope Polytope::from_vertices(std::size_t dim, const std::vector<Vector>& vertices, std::vector<Coord> vanished) {
  Polytope p(dim, std::move(vanished));
  p.reserve(vertices.size());
  for (const Vector& v : vertices) p.add_vertex(v);
  return p;
}

bool Polytope::is_vanished(Coord k) const { return std::binary_search(vanished_.begin(), vanished_.end(), k); }

Vector Polytope::vertex_copy(std::size_t i) const {
  auto v = vertex(i);
  return Vector(v.begin(), v.end());
}

std::vector<Vector> Polytope::vertices() const {
  std::vector<Vector> out;
  out.reserve(size());
  for (std::size_t i = 0; i < size(); ++i) out.push_back(vertex_copy(i));
  return out;
}

void Polytope::add_vertex(std::span<const double> x) {
  if (x.size() != dim_) fail(ErrorCode::kDimensionMismatch, "vertex length differs from polytope dimension");
  coords_.insert(coords_.end(), x.begin(), x.end());
}

bool Polytope::add_unique(std::span<const double> x, double tol) {
  for (std::size_t i = 0; i < size(); ++i) {
    if (linf_distance(vertex(i), x) <= tol) return false;
  }
  add_vertex(x);
  return true;
}

std::size_t l0_norm(std::span<const double> x, double tol) {
  return static_cast<std::size_t>(std::count_if(x.begin(), x.end(), [tol](double v) { return std::abs(v) > tol; }));
}

double linf_distance(std::span<const double> a, std::span<const double> b) {
  double worst = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) worst = std::max(worst, std::abs(a[k] - b[k]));
  return worst;
}

std::vector<SignCensus> census_all(const Polytope& p, kernels::Backend backend) {
  std::vector<std::size_t> pos(p.dim()), neg(p.dim());
  if (backend == kernels::Backend::kParallel) {
    kernels::parallel::sign_census(p.data(), p.dim(), kZeroTol, pos, neg);
  } else {
    kernels::serial::sign_census(p.data(), p.dim(), kZeroTol, pos, neg);
  }
  std::vector<SignCensus> out(p.dim());
  for (Coord k = 0; k < p.dim(); ++k) out[k] = {k, pos[k], neg[k], p.size() - pos[k] - neg[k]};
  return out;
}

SignCensus count_signs(const Polytope& p, Coord d) {
  if (d >= p.dim()) fail(ErrorCode::kDimensionMismatch, "coordinate out of range");
  if (p.is_vanished(d)) fail(ErrorCode::kVanishedCoordinate, "coordinate " + std::to_string(d) + " is vanished");
  SignCensus c{d, 0, 0, 0};
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double v = p.vertex(i)[d];
    if (v > kZeroTol) {
      ++c.pos_count;
    } else if (v < -kZeroTol) {
      ++c.neg_count;
    } else {
      ++c.zero_count;
    }
  }
  return c;
}

std::vector<Coord> unveil_children(const Polytope& p, const std::vector<SignCensus>& census) {
  std::vector<Coord> out;
  for (const SignCensus& c : census) {
    if (!p.is_vanished(c.coordinate) && c.pos_count > 0 && c.neg_count > 0) out.push_back(c.coordinate);
  }
  return out;
}

std::vector<Coord> unveil_children(const Polytope& p) { return unveil_children(p, census_all(p)); }

Coord select_coordinate(const std::vector<SignCensus>& census, std::span<const Coord> children) {
  if (children.empty()) fail(ErrorCode::kEmptyChildSet, "no child to select");
  Coord best = children.front();
  std::size_t best_product = 0;
  bool first = true;
  for (Coord d : children) {
    const std::size_t prod = census.at(d).pos_count * census.at(d).neg_count;
    if (first || prod > best_product || (prod == best_product && d < best)) {
      best = d;
      best_product = prod;
      first = false;
    }
  }
  return best;
}

Coord select_coordinate(const Polytope& p, std::span<const Coord> children) {
  return select_coordinate(census_all(p), children);
}

std::vector<std::size_t> unique_vertex_indices(const Polytope& p, double tol, kernels::Backend backend) {
  const std::size_t n = p.size();
  const std::size_t dim = p.dim();
  const std::vector<double> weights = projection_weights(dim);
  std::vector<double> keys(n);
  if (backend == kernels::Backend::kParallel) {
    kernels::parallel::projection_keys(p.data(), dim, weights, keys);
  } else {
    kernels::serial::projection_keys(p.data(), dim, weights, keys);
  }
  const double window = tol * std::accumulate(weights.begin(), weights.end(), 0.0) * (1.0 + 1e-12) + 1e-300;

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&keys](std::size_t a, std::size_t b) {
    return keys[a] < keys[b] || (keys[a] == keys[b] && a < b);
  });

  // Sweep in key order; a vertex survives unless a survivor inside the key
  // window is within tol.
  std::vector<std::size_t> kept;  // positions into `order`, keys ascending
  kept.reserve(n);
  std::vector<std::size_t> survivors;
  for (std::size_t pos = 0; pos < n; ++pos) {
    const std::size_t v = order[pos];
    bool dup = false;
    for (auto it = kept.rbegin(); it != kept.rend(); ++it) {
      const std::size_t u = order[*it];
      if (keys[v] - keys[u] > window) break;
      if (linf_distance(p.vertex(u), p.vertex(v)) <= tol) {
        dup = true;
        break;
      }
    }
    if (!dup) {
      kept.push_back(pos);
      survivors.push_back(v);
    }
  }
  std::sort(survivors.begin(), survivors.end());
  return survivors;
}

Polytope deduplicated(const Polytope& p, double tol, kernels::Backend backend) {
  const std::vector<std::size_t> keep = unique_vertex_indices(p, tol, backend);
  Polytope out(p.dim(), p.vanished());
  out.reserve(keep.size());
  for (std::size_t i : keep) out.add_vertex(p.vertex(i));
  return out;
}

Polytope vanish_coordinate(const Polytope& p, Coord d, const VanishOptions& options, VanishStats* stats) {
  if (d >= p.dim()) fail(ErrorCode::kDimensionMismatch, "coordinate out of range");
  std::vector<std::size_t> pos, neg, zero;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double v = p.vertex(i)[d];
    if (v > kZeroTol) {
      pos.push_back(i);
    } else if (v < -kZeroTol) {
      neg.push_back(i);
    } else {
      zero.push_back(i);
    }
  }
  if (p.is_vanished(d) || pos.empty() || neg.empty()) {
    fail(ErrorCode::kNotAChild, "coordinate " + std::to_string(d) + " lacks vertices of both signs");
  }

  std::vector<Coord> vanished = p.vanished();
  vanished.push_back(d);
  Polytope raw(p.dim(), vanished);
  const std::size_t pairs = pos.size() * neg.size();
  const std::size_t carried = options.carry_zero_vertices ? zero.size() : 0;
  std::vector<double>& buf = raw.mutable_data();
  buf.resize((pairs + carried) * p.dim());
  const std::span<double> pair_out(buf.data(), pairs * p.dim());
  if (options.backend == kernels::Backend::kParallel) {
    kernels::parallel::combine_pairs(p.data(), p.dim(), pos, neg, d, p.vanished(), pair_out);
  } else {
    kernels::serial::combine_pairs(p.data(), p.dim(), pos, neg, d, p.vanished(), pair_out);
  }
  for (std::size_t z = 0; z < carried; ++z) {
    double* y = buf.data() + (pairs + z) * p.dim();
    const auto src = p.vertex(zero[z]);
    std::copy(src.begin(), src.end(), y);
    y[d] = 0.0;
    for (Coord s : p.vanished()) y[s] = 0.0;
  }

  Polytope out = deduplicated(raw, kDupTol, options.backend);
  if (stats != nullptr) *stats = {pairs, carried, out.size()};
  return out;
}

std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k, Rng& rng) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  if (k >= n) return idx;
  // Partial Fisher-Yates.
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + rng.uniform_index(n - i);
    std::swap(idx[i], idx[j]);
  }
  idx.resize(k);
  std::sort(idx.begin(), idx.end());
  return idx;
}

Polytope reduce_complexity(const Polytope& p, Coord d, std::size_t cap_pos, std::size_t cap_neg, Rng& rng,
                           bool carry_zero_vertices) {
  if (cap_pos < 1 || cap_neg < 1) fail(ErrorCode::kInvalidArgument, "reduction caps must be >= 1");
  if (d >= p.dim()) fail(ErrorCode::kDimensionMismatch, "coordinate out of range");
  std::vector<std::size_t> pos, neg, zero;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double v = p.vertex(i)[d];
    if (v > kZeroTol) {
      pos.push_back(i);
    } else if (v < -kZeroTol) {
      neg.push_back(i);
    } else {
      zero.push_back(i);
    }
  }
  std::vector<std::size_t> keep;
  for (std::size_t i : sample_without_replacement(pos.size(), cap_pos, rng)) keep.push_back(pos[i]);
  for (std::size_t i : sample_without_replacement(neg.size(), cap_neg, rng)) keep.push_back(neg[i]);
  if (carry_zero_vertices) keep.insert(keep.end(), zero.begin(), zero.end());
  std::sort(keep.begin(), keep.end());

  Polytope out(p.dim(), p.vanished());
  out.reserve(keep.size());
  for (std::size_t i : keep) out.add_vertex(p.vertex(i));
  return out;
}

}  // namespace sparsetree
