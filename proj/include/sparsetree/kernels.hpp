#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <span>

#include "sparsetree/types.hpp"

// Data-parallel inner loops of the polytope kernel. Vertex sets are flat
// row-major arrays of `dim` doubles per vertex. `serial` is the reference
// implementation; `parallel` is the OpenMP build of the same loops. Census,
// pair combination and keys are bit-identical across backends; violations
// agree to rounding (the parallel path uses blocked GEMM).
namespace sparsetree::kernels {

enum class Backend { kSerial, kParallel };

#define SPARSETREE_KERNEL_DECLS                                                                          \
  /* pos[k] / neg[k] = number of vertices with x_k > tol / x_k < -tol. */                                \
  void sign_census(std::span<const double> data, std::size_t dim, double tol, std::span<std::size_t> pos, \
                   std::span<std::size_t> neg);                                                          \
  /* out[i * |neg_idx| + j] = the zero-at-d combination of vertices pos_idx[i] and neg_idx[j], with     \
     coordinate d and every coordinate in `stamp` overwritten by exact 0.0. */                           \
  void combine_pairs(std::span<const double> data, std::size_t dim, std::span<const std::size_t> pos_idx, \
                     std::span<const std::size_t> neg_idx, Coord d, std::span<const Coord> stamp,        \
                     std::span<double> out);                                                             \
  /* keys[v] = sum_k weights[k] * x_k. */                                                                \
  void projection_keys(std::span<const double> data, std::size_t dim, std::span<const double> weights,    \
                       std::span<double> keys);                                                          \
  /* out[v] = max(0, max_i (a_i x_v - b_i)). */                                                          \
  void halfspace_violations(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, std::span<const double> data, \
                            std::span<double> out);

namespace serial {
SPARSETREE_KERNEL_DECLS
}  // namespace serial

namespace parallel {
SPARSETREE_KERNEL_DECLS
}  // namespace parallel

#undef SPARSETREE_KERNEL_DECLS

int max_threads();

}  // namespace sparsetree::kernels
