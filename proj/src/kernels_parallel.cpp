#include <algorithm>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "sparsetree/kernels.hpp"

namespace sparsetree::kernels {

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

namespace parallel {

void sign_census(std::span<const double> data, std::size_t dim, double tol, std::span<std::size_t> pos,
                 std::span<std::size_t> neg) {
  std::fill(pos.begin(), pos.end(), 0);
  std::fill(neg.begin(), neg.end(), 0);
  const auto count = static_cast<long>(dim == 0 ? 0 : data.size() / dim);
#pragma omp parallel
  {
    std::vector<std::size_t> lp(dim, 0), ln(dim, 0);
#pragma omp for schedule(static) nowait
    for (long v = 0; v < count; ++v) {
      const double* x = data.data() + static_cast<std::size_t>(v) * dim;
      for (std::size_t k = 0; k < dim; ++k) {
        lp[k] += x[k] > tol;
        ln[k] += x[k] < -tol;
      }
    }
#pragma omp critical
    for (std::size_t k = 0; k < dim; ++k) {
      pos[k] += lp[k];
      neg[k] += ln[k];
    }
  }
}

void combine_pairs(std::span<const double> data, std::size_t dim, std::span<const std::size_t> pos_idx,
                   std::span<const std::size_t> neg_idx, Coord d, std::span<const Coord> stamp,
                   std::span<double> out) {
  const std::size_t nneg = neg_idx.size();
  const auto total = static_cast<long>(pos_idx.size() * nneg);
#pragma omp parallel for schedule(static)
  for (long t = 0; t < total; ++t) {
    const std::size_t i = static_cast<std::size_t>(t) / nneg;
    const std::size_t j = static_cast<std::size_t>(t) % nneg;
    const double* xp = data.data() + pos_idx[i] * dim;
    const double* xn = data.data() + neg_idx[j] * dim;
    double* y = out.data() + static_cast<std::size_t>(t) * dim;
    const double gap = xp[d] - xn[d];
    const double wp = -xn[d] / gap;
    const double wn = xp[d] / gap;
    for (std::size_t k = 0; k < dim; ++k) y[k] = wp * xp[k] + wn * xn[k];
    y[d] = 0.0;
    for (Coord s : stamp) y[s] = 0.0;
  }
}

void projection_keys(std::span<const double> data, std::size_t dim, std::span<const double> weights,
                     std::span<double> keys) {
  const auto count = static_cast<long>(keys.size());
#pragma omp parallel for schedule(static)
  for (long v = 0; v < count; ++v) {
    const double* x = data.data() + static_cast<std::size_t>(v) * dim;
    double s = 0.0;
    for (std::size_t k = 0; k < dim; ++k) s += weights[k] * x[k];
    keys[static_cast<std::size_t>(v)] = s;
  }
}

void halfspace_violations(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, std::span<const double> data,
                          std::span<double> out) {
  // Blocked A * X so each thread runs a small GEMM instead of per-row dots.
  constexpr long kBlock = 512;
  const auto dim = a.cols();
  const auto count = static_cast<long>(out.size());
  const long blocks = (count + kBlock - 1) / kBlock;
#pragma omp parallel for schedule(dynamic)
  for (long blk = 0; blk < blocks; ++blk) {
    const long first = blk * kBlock;
    const long len = std::min(kBlock, count - first);
    const Eigen::Map<const Eigen::MatrixXd> x(data.data() + static_cast<std::size_t>(first * dim), dim, len);
    const Eigen::MatrixXd r = (a * x).colwise() - b;
    for (long v = 0; v < len; ++v) {
      out[static_cast<std::size_t>(first + v)] = a.rows() == 0 ? 0.0 : std::max(0.0, r.col(v).maxCoeff());
    }
  }
}

}  // namespace parallel
}  // namespace sparsetree::kernels
