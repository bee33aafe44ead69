#include <algorithm>

#include "sparsetree/kernels.hpp"

namespace sparsetree::kernels::serial {

void sign_census(std::span<const double> data, std::size_t dim, double tol, std::span<std::size_t> pos,
                 std::span<std::size_t> neg) {
  std::fill(pos.begin(), pos.end(), 0);
  std::fill(neg.begin(), neg.end(), 0);
  const std::size_t count = dim == 0 ? 0 : data.size() / dim;
  for (std::size_t v = 0; v < count; ++v) {
    const double* x = data.data() + v * dim;
    for (std::size_t k = 0; k < dim; ++k) {
      pos[k] += x[k] > tol;
      neg[k] += x[k] < -tol;
    }
  }
}

void combine_pairs(std::span<const double> data, std::size_t dim, std::span<const std::size_t> pos_idx,
                   std::span<const std::size_t> neg_idx, Coord d, std::span<const Coord> stamp,
                   std::span<double> out) {
  const std::size_t nneg = neg_idx.size();
  for (std::size_t i = 0; i < pos_idx.size(); ++i) {
    const double* xp = data.data() + pos_idx[i] * dim;
    for (std::size_t j = 0; j < nneg; ++j) {
      const double* xn = data.data() + neg_idx[j] * dim;
      double* y = out.data() + (i * nneg + j) * dim;
      const double gap = xp[d] - xn[d];
      const double wp = -xn[d] / gap;
      const double wn = xp[d] / gap;
      for (std::size_t k = 0; k < dim; ++k) y[k] = wp * xp[k] + wn * xn[k];
      y[d] = 0.0;
      for (Coord s : stamp) y[s] = 0.0;
    }
  }
}

void projection_keys(std::span<const double> data, std::size_t dim, std::span<const double> weights,
                     std::span<double> keys) {
  for (std::size_t v = 0; v < keys.size(); ++v) {
    const double* x = data.data() + v * dim;
    double s = 0.0;
    for (std::size_t k = 0; k < dim; ++k) s += weights[k] * x[k];
    keys[v] = s;
  }
}

void halfspace_violations(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, std::span<const double> data,
                          std::span<double> out) {
  const auto dim = a.cols();
  for (std::size_t v = 0; v < out.size(); ++v) {
    const Eigen::Map<const Eigen::VectorXd> x(data.data() + v * static_cast<std::size_t>(dim), dim);
    double worst = 0.0;
    for (Eigen::Index i = 0; i < a.rows(); ++i) worst = std::max(worst, a.row(i).dot(x) - b[i]);
    out[v] = worst;
  }
}

}  // namespace sparsetree::kernels::serial
