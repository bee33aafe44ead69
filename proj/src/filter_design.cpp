#include "sparsetree/filter_design.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sparsetree/errors.hpp"
#include "sparsetree/polytope.hpp"

namespace sparsetree::filter {
namespace {

std::vector<double> linspace(double lo, double hi, std::size_t count) {
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    out[i] = i + 1 == count ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
  }
  return out;
}

std::pair<std::size_t, std::size_t> band_counts(const FilterSpec& spec) {
  const double pb_len = spec.omega_pb;
  const double sb_len = std::numbers::pi - spec.omega_sb;
  const std::size_t k = spec.grid_points();
  auto npb = static_cast<std::size_t>(std::lround(static_cast<double>(k) * pb_len / (pb_len + sb_len)));
  npb = std::clamp<std::size_t>(npb, 2, k - 2);
  return {npb, k - npb};
}

}  // namespace

void FilterSpec::validate() const {
  if (!(omega_pb > 0.0 && omega_pb < omega_sb && omega_sb < std::numbers::pi)) {
    fail(ErrorCode::kInvalidArgument, "band edges must satisfy 0 < omega_pb < omega_sb < pi");
  }
  if (!(delta_pb > 0.0 && delta_sb > 0.0)) fail(ErrorCode::kInvalidArgument, "ripples must be positive");
  if (half_length < 2) fail(ErrorCode::kInvalidArgument, "half length N must be >= 2");
  if (grid_points() < 4 * half_length) fail(ErrorCode::kInvalidArgument, "grid K must be >= 4N");
}

FrequencyGrid design_grid(const FilterSpec& spec) {
  spec.validate();
  const auto [npb, nsb] = band_counts(spec);
  return {linspace(0.0, spec.omega_pb, npb), linspace(spec.omega_sb, std::numbers::pi, nsb)};
}

FrequencyGrid dense_grid(const FilterSpec& spec, std::size_t dense_factor) {
  if (dense_factor < 1) fail(ErrorCode::kInvalidArgument, "dense factor must be >= 1");
  spec.validate();
  const auto [npb, nsb] = band_counts(spec);
  return {linspace(0.0, spec.omega_pb, (npb - 1) * dense_factor + 1),
          linspace(spec.omega_sb, std::numbers::pi, (nsb - 1) * dense_factor + 1)};
}

HalfspaceSet build_filter_set(const FilterSpec& spec) {
  const FrequencyGrid grid = design_grid(spec);
  const auto n = static_cast<Eigen::Index>(spec.half_length);
  const auto rows = static_cast<Eigen::Index>(2 * (grid.passband.size() + grid.stopband.size()));
  Eigen::MatrixXd a(rows, n);
  Eigen::VectorXd b(rows);
  Eigen::Index r = 0;
  auto add_pair = [&](double w, double upper, double lower_neg) {
    for (Eigen::Index k = 0; k < n; ++k) {
      const double c = std::cos(w * static_cast<double>(k));
      a(r, k) = c;
      a(r + 1, k) = -c;
    }
    b[r] = upper;
    b[r + 1] = lower_neg;
    r += 2;
  };
  for (double w : grid.passband) add_pair(w, 1.0 + spec.delta_pb, -(1.0 - spec.delta_pb));
  for (double w : grid.stopband) add_pair(w, spec.delta_sb, spec.delta_sb);
  return HalfspaceSet(std::move(a), std::move(b), "lowpass N=" + std::to_string(spec.half_length));
}

double amplitude(std::span<const double> x, double omega) {
  double s = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) s += x[k] * std::cos(omega * static_cast<double>(k));
  return s;
}

ImpulseResponse x_to_impulse(std::span<const double> x) {
  if (x.empty()) fail(ErrorCode::kInvalidArgument, "empty coefficient vector");
  const std::size_t n = x.size();
  ImpulseResponse h;
  h.center = n - 1;
  h.taps.assign(2 * n - 1, 0.0);
  h.taps[h.center] = x[0];
  for (std::size_t k = 1; k < n; ++k) {
    const double half = x[k] / 2.0;
    h.taps[h.center + k] = half;
    h.taps[h.center - k] = half;
  }
  return h;
}

Vector impulse_to_x(const ImpulseResponse& h) {
  if (h.taps.size() % 2 == 0 || h.center * 2 + 1 != h.taps.size()) {
    fail(ErrorCode::kInvalidArgument, "impulse response must have odd length centred at the middle tap");
  }
  const std::size_t n = h.center + 1;
  Vector x(n);
  x[0] = h.taps[h.center];
  for (std::size_t k = 1; k < n; ++k) x[k] = h.taps[h.center + k] + h.taps[h.center - k];
  return x;
}

FilterReport verify_filter(std::span<const double> x, const FilterSpec& spec, std::size_t dense_factor, double tol) {
  if (x.size() != spec.half_length) fail(ErrorCode::kDimensionMismatch, "coefficient count differs from N");
  const FrequencyGrid grid = dense_grid(spec, dense_factor);
  FilterReport rep;
  rep.dense_factor = dense_factor;
  rep.passband_points = grid.passband.size();
  rep.stopband_points = grid.stopband.size();
  for (double w : grid.passband) {
    rep.max_passband_deviation = std::max(rep.max_passband_deviation, std::abs(amplitude(x, w) - 1.0));
  }
  for (double w : grid.stopband) {
    rep.max_stopband_magnitude = std::max(rep.max_stopband_magnitude, std::abs(amplitude(x, w)));
  }
  rep.passband_ok = rep.max_passband_deviation <= spec.delta_pb + tol;
  rep.stopband_ok = rep.max_stopband_magnitude <= spec.delta_sb + tol;
  rep.passband_excess = std::max(0.0, rep.max_passband_deviation - spec.delta_pb) / spec.delta_pb;
  rep.stopband_excess = std::max(0.0, rep.max_stopband_magnitude - spec.delta_sb) / spec.delta_sb;
  rep.nonzero_coefficients = l0_norm(x);
  const ImpulseResponse h = x_to_impulse(x);
  rep.total_taps = h.taps.size();
  rep.zero_taps = static_cast<std::size_t>(std::count(h.taps.begin(), h.taps.end(), 0.0));
  return rep;
}

}  // namespace sparsetree::filter
