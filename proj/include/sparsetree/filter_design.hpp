#pragma once

#include <span>
#include <vector>

#include "sparsetree/feasible_set.hpp"
#include "sparsetree/types.hpp"

namespace sparsetree::filter {

// Type I linear-phase lowpass specification. Band edges are in radians.
struct FilterSpec {
  double omega_pb = 0.20 * 3.141592653589793;
  double omega_sb = 0.25 * 3.141592653589793;
  double delta_pb = 0.01;
  double delta_sb = 0.1;
  std::size_t half_length = 31;  // N: x in R^N, 2N - 1 taps
  std::size_t grid_size = 0;     // K; 0 selects the default 8N

  std::size_t grid_points() const { return grid_size == 0 ? 8 * half_length : grid_size; }
  // Throws Error(kInvalidArgument) unless 0 < wp < ws < pi, ripples > 0,
  // N >= 2 and K >= 4N.
  void validate() const;
};

// K points split between [0, wp] and [ws, pi] in proportion to band length,
// each band sampled uniformly with both endpoints.
struct FrequencyGrid {
  std::vector<double> passband;
  std::vector<double> stopband;
};

FrequencyGrid design_grid(const FilterSpec& spec);
// Grid refined `dense_factor` times between neighbouring design points.
FrequencyGrid dense_grid(const FilterSpec& spec, std::size_t dense_factor);

// Per passband frequency: rows for +(T - 1) <= dpb and -(T - 1) <= dpb; per
// stopband frequency: rows for +T <= dsb and -T <= dsb.
HalfspaceSet build_filter_set(const FilterSpec& spec);

// T(w, x) = sum_k x_k cos(w k), k = 0..N-1.
double amplitude(std::span<const double> x, double omega);

struct ImpulseResponse {
  std::vector<double> taps;  // h[0 .. 2N-2], symmetric about `center`
  std::size_t center = 0;
};

// x_0 is the centre tap, x_k (k >= 1) splits evenly onto centre +- k.
ImpulseResponse x_to_impulse(std::span<const double> x);
// Inverse of x_to_impulse for a symmetric, odd-length response.
Vector impulse_to_x(const ImpulseResponse& h);

inline constexpr double kVerifyTol = 1e-6;

struct FilterReport {
  std::size_t dense_factor = 1;
  std::size_t passband_points = 0;
  std::size_t stopband_points = 0;
  double max_passband_deviation = 0.0;  // max |T - 1| over the passband grid
  double max_stopband_magnitude = 0.0;  // max |T| over the stopband grid
  bool passband_ok = false;
  bool stopband_ok = false;
  double passband_excess = 0.0;  // max(0, dev - dpb) / dpb
  double stopband_excess = 0.0;  // max(0, mag - dsb) / dsb
  std::size_t nonzero_coefficients = 0;
  std::size_t zero_taps = 0;  // exact zeros in the impulse response
  std::size_t total_taps = 0;

  bool pass() const { return passband_ok && stopband_ok; }
  bool within_allowance(double fraction) const {
    return passband_excess <= fraction && stopband_excess <= fraction;
  }
};

FilterReport verify_filter(std::span<const double> x, const FilterSpec& spec, std::size_t dense_factor,
                           double tol = kVerifyTol);

}  // namespace sparsetree::filter
