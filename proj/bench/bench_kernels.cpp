// Serial reference vs OpenMP kernels on a synthetic vertex set the size of
// one full-cap generation (500 x 500 pairs in R^31).
//
//   bench_kernels [pairs_per_side] [dim] [repeats]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numeric>
#include <vector>

#include "sparsetree/filter_design.hpp"
#include "sparsetree/kernels.hpp"
#include "sparsetree/random.hpp"

using namespace sparsetree;

namespace {

double best_ms(int repeats, const std::function<void()>& fn) {
  double best = 1e300;
  for (int r = 0; r < repeats; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    best = std::min(best, std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

void row(const char* name, double serial_ms, double parallel_ms, bool identical) {
  std::printf("%-22s %10.2f %10.2f %8.2fx  %s\n", name, serial_ms, parallel_ms, serial_ms / parallel_ms,
              identical ? "identical" : "differs");
}

}  // namespace

int main(int argc, char** argv) {
  const std::size_t side = argc > 1 ? std::strtoul(argv[1], nullptr, 10) : 500;
  const std::size_t dim = argc > 2 ? std::strtoul(argv[2], nullptr, 10) : 31;
  const int repeats = argc > 3 ? std::atoi(argv[3]) : 5;
  const Coord d = dim / 2;

  Rng rng(7);
  std::vector<double> parents(2 * side * dim);
  for (std::size_t v = 0; v < 2 * side; ++v) {
    for (std::size_t k = 0; k < dim; ++k) parents[v * dim + k] = rng.uniform(-1.0, 1.0);
    parents[v * dim + d] = (v < side ? 1.0 : -1.0) * rng.uniform(0.1, 1.0);
  }
  std::vector<std::size_t> pos(side), neg(side);
  std::iota(pos.begin(), pos.end(), 0);
  std::iota(neg.begin(), neg.end(), side);
  const std::vector<Coord> stamp{0};

  const std::size_t n = side * side;
  std::vector<double> out_s(n * dim), out_p(n * dim);
  std::printf("threads %d, %zu vertices in R^%zu, best of %d\n\n", kernels::max_threads(), n, dim, repeats);
  std::printf("%-22s %10s %10s %9s\n", "kernel", "serial ms", "omp ms", "speedup");

  const double cs = best_ms(repeats, [&] { kernels::serial::combine_pairs(parents, dim, pos, neg, d, stamp, out_s); });
  const double cp =
      best_ms(repeats, [&] { kernels::parallel::combine_pairs(parents, dim, pos, neg, d, stamp, out_p); });
  row("combine_pairs", cs, cp, out_s == out_p);

  std::vector<std::size_t> ps(dim), ns(dim), pp(dim), np(dim);
  const double ss = best_ms(repeats, [&] { kernels::serial::sign_census(out_s, dim, kZeroTol, ps, ns); });
  const double sp = best_ms(repeats, [&] { kernels::parallel::sign_census(out_s, dim, kZeroTol, pp, np); });
  row("sign_census", ss, sp, ps == pp && ns == np);

  std::vector<double> weights(dim, 1.0), ks(n), kp(n);
  for (std::size_t k = 0; k < dim; ++k) weights[k] = 0.5 + 0.01 * static_cast<double>(k);
  const double ps_ms = best_ms(repeats, [&] { kernels::serial::projection_keys(out_s, dim, weights, ks); });
  const double pp_ms = best_ms(repeats, [&] { kernels::parallel::projection_keys(out_s, dim, weights, kp); });
  row("projection_keys", ps_ms, pp_ms, ks == kp);

  filter::FilterSpec spec;
  spec.half_length = dim;
  const HalfspaceSet set = filter::build_filter_set(spec);
  const std::size_t nv = std::min<std::size_t>(n, 20000);
  const std::span<const double> sub(out_s.data(), nv * dim);
  std::vector<double> vs(nv), vp(nv);
  const double hs = best_ms(repeats, [&] { kernels::serial::halfspace_violations(set.matrix(), set.rhs(), sub, vs); });
  const double hp =
      best_ms(repeats, [&] { kernels::parallel::halfspace_violations(set.matrix(), set.rhs(), sub, vp); });
  double worst = 0.0;
  for (std::size_t i = 0; i < nv; ++i) worst = std::max(worst, std::abs(vs[i] - vp[i]));
  std::printf("%-22s %10.2f %10.2f %8.2fx  max diff %.2e\n", "halfspace_violations", hs, hp, hs / hp, worst);
  return 0;
}
