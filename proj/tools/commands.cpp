#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "run_config.hpp"
#include "sparsetree/errors.hpp"
#include "sparsetree/oracle.hpp"

namespace sparsetree::cli {
namespace {

namespace fs = std::filesystem;
using io::Json;
using Clock = std::chrono::steady_clock;

struct GlobalOptions {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> sets;
  std::string out;
  bool quiet = false;
};

RunConfig load_config(const GlobalOptions& g) {
  if (g.config.empty()) fail(ErrorCode::kParseError, "--config is required");
  Json doc = io::read_json_file(g.config);
  for (const std::string& s : g.sets) apply_override(doc, s);
  if (g.seed) apply_override(doc, "search.seed=" + std::to_string(*g.seed));
  if (!g.out.empty()) doc["output_dir"] = g.out;
  return parse_run_config(doc, fs::path(g.config).parent_path());
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParseError:
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kDimensionMismatch:
    case ErrorCode::kPatternMismatch: return kExitConfig;
    case ErrorCode::kInfeasibleSet: return kExitInfeasible;
    case ErrorCode::kSizeLimitExceeded: return kExitSizeLimit;
    default: return kExitSolver;
  }
}

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string join(const std::vector<Coord>& v) {
  std::ostringstream s;
  for (std::size_t i = 0; i < v.size(); ++i) s << (i ? " " : "") << v[i];
  return s.str();
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::string timestamp_utc() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream s;
  s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return s.str();
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) fail(ErrorCode::kInvalidArgument, "cannot write " + path.string());
  f << text;
}

// impulse.csv: header "n,h", then one "index,value" row per tap.
void write_impulse_csv(const fs::path& path, const filter::ImpulseResponse& h) {
  std::ostringstream s;
  s << "n,h\n";
  for (std::size_t n = 0; n < h.taps.size(); ++n) s << n << ',' << fmt17(h.taps[n]) << '\n';
  write_text(path, s.str());
}

Vector taps_to_x(const std::vector<double>& taps, std::size_t half_length) {
  if (taps.size() != 2 * half_length - 1) {
    fail(ErrorCode::kParseError, "expected " + std::to_string(2 * half_length - 1) + " taps, found " +
                                     std::to_string(taps.size()));
  }
  for (std::size_t k = 0; k < taps.size() / 2; ++k) {
    const double a = taps[k];
    const double b = taps[taps.size() - 1 - k];
    if (std::abs(a - b) > 1e-12 * std::max({1.0, std::abs(a), std::abs(b)})) {
      fail(ErrorCode::kParseError, "impulse response is not symmetric at tap " + std::to_string(k));
    }
  }
  return filter::impulse_to_x({taps, half_length - 1});
}

Vector read_impulse_csv(const fs::path& path, std::size_t half_length) {
  std::ifstream f(path);
  if (!f) fail(ErrorCode::kParseError, "cannot open " + path.string());
  std::string line;
  if (!std::getline(f, line) || line != "n,h") fail(ErrorCode::kParseError, "impulse CSV must start with 'n,h'");
  std::vector<double> taps;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) fail(ErrorCode::kParseError, "malformed CSV row '" + line + "'");
    std::size_t used_idx = 0;
    std::size_t used_val = 0;
    std::size_t idx = 0;
    double val = 0.0;
    try {
      const std::string a = line.substr(0, comma);
      const std::string b = line.substr(comma + 1);
      idx = std::stoul(a, &used_idx);
      val = std::stod(b, &used_val);
      if (used_idx != a.size() || used_val != b.size()) throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
      fail(ErrorCode::kParseError, "malformed CSV row '" + line + "'");
    }
    if (idx != taps.size()) fail(ErrorCode::kParseError, "CSV tap indices must run 0, 1, 2, ...");
    taps.push_back(val);
  }
  return taps_to_x(taps, half_length);
}

Vector read_solution(const fs::path& path, std::size_t half_length) {
  if (path.extension() == ".csv") return read_impulse_csv(path, half_length);
  const Json j = io::read_json_file(path);
  Vector x;
  if (j.contains("chosen_solution")) {
    x = io::trace_from_json(j).chosen_solution;
  } else if (j.contains("taps")) {
    std::vector<double> taps;
    try {
      taps = j.at("taps").get<std::vector<double>>();
    } catch (const Json::exception& e) {
      fail(ErrorCode::kParseError, std::string("taps: ") + e.what());
    }
    x = taps_to_x(taps, half_length);
  } else {
    fail(ErrorCode::kParseError, "JSON input needs 'chosen_solution' or 'taps'");
  }
  if (x.size() != half_length) fail(ErrorCode::kParseError, "solution length differs from N");
  return x;
}

std::string report_text(const filter::FilterReport& r, const filter::FilterSpec& spec) {
  std::ostringstream s;
  s << std::setprecision(6);
  s << "dense factor " << r.dense_factor << " (" << r.passband_points << " passband, " << r.stopband_points
    << " stopband points)\n";
  s << "  passband max |T-1| = " << r.max_passband_deviation << " (limit " << spec.delta_pb << ") "
    << (r.passband_ok ? "ok" : "FAIL") << ", excess " << 100.0 * r.passband_excess << "%\n";
  s << "  stopband max |T|   = " << r.max_stopband_magnitude << " (limit " << spec.delta_sb << ") "
    << (r.stopband_ok ? "ok" : "FAIL") << ", excess " << 100.0 * r.stopband_excess << "%\n";
  s << "  nonzero coefficients " << r.nonzero_coefficients << ", zero taps " << r.zero_taps << " of "
    << r.total_taps << '\n';
  return s.str();
}

void write_filter_outputs(const RunConfig& rc, const Vector& x) {
  const filter::FilterSpec& spec = *rc.filter;
  const filter::ImpulseResponse h = filter::x_to_impulse(x);
  if (rc.emit.impulse_csv) {
    write_impulse_csv(rc.output_dir / "impulse.csv", h);
    io::write_json_file(rc.output_dir / "impulse.json", Json{{"center", h.center}, {"taps", h.taps}});
    std::ostringstream a;
    a << "omega_over_pi,amplitude\n";
    constexpr std::size_t kPoints = 2048;
    for (std::size_t i = 0; i <= kPoints; ++i) {
      const double f = static_cast<double>(i) / kPoints;
      a << fmt17(f) << ',' << fmt17(filter::amplitude(x, f * std::numbers::pi)) << '\n';
    }
    write_text(rc.output_dir / "amplitude.csv", a.str());
  }
  if (rc.emit.plot_script) {
    std::ostringstream p;
    p << "import csv\n"
         "import matplotlib.pyplot as plt\n\n"
         "def load(name):\n"
         "    with open(name) as f:\n"
         "        rows = list(csv.reader(f))[1:]\n"
         "    return [float(r[0]) for r in rows], [float(r[1]) for r in rows]\n\n"
         "n, h = load('impulse.csv')\n"
         "w, t = load('amplitude.csv')\n"
         "fig, (ax1, ax2) = plt.subplots(2, 1, figsize=(8, 7))\n"
         "ax1.stem(n, h)\n"
         "ax1.set_xlabel('n')\n"
         "ax1.set_ylabel('h[n]')\n"
         "ax2.plot(w, t)\n"
      << "for y in (" << fmt17(1 + spec.delta_pb) << ", " << fmt17(1 - spec.delta_pb) << ", "
      << fmt17(spec.delta_sb) << ", " << fmt17(-spec.delta_sb) << "):\n"
      << "    ax2.axhline(y, color='gray', linewidth=0.5)\n"
      << "for x in (" << fmt17(spec.omega_pb / std::numbers::pi) << ", " << fmt17(spec.omega_sb / std::numbers::pi)
      << "):\n"
      << "    ax2.axvline(x, color='gray', linestyle='--', linewidth=0.5)\n"
         "ax2.set_xlabel('omega / pi')\n"
         "ax2.set_ylabel('T(omega)')\n"
         "fig.tight_layout()\n"
         "fig.savefig('filter.png', dpi=150)\n";
    write_text(rc.output_dir / "plot_filter.py", p.str());
  }
}

int cmd_design(const GlobalOptions& g, std::ostream& out) {
  const RunConfig rc = load_config(g);
  const HalfspaceSet set = rc.build_set();
  fs::create_directories(rc.output_dir);
  const auto t0 = Clock::now();

  SearchTrace trace;
  Json trace_doc;
  std::vector<WidthRecord> widths;
  if (rc.search.protocol == Protocol::kBfs) {
    BreadthFirstResult r = run_breadth_first(set, rc.search);
    std::size_t best = 0;
    Json leaf_walks = Json::array();
    for (std::size_t i = 0; i < r.leaves.size(); ++i) {
      leaf_walks.push_back(r.leaves[i].walk.size());
      if (r.leaves[i].walk.size() > r.leaves[best].walk.size()) best = i;
    }
    trace = std::move(r.leaves.at(best));
    widths = r.widths;
    trace_doc = io::to_json(trace, rc.trace_vertex_limit);
    Json w = Json::array();
    for (const WidthRecord& rec : widths) {
      w.push_back({{"generation", rec.generation}, {"children", rec.children}, {"merged", rec.merged},
                   {"bound", rec.bound}, {"kept", rec.kept}});
    }
    trace_doc["bfs"] = {{"widths", std::move(w)}, {"leaf_walk_lengths", std::move(leaf_walks)}};
  } else {
    trace = run_depth_first(set, rc.search);
    trace_doc = io::to_json(trace, rc.trace_vertex_limit);
  }
  const double total_ms = ms_since(t0);

  if (rc.emit.trace_json) io::write_json_file(rc.output_dir / "trace.json", trace_doc);
  if (rc.emit.checkpoint) io::write_json_file(rc.output_dir / "leaf_polytope.json", io::to_json(trace.final_polytope));
  std::optional<filter::FilterReport> strict, dense;
  if (rc.filter) {
    write_filter_outputs(rc, trace.chosen_solution);
    strict = filter::verify_filter(trace.chosen_solution, *rc.filter, 1);
    dense = filter::verify_filter(trace.chosen_solution, *rc.filter, 8);
  }

  const std::size_t dim = set.dim();
  const std::size_t nnz = l0_norm(trace.chosen_solution);
  std::ostringstream s;
  s << std::fixed << std::setprecision(1);
  s << "sparsetree design summary\n";
  s << "generated " << timestamp_utc() << "\n\n";
  s << "problem: " << (set.label().empty() ? "half-space set" : set.label()) << " (N = " << dim << ", "
    << set.num_rows() << " half-spaces)\n";
  s << "search: " << to_string(rc.search.protocol) << ", seed " << rc.search.seed << ", M " << rc.search.root_vertices
    << ", caps " << rc.search.cap_pos << "/" << rc.search.cap_neg << ", subtree exploration "
    << to_string(rc.search.subtree_exploration) << "\n\n";
  s << "walk length: " << trace.walk.size() << "\n";
  s << "walk: " << join(trace.walk) << "\n";
  s << "guaranteed nonzeros (N - walk): " << dim - trace.walk.size() << "\n";
  s << "chosen solution nonzeros: " << nnz << "\n";
  s << "leaf vertices: " << trace.final_polytope.size() << "\n";
  s << "restarts: " << trace.restarts << ", merges: " << trace.merges << "\n\n";
  s << "timings (ms)\n";
  s << "  root sampling " << trace.root_elapsed_ms << "\n";
  for (std::size_t gi = 0; gi < trace.per_generation.size(); ++gi) {
    const GenerationRecord& r = trace.per_generation[gi];
    s << "  generation " << gi + 1 << ": d = " << r.chosen_d << ", " << r.raw_count << " pairs -> " << r.unique_count
      << " vertices, " << r.elapsed_ms << "\n";
  }
  s << "  total " << total_ms << "\n";
  if (strict) {
    s << "\nverification\n" << report_text(*strict, *rc.filter) << report_text(*dense, *rc.filter);
  }
  if (rc.emit.summary) write_text(rc.output_dir / "summary.txt", s.str());
  if (!g.quiet) {
    out << "walk length " << trace.walk.size() << ", nonzeros " << nnz << " of " << dim << ", " << std::fixed
        << std::setprecision(1) << total_ms / 1000.0 << " s; outputs in " << rc.output_dir.string() << '\n';
  }
  return kExitOk;
}

int cmd_verify(const GlobalOptions& g, const std::string& input, std::size_t dense_factor, double allowance,
               std::ostream& out) {
  const RunConfig rc = load_config(g);
  if (!rc.filter) fail(ErrorCode::kParseError, "verify needs a filter problem in the config");
  const Vector x = read_solution(input, rc.filter->half_length);
  const filter::FilterReport r = filter::verify_filter(x, *rc.filter, dense_factor);
  const bool ok = allowance > 0.0 ? r.within_allowance(allowance) : r.pass();
  if (!g.quiet) {
    out << report_text(r, *rc.filter);
    out << (ok ? "PASS" : "FAIL") << '\n';
  }
  return ok ? kExitOk : kExitVerifyFailed;
}

int cmd_compare_orders(const GlobalOptions& g, const std::vector<std::uint64_t>& seeds, std::ostream& out) {
  if (seeds.size() < 2) fail(ErrorCode::kInvalidArgument, "compare-orders needs at least two seeds");
  RunConfig rc = load_config(g);
  const HalfspaceSet set = rc.build_set();
  fs::create_directories(rc.output_dir);
  SearchConfig base = rc.search;
  if (!base.fixed_order) base.fixed_order = fixed_order_from_l1(set);

  std::ostringstream csv;
  csv << "seed,walk_runtime,walk_fixed\n";
  std::vector<double> runtime_walks, fixed_walks;
  for (std::uint64_t seed : seeds) {
    SearchConfig c = base;
    c.seed = seed;
    Rng sampling = Rng(seed).substream("sampling");
    c.resume_from = init_root(set, c.root_vertices, sampling);
    c.protocol = Protocol::kDfsRuntime;
    const std::size_t w_rt = run_depth_first(set, c).walk.size();
    c.protocol = Protocol::kDfsFixedOrder;
    const std::size_t w_fx = run_depth_first(set, c).walk.size();
    csv << seed << ',' << w_rt << ',' << w_fx << '\n';
    runtime_walks.push_back(static_cast<double>(w_rt));
    fixed_walks.push_back(static_cast<double>(w_fx));
    if (!g.quiet) out << "seed " << seed << ": runtime " << w_rt << ", fixed " << w_fx << '\n';
  }
  write_text(rc.output_dir / "compare_orders.csv", csv.str());
  out << "median walk: runtime rule " << median(runtime_walks) << ", fixed order " << median(fixed_walks) << '\n';
  return kExitOk;
}

int cmd_oracle(const GlobalOptions& g, std::ostream& out) {
  const RunConfig rc = load_config(g);
  const HalfspaceSet set = rc.build_set();
  if (set.dim() > kOracleMaxDim) {
    fail(ErrorCode::kSizeLimitExceeded, "oracle supports N <= " + std::to_string(kOracleMaxDim));
  }
  if (rc.search.root_vertices > kOracleMaxHullVertices) {
    fail(ErrorCode::kSizeLimitExceeded, "oracle supports M <= " + std::to_string(kOracleMaxHullVertices));
  }
  const OracleResult over_set = brute_force_over_set(set);
  SearchConfig c = rc.search;
  if (c.protocol == Protocol::kBfs) c.protocol = Protocol::kDfsRuntime;
  if (!c.resume_from) {
    Rng sampling = Rng(c.seed).substream("sampling");
    c.resume_from = init_root(set, c.root_vertices, sampling);
  }
  const OracleResult over_hull = brute_force_over_hull(*c.resume_from);
  const SearchTrace greedy = run_depth_first(set, c);
  const long gap = static_cast<long>(over_hull.max_vanish) - static_cast<long>(greedy.walk.size());
  out << "max_vanish over S: " << over_set.max_vanish << " (witness: " << join(over_set.witness) << ")\n";
  out << "max_vanish over conv(root): " << over_hull.max_vanish << " (witness: " << join(over_hull.witness) << ")\n";
  out << "greedy walk length: " << greedy.walk.size() << " (walk: " << join(greedy.walk) << ")\n";
  out << "gap: " << gap << '\n';
  return kExitOk;
}

std::vector<std::uint64_t> parse_seed_list(const std::vector<std::string>& items) {
  std::vector<std::uint64_t> seeds;
  for (const std::string& item : items) {
    std::stringstream ss(item);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      if (tok.empty()) continue;
      try {
        std::size_t used = 0;
        seeds.push_back(std::stoull(tok, &used));
        if (used != tok.size()) throw std::invalid_argument(tok);
      } catch (const std::exception&) {
        fail(ErrorCode::kParseError, "bad seed '" + tok + "'");
      }
    }
  }
  return seeds;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sparse solutions of convex feasibility problems by greedy polytope tree search", "sparsetree"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions g;
  std::uint64_t seed = 0;
  auto* seed_opt = app.add_option("--seed", seed, "Override search.seed");
  app.add_option("--config", g.config, "Run configuration (JSON)");
  app.add_option("--set", g.sets, "Override a config leaf, e.g. search.M=200");
  app.add_option("--out", g.out, "Override output_dir");
  app.add_flag("--quiet", g.quiet, "Suppress progress output");

  auto* design = app.add_subcommand("design", "Run the configured search and write artifacts");

  auto* verify = app.add_subcommand("verify", "Check an impulse response or trace against the filter spec");
  std::string input;
  std::size_t dense_factor = 1;
  double allowance = 0.0;
  verify->add_option("input", input, "impulse CSV, impulse JSON or trace JSON")->required();
  verify->add_option("--dense-factor", dense_factor, "Grid refinement factor")->check(CLI::PositiveNumber);
  verify->add_option("--allowance", allowance, "Accepted relative ripple excess (0 = strict)")
      ->check(CLI::NonNegativeNumber);

  auto* compare = app.add_subcommand("compare-orders", "Runtime product rule vs fixed 1-norm order");
  std::vector<std::string> seed_items;
  compare->add_option("--seeds", seed_items, "Seeds, comma separated or repeated")->required();

  auto* oracle = app.add_subcommand("oracle", "Brute-force maximum vanish count for small problems");

  std::vector<std::string> argv_rev(args.rbegin(), args.rend());
  try {
    app.parse(argv_rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  if (seed_opt->count() > 0) g.seed = seed;

  try {
    if (design->parsed()) return cmd_design(g, out);
    if (verify->parsed()) return cmd_verify(g, input, dense_factor, allowance, out);
    if (compare->parsed()) return cmd_compare_orders(g, parse_seed_list(seed_items), out);
    if (oracle->parsed()) return cmd_oracle(g, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitSolver;
  }
  return kExitConfig;
}

}  // namespace sparsetree::cli
