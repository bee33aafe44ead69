#include "run_config.hpp"

#include <set>

#include "sparsetree/errors.hpp"

namespace sparsetree::cli {
namespace {

using io::Json;

Protocol parse_protocol(const std::string& s) {
  if (s == "dfs_runtime") return Protocol::kDfsRuntime;
  if (s == "dfs_fixed_order") return Protocol::kDfsFixedOrder;
  if (s == "bfs") return Protocol::kBfs;
  fail(ErrorCode::kParseError, "unknown protocol '" + s + "'");
}

SubtreeExploration parse_exploration(const std::string& s) {
  if (s == "off") return SubtreeExploration::kOff;
  if (s == "leaf_restart") return SubtreeExploration::kLeafRestart;
  if (s == "leaf_restart_plus_merge") return SubtreeExploration::kLeafRestartPlusMerge;
  fail(ErrorCode::kParseError, "unknown subtree_exploration '" + s + "'");
}

SolutionPick parse_pick(const std::string& s) {
  if (s == "uniform") return SolutionPick::kUniform;
  if (s == "min_residual") return SolutionPick::kMinResidual;
  fail(ErrorCode::kParseError, "unknown solution_pick '" + s + "'");
}

void reject_unknown(const Json& obj, const std::set<std::string>& known, const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!known.contains(it.key())) fail(ErrorCode::kParseError, "unknown key '" + it.key() + "' in " + where);
  }
}

template <typename T>
T get_or(const Json& obj, const char* key, T fallback) {
  if (!obj.contains(key) || obj.at(key).is_null()) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const Json::exception& e) {
    fail(ErrorCode::kParseError, std::string("key '") + key + "': " + e.what());
  }
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  const std::filesystem::path path(p);
  return path.is_absolute() ? path : base / path;
}

SearchConfig parse_search(const Json& s, const std::filesystem::path& base) {
  reject_unknown(s,
                 {"protocol", "M", "cap_pos", "cap_neg", "seed", "carry_zero_vertices", "subtree_exploration",
                  "max_generations", "bfs_width_cap", "fixed_order", "solution_pick", "resume_from", "merge_with"},
                 "search");
  SearchConfig c;
  c.protocol = parse_protocol(get_or<std::string>(s, "protocol", "dfs_runtime"));
  c.root_vertices = get_or<std::size_t>(s, "M", c.root_vertices);
  c.cap_pos = get_or<std::size_t>(s, "cap_pos", c.cap_pos);
  c.cap_neg = get_or<std::size_t>(s, "cap_neg", c.cap_neg);
  c.seed = get_or<std::uint64_t>(s, "seed", c.seed);
  c.carry_zero_vertices = get_or<bool>(s, "carry_zero_vertices", false);
  c.subtree_exploration = parse_exploration(get_or<std::string>(s, "subtree_exploration", "off"));
  if (s.contains("max_generations") && !s.at("max_generations").is_null()) {
    c.max_generations = get_or<std::size_t>(s, "max_generations", 0);
  }
  c.bfs_width_cap = get_or<std::size_t>(s, "bfs_width_cap", c.bfs_width_cap);
  if (s.contains("fixed_order") && !s.at("fixed_order").is_null()) {
    c.fixed_order = get_or<std::vector<Coord>>(s, "fixed_order", {});
  }
  c.solution_pick = parse_pick(get_or<std::string>(s, "solution_pick", "uniform"));
  if (s.contains("resume_from") && !s.at("resume_from").is_null()) {
    c.resume_from = io::polytope_from_json(io::read_json_file(resolve(base, get_or<std::string>(s, "resume_from", ""))));
  }
  for (const std::string& p : get_or<std::vector<std::string>>(s, "merge_with", {})) {
    c.merge_candidates.push_back(io::polytope_from_json(io::read_json_file(resolve(base, p))));
  }
  return c;
}

}  // namespace

HalfspaceSet RunConfig::build_set() const {
  if (filter) return filter::build_filter_set(*filter);
  return io::halfspace_from_json(io::read_json_file(*halfspace_file));
}

RunConfig parse_run_config(const Json& doc, const std::filesystem::path& base_dir) {
  if (!doc.is_object()) fail(ErrorCode::kParseError, "config must be a JSON object");
  reject_unknown(doc, {"problem", "search", "output_dir", "emit", "trace_vertex_limit", "description"}, "config");
  RunConfig rc;
  if (!doc.contains("problem") || !doc.at("problem").is_object()) {
    fail(ErrorCode::kParseError, "config needs a 'problem' object");
  }
  const Json& problem = doc.at("problem");
  reject_unknown(problem, {"filter", "halfspace_file"}, "problem");
  const bool has_filter = problem.contains("filter");
  const bool has_file = problem.contains("halfspace_file");
  if (has_filter == has_file) fail(ErrorCode::kParseError, "problem needs exactly one of 'filter' or 'halfspace_file'");
  if (has_filter) {
    rc.filter = io::filter_spec_from_json(problem.at("filter"));
  } else {
    rc.halfspace_file = resolve(base_dir, get_or<std::string>(problem, "halfspace_file", ""));
  }
  rc.search = parse_search(doc.value("search", Json::object()), base_dir);
  rc.output_dir = get_or<std::string>(doc, "output_dir", "out");
  rc.trace_vertex_limit = get_or<std::size_t>(doc, "trace_vertex_limit", rc.trace_vertex_limit);
  if (doc.contains("emit")) {
    const Json& e = doc.at("emit");
    reject_unknown(e, {"trace_json", "impulse_csv", "plot_script", "summary", "checkpoint"}, "emit");
    rc.emit.trace_json = get_or<bool>(e, "trace_json", true);
    rc.emit.impulse_csv = get_or<bool>(e, "impulse_csv", true);
    rc.emit.plot_script = get_or<bool>(e, "plot_script", true);
    rc.emit.summary = get_or<bool>(e, "summary", true);
    rc.emit.checkpoint = get_or<bool>(e, "checkpoint", false);
  }
  return rc;
}

void apply_override(Json& doc, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    fail(ErrorCode::kParseError, "--set expects path=value, got '" + std::string(assignment) + "'");
  }
  const std::string path(assignment.substr(0, eq));
  const std::string raw(assignment.substr(eq + 1));
  Json value;
  try {
    value = Json::parse(raw);
  } catch (const Json::parse_error&) {
    value = raw;
  }
  Json* node = &doc;
  std::size_t start = 0;
  while (true) {
    const auto dot = path.find('.', start);
    const std::string key = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (key.empty()) fail(ErrorCode::kParseError, "empty key in --set path '" + path + "'");
    if (!node->is_object()) fail(ErrorCode::kParseError, "--set path '" + path + "' crosses a non-object");
    if (dot == std::string::npos) {
      (*node)[key] = std::move(value);
      return;
    }
    node = &(*node)[key];
    if (node->is_null()) *node = Json::object();
    start = dot + 1;
  }
}

}  // namespace sparsetree::cli
