#include "sparsetree/json_io.hpp"

#include <fstream>
#include <numbers>
#include <sstream>

#include "sparsetree/errors.hpp"

namespace sparsetree::io {
namespace {

template <typename T>
T field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) fail(ErrorCode::kParseError, std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception& e) {
    fail(ErrorCode::kParseError, std::string("field '") + key + "': " + e.what());
  }
}

Json census_json(const SignCensus& c) {
  return {{"coordinate", c.coordinate}, {"pos_count", c.pos_count}, {"neg_count", c.neg_count},
          {"zero_count", c.zero_count}};
}

}  // namespace

Json to_json(const HalfspaceSet& set) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < set.matrix().rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index k = 0; k < set.matrix().cols(); ++k) row.push_back(set.matrix()(i, k));
    rows.push_back(std::move(row));
  }
  Json rhs = Json::array();
  for (Eigen::Index i = 0; i < set.rhs().size(); ++i) rhs.push_back(set.rhs()[i]);
  return {{"dim", set.dim()}, {"rows", std::move(rows)}, {"rhs", std::move(rhs)}, {"label", set.label()}};
}

HalfspaceSet halfspace_from_json(const Json& j) {
  const auto dim = field<std::size_t>(j, "dim");
  const auto rows = field<std::vector<std::vector<double>>>(j, "rows");
  const auto rhs = field<std::vector<double>>(j, "rhs");
  const std::string label = j.contains("label") ? field<std::string>(j, "label") : std::string();
  if (dim < 1) fail(ErrorCode::kParseError, "dim must be >= 1");
  if (rows.size() != rhs.size()) fail(ErrorCode::kParseError, "rows and rhs lengths differ");
  Eigen::MatrixXd a(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(dim));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != dim) fail(ErrorCode::kParseError, "row " + std::to_string(i) + " length differs from dim");
    for (std::size_t k = 0; k < dim; ++k) a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = rows[i][k];
  }
  Eigen::VectorXd b = Eigen::Map<const Eigen::VectorXd>(rhs.data(), static_cast<Eigen::Index>(rhs.size()));
  return HalfspaceSet(std::move(a), std::move(b), label);
}

Json to_json(const Polytope& p) {
  Json verts = Json::array();
  for (std::size_t i = 0; i < p.size(); ++i) {
    const auto v = p.vertex(i);
    verts.push_back(Json(std::vector<double>(v.begin(), v.end())));
  }
  return {{"dim", p.dim()}, {"vanished", p.vanished()}, {"generation", p.generation()}, {"vertices", std::move(verts)}};
}

Polytope polytope_from_json(const Json& j) {
  const auto vanished = field<std::vector<Coord>>(j, "vanished");
  const auto vertices = field<std::vector<std::vector<double>>>(j, "vertices");
  std::size_t dim = 0;
  if (j.contains("dim")) {
    dim = field<std::size_t>(j, "dim");
  } else if (!vertices.empty()) {
    dim = vertices.front().size();
  } else {
    fail(ErrorCode::kParseError, "cannot infer dimension of an empty polytope");
  }
  if (j.contains("generation") && field<std::size_t>(j, "generation") != vanished.size()) {
    fail(ErrorCode::kParseError, "generation differs from the number of vanished coordinates");
  }
  for (const auto& v : vertices) {
    if (v.size() != dim) fail(ErrorCode::kParseError, "vertex length differs from dimension");
  }
  Polytope p = Polytope::from_vertices(dim, vertices, vanished);
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (Coord k : p.vanished()) {
      if (p.vertex(i)[k] != 0.0) fail(ErrorCode::kParseError, "vertex is nonzero at a vanished coordinate");
    }
  }
  return p;
}

Json to_json(const SearchTrace& trace, std::size_t max_vertices) {
  Json gens = Json::array();
  for (const GenerationRecord& g : trace.per_generation) {
    gens.push_back({{"chosen_d", g.chosen_d},
                    {"census", census_json(g.census)},
                    {"parent_count", g.parent_count},
                    {"raw_count", g.raw_count},
                    {"unique_count", g.unique_count}});
  }
  Json poly;
  const Polytope& p = trace.final_polytope;
  if (p.size() > max_vertices) {
    poly = {{"dim", p.dim()}, {"vanished", p.vanished()}, {"generation", p.generation()},
            {"vertex_count", p.size()}, {"vertices_elided", true}};
  } else {
    poly = to_json(p);
    poly["vertex_count"] = p.size();
    poly["vertices_elided"] = false;
  }
  return {{"walk", trace.walk},
          {"walk_length", trace.walk.size()},
          {"per_generation", std::move(gens)},
          {"final_polytope", std::move(poly)},
          {"chosen_solution", trace.chosen_solution},
          {"restarts", trace.restarts},
          {"merges", trace.merges}};
}

SearchTrace trace_from_json(const Json& j) {
  SearchTrace t;
  t.walk = field<std::vector<Coord>>(j, "walk");
  t.chosen_solution = field<std::vector<double>>(j, "chosen_solution");
  if (j.contains("restarts")) t.restarts = field<std::size_t>(j, "restarts");
  if (j.contains("merges")) t.merges = field<std::size_t>(j, "merges");
  if (j.contains("per_generation")) {
    for (const Json& g : j.at("per_generation")) {
      GenerationRecord r;
      r.chosen_d = field<Coord>(g, "chosen_d");
      const Json& c = g.at("census");
      r.census = {field<Coord>(c, "coordinate"), field<std::size_t>(c, "pos_count"), field<std::size_t>(c, "neg_count"),
                  field<std::size_t>(c, "zero_count")};
      r.parent_count = field<std::size_t>(g, "parent_count");
      r.raw_count = field<std::size_t>(g, "raw_count");
      r.unique_count = field<std::size_t>(g, "unique_count");
      t.per_generation.push_back(r);
    }
  }
  if (j.contains("final_polytope")) {
    const Json& fp = j.at("final_polytope");
    if (fp.value("vertices_elided", false)) {
      t.final_polytope = Polytope(field<std::size_t>(fp, "dim"), field<std::vector<Coord>>(fp, "vanished"));
    } else {
      t.final_polytope = polytope_from_json(fp);
    }
  } else if (!t.chosen_solution.empty()) {
    t.final_polytope = Polytope(t.chosen_solution.size());
  }
  return t;
}

Json to_json(const filter::FilterSpec& spec) {
  return {{"omega_pb_over_pi", spec.omega_pb / std::numbers::pi},
          {"omega_sb_over_pi", spec.omega_sb / std::numbers::pi},
          {"delta_pb", spec.delta_pb},
          {"delta_sb", spec.delta_sb},
          {"half_length_N", spec.half_length},
          {"grid_K", spec.grid_size == 0 ? Json(nullptr) : Json(spec.grid_size)}};
}

filter::FilterSpec filter_spec_from_json(const Json& j) {
  filter::FilterSpec s;
  s.omega_pb = field<double>(j, "omega_pb_over_pi") * std::numbers::pi;
  s.omega_sb = field<double>(j, "omega_sb_over_pi") * std::numbers::pi;
  s.delta_pb = field<double>(j, "delta_pb");
  s.delta_sb = field<double>(j, "delta_sb");
  s.half_length = field<std::size_t>(j, "half_length_N");
  s.grid_size = (!j.contains("grid_K") || j.at("grid_K").is_null()) ? 0 : field<std::size_t>(j, "grid_K");
  try {
    s.validate();
  } catch (const Error& e) {
    fail(ErrorCode::kParseError, e.what());
  }
  return s;
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kParseError, "cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    fail(ErrorCode::kParseError, path.string() + ": " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const Json& j) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::kInvalidArgument, "cannot write " + path.string());
  out << j.dump(1) << '\n';
}

}  // namespace sparsetree::io
