#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"
#include "sparsetree/feasible_set.hpp"
#include "sparsetree/filter_design.hpp"
#include "sparsetree/polytope.hpp"
#include "sparsetree/tree_search.hpp"

namespace sparsetree::io {

using Json = nlohmann::json;

// {"dim": N, "rows": [[...], ...], "rhs": [...], "label": "..."}
Json to_json(const HalfspaceSet& set);
HalfspaceSet halfspace_from_json(const Json& j);

// {"vanished": [...], "generation": g, "vertices": [[...], ...]}
Json to_json(const Polytope& p);
Polytope polytope_from_json(const Json& j);

// Trace document. Timings are left out so identical runs serialize to
// identical bytes; the final polytope's vertices are replaced by
// "vertices_elided": true when it holds more than `max_vertices`.
Json to_json(const SearchTrace& trace, std::size_t max_vertices = 1000);
SearchTrace trace_from_json(const Json& j);

// {"omega_pb_over_pi", "omega_sb_over_pi", "delta_pb", "delta_sb", "half_length_N", "grid_K"}
Json to_json(const filter::FilterSpec& spec);
filter::FilterSpec filter_spec_from_json(const Json& j);

Json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const Json& j);

}  // namespace sparsetree::io
