#pragma once

#include <filesystem>
#include <optional>
#include <string_view>
#include <vector>

#include "sparsetree/filter_design.hpp"
#include "sparsetree/json_io.hpp"
#include "sparsetree/tree_search.hpp"

namespace sparsetree::cli {

struct EmitFlags {
  bool trace_json = true;
  bool impulse_csv = true;
  bool plot_script = true;
  bool summary = true;
  bool checkpoint = false;  // leaf polytope as polytope JSON
};

struct RunConfig {
  std::optional<filter::FilterSpec> filter;
  std::optional<std::filesystem::path> halfspace_file;
  SearchConfig search;
  std::filesystem::path output_dir = "out";
  EmitFlags emit;
  std::size_t trace_vertex_limit = 1000;

  HalfspaceSet build_set() const;
};

// Throws Error(kParseError) on schema violations. Relative paths inside the
// document resolve against `base_dir`.
RunConfig parse_run_config(const io::Json& doc, const std::filesystem::path& base_dir);

// Applies "a.b.c=value" to the document; value is parsed as JSON when
// possible and taken as a plain string otherwise.
void apply_override(io::Json& doc, std::string_view assignment);

}  // namespace sparsetree::cli
