#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "commands.hpp"
#include "run_config.hpp"
#include "sparsetree/errors.hpp"

namespace fs = std::filesystem;
using sparsetree::cli::run_cli;
using sparsetree::io::Json;

namespace {

const fs::path kConfigs = SPARSETREE_CONFIG_DIR;

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("sparsetree_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p, std::ios::binary) << text; }

}  // namespace

TEST_CASE("--set overrides") {
  Json doc = Json::parse(R"({"search": {"M": 500}})");
  sparsetree::cli::apply_override(doc, "search.M=20");
  sparsetree::cli::apply_override(doc, "search.protocol=bfs");
  sparsetree::cli::apply_override(doc, "emit.checkpoint=true");
  CHECK(doc["search"]["M"] == 20);
  CHECK(doc["search"]["protocol"] == "bfs");
  CHECK(doc["emit"]["checkpoint"] == true);
  CHECK_THROWS_AS(sparsetree::cli::apply_override(doc, "novalue"), sparsetree::Error);
  CHECK_THROWS_AS(sparsetree::cli::apply_override(doc, "search.M.deep=1"), sparsetree::Error);
}

TEST_CASE("config schema") {
  const Json both = Json::parse(R"({"problem": {"filter": {}, "halfspace_file": "x.json"}})");
  CHECK_THROWS_AS(sparsetree::cli::parse_run_config(both, "."), sparsetree::Error);
  const Json typo = Json::parse(R"({"problem": {"halfspace_file": "x.json"}, "serach": {}})");
  CHECK_THROWS_AS(sparsetree::cli::parse_run_config(typo, "."), sparsetree::Error);
  const Json proto = Json::parse(R"({"problem": {"halfspace_file": "x.json"}, "search": {"protocol": "dfs"}})");
  CHECK_THROWS_AS(sparsetree::cli::parse_run_config(proto, "."), sparsetree::Error);
  const auto rc = sparsetree::cli::parse_run_config(
      Json::parse(R"({"problem": {"halfspace_file": "x.json"}, "search": {"M": 7, "fixed_order": [1, 0]}})"), "base");
  CHECK(rc.search.root_vertices == 7);
  CHECK(*rc.halfspace_file == fs::path("base") / "x.json");
  CHECK(rc.search.fixed_order == std::vector<std::size_t>{1, 0});
}

TEST_CASE("design on the triangle") {
  const fs::path out = scratch("triangle");
  const Run r = cli({"design", "--config", (kConfigs / "toy_triangle.json").string(), "--out", out.string()});
  REQUIRE(r.code == 0);
  const Json trace = sparsetree::io::read_json_file(out / "trace.json");
  CHECK(trace.at("walk_length") == 2);
  CHECK(trace.at("chosen_solution") == Json::array({0.0, 0.0}));
  const std::string summary = slurp(out / "summary.txt");
  CHECK(summary.find("walk length: 2") != std::string::npos);
  CHECK_FALSE(fs::exists(out / "impulse.csv"));  // not a filter problem
}

TEST_CASE("design exit codes") {
  const fs::path dir = scratch("codes");
  CHECK(cli({"design"}).code == 1);
  CHECK(cli({"design", "--config", (dir / "missing.json").string()}).code == 1);
  CHECK(cli({"bogus"}).code == 1);

  write(dir / "empty_set.json", R"({"dim": 1, "rows": [[1], [-1]], "rhs": [-1, -1]})");
  write(dir / "empty.json", R"({"problem": {"halfspace_file": "empty_set.json"}, "search": {"M": 3}})");
  const Run infeasible = cli({"design", "--config", (dir / "empty.json").string(), "--out", (dir / "o").string()});
  CHECK(infeasible.code == 2);
  CHECK_FALSE(infeasible.err.empty());

  write(dir / "ray_set.json", R"({"dim": 1, "rows": [[-1]], "rhs": [0]})");
  write(dir / "ray.json", R"({"problem": {"halfspace_file": "ray_set.json"}, "search": {"M": 3}})");
  CHECK(cli({"design", "--config", (dir / "ray.json").string(), "--out", (dir / "o").string()}).code == 3);
  CHECK(cli({"design", "--config", (kConfigs / "toy_triangle.json").string(), "--set", "search.M=1", "--out",
             (dir / "o").string()})
            .code == 1);
}

TEST_CASE("smoke design, verify and determinism") {
  const fs::path a = scratch("smoke_a");
  const fs::path b = scratch("smoke_b");
  const std::string cfg = (kConfigs / "smoke_15.json").string();
  REQUIRE(cli({"design", "--config", cfg, "--out", a.string(), "--quiet"}).code == 0);
  REQUIRE(cli({"design", "--config", cfg, "--out", b.string(), "--quiet", "--seed", "1"}).code == 0);
  CHECK(slurp(a / "trace.json") == slurp(b / "trace.json"));
  for (const char* f : {"impulse.csv", "impulse.json", "amplitude.csv", "plot_filter.py", "summary.txt"}) {
    CHECK(fs::exists(a / f));
  }
  CHECK(slurp(a / "impulse.csv").rfind("n,h\n", 0) == 0);

  CHECK(cli({"verify", "--config", cfg, (a / "impulse.csv").string()}).code == 0);
  CHECK(cli({"verify", "--config", cfg, (a / "trace.json").string()}).code == 0);
  CHECK(cli({"verify", "--config", cfg, (a / "impulse.json").string()}).code == 0);
  CHECK(cli({"verify", "--config", cfg, "--dense-factor", "8", "--allowance", "0.1", (a / "impulse.csv").string()})
            .code == 0);

  const Run other_seed = cli({"design", "--config", cfg, "--out", b.string(), "--quiet", "--seed", "2"});
  CHECK(other_seed.code == 0);

  SUBCASE("zero filter fails verification") {
    std::string zero = "n,h\n";
    for (int n = 0; n < 29; ++n) zero += std::to_string(n) + ",0\n";
    write(a / "zero.csv", zero);
    CHECK(cli({"verify", "--config", cfg, (a / "zero.csv").string()}).code == 4);
  }
  SUBCASE("truncated CSV is a parse error") {
    const std::string full = slurp(a / "impulse.csv");
    write(a / "cut.csv", full.substr(0, full.size() / 2));
    CHECK(cli({"verify", "--config", cfg, (a / "cut.csv").string()}).code == 1);
    write(a / "junk.csv", "n,h\n0,abc\n");
    CHECK(cli({"verify", "--config", cfg, (a / "junk.csv").string()}).code == 1);
  }
}

TEST_CASE("compare-orders") {
  const fs::path out = scratch("compare");
  const std::string cfg = (kConfigs / "toy_triangle.json").string();
  CHECK(cli({"compare-orders", "--config", cfg, "--seeds", "1", "--out", out.string()}).code == 1);
  const Run r = cli({"compare-orders", "--config", cfg, "--seeds", "3,3", "--out", out.string(), "--quiet"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("median walk") != std::string::npos);
  std::istringstream csv(slurp(out / "compare_orders.csv"));
  std::string header, row1, row2;
  std::getline(csv, header);
  std::getline(csv, row1);
  std::getline(csv, row2);
  CHECK(header == "seed,walk_runtime,walk_fixed");
  CHECK(row1 == row2);
}

TEST_CASE("oracle verb") {
  const Run tri = cli({"oracle", "--config", (kConfigs / "toy_triangle.json").string()});
  REQUIRE(tri.code == 0);
  CHECK(tri.out.find("max_vanish over conv(root): 2") != std::string::npos);
  CHECK(tri.out.find("greedy walk length: 2") != std::string::npos);
  CHECK(tri.out.find("gap: 0") != std::string::npos);

  const Run box = cli({"oracle", "--config", (kConfigs / "unit_box_3.json").string()});
  REQUIRE(box.code == 0);
  CHECK(box.out.find("max_vanish over S: 3") != std::string::npos);

  CHECK(cli({"oracle", "--config", (kConfigs / "smoke_15.json").string()}).code == 5);
}
