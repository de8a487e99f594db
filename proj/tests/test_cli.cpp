#include <catch2/catch_amalgamated.hpp>

#include "bie2d/bie2d.hpp"
#include "bie2d/cli.hpp"

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace bie2d;
namespace fs = std::filesystem;

namespace {

int run(std::vector<std::string> args) {
  std::vector<const char*> argv{"bie2d"};
  for (const std::string& a : args) argv.push_back(a.c_str());
  return cli::run_main((int)argv.size(), argv.data());
}

fs::path fresh_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("bie2d_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
  REQUIRE(out.good());
}

int count_lines(const std::string& text) {
  int n = 0;
  for (char c : text)
    if (c == '\n') n++;
  return n;
}

}  // namespace

TEST_CASE("checksums and shortest round-trip formatting", "[report]") {
  REQUIRE(fnv1a64("") == UINT64_C(0xcbf29ce484222325));
  REQUIRE(fnv1a64("a") == UINT64_C(0xaf63dc4c8601ec8c));
  REQUIRE(format_hex64(UINT64_C(0xcbf29ce484222325)) == "0xcbf29ce484222325");

  for (double v : {1.0 / 3.0, 0.1, 2.2949, 1e-17, 12345678901234567.0, -0.25, 6.02e23}) {
    const std::string s = format_double(v);
    double back = 0.0;
    std::sscanf(s.c_str(), "%lf", &back);
    REQUIRE(back == v);
  }
  REQUIRE(format_double(0.5) == "0.5");
  REQUIRE(format_double(2.0) == "2");
  REQUIRE(format_double(0.0) == "0");
}

TEST_CASE("grid file format", "[report]") {
  FieldGrid g;
  g.nx = 2;
  g.ny = 2;
  g.ncomp = 1;
  g.lo = Vec2{0.0, 0.0};
  g.hi = Vec2{1.0, 1.0};
  g.region = {-1, 0, -1, 2};
  g.values = {1.5, 2.0, -0.25, 7.0};
  const std::string text = grid_text(g);
  REQUIRE(text ==
          "# x\ty\tregion\tu\n"
          "0\t0\t-1\t1.5\n"
          "1\t0\t0\t2\n"
          "0\t1\t-1\t-0.25\n"
          "1\t1\t2\t7\n");
}

TEST_CASE("grid flag parsing", "[cli]") {
  const cli::GridSpec g = cli::parse_grid_flag("-1,-2,3.5,4,16,9");
  REQUIRE(g.enabled);
  REQUIRE(g.lo.x == -1.0);
  REQUIRE(g.lo.y == -2.0);
  REQUIRE(g.hi.x == 3.5);
  REQUIRE(g.hi.y == 4.0);
  REQUIRE(g.nx == 16);
  REQUIRE(g.ny == 9);
  REQUIRE_THROWS_AS(cli::parse_grid_flag("1,2,3"), cli::ValidationError);
  REQUIRE_THROWS_AS(cli::parse_grid_flag("0,0,1,1,1,5"), cli::ValidationError);
  REQUIRE_THROWS_AS(cli::parse_grid_flag("1,0,0,1,5,5"), cli::ValidationError);
  REQUIRE_THROWS_AS(cli::parse_grid_flag("0,0,1,1,5,5,9"), cli::ValidationError);
}

TEST_CASE("scenario listing and argument validation exits", "[cli]") {
  REQUIRE(run({"list-scenarios"}) == cli::exit_ok);
  REQUIRE(run({"list-scenarios", "--machine"}) == cli::exit_ok);
  REQUIRE(run({}) == cli::exit_validation);                       // missing subcommand
  REQUIRE(run({"solve", "no-such-scenario"}) == cli::exit_validation);
  REQUIRE(run({"solve", "two-disc-elastance", "--d=-1"}) == cli::exit_validation);
  REQUIRE(run({"solve", "two-disc-elastance", "--tol", "2"}) == cli::exit_validation);
  REQUIRE(run({"solve", "nanocomposite", "--m=-3"}) == cli::exit_validation);
  REQUIRE(run({"solve", "two-disc-elastance", "--grid", "bogus"}) == cli::exit_validation);
}

TEST_CASE("custom config solve writes a deterministic report and grid", "[cli]") {
  const fs::path dir = fresh_dir("custom");
  const fs::path cfg = dir / "job.json";
  write_file(cfg, R"({
  "schema": "bie2d/1",
  "scenario": "custom",
  "problem": "elastance",
  "bodies": [
    {"type": "disc", "center": [0.0, 0.0], "radius": 1.0, "n": 64}
  ],
  "data": {"charges": [0.0], "u_inf": 0.3},
  "output": {
    "directory": ")" + (dir / "out").string() + R"(",
    "grid": {"bbox": [-2.0, -2.0, 2.0, 2.0], "nx": 6, "ny": 5}
  }
})");
  REQUIRE(run({"solve", cfg.string()}) == cli::exit_ok);
  const std::string report = read_file(dir / "out" / "report.txt");
  REQUIRE(report.find("version = " + std::string(library_version)) != std::string::npos);
  REQUIRE(report.find("config_checksum = 0x") != std::string::npos);
  REQUIRE(report.find("problem = elastance") != std::string::npos);
  REQUIRE(report.find("u_inf = 0.3") != std::string::npos);
  REQUIRE(report.find("[table bodies]") != std::string::npos);

  const std::string grid = read_file(dir / "out" / "grid.txt");
  REQUIRE(grid.rfind("# x\ty\tregion\tu\n", 0) == 0);
  REQUIRE(count_lines(grid) == 6 * 5 + 1);
  // The disc interior is masked with its body index and potential; ambient
  // 0.3 shows up past the boundary.
  REQUIRE(grid.find("\t0\t0.3\n") != std::string::npos);   // interior: region 0, u = phi = u_inf here
  REQUIRE(grid.find("\t-1\t0.3\n") != std::string::npos);  // exterior far field

  // Identical invocations produce byte-identical reports.
  REQUIRE(run({"solve", cfg.string()}) == cli::exit_ok);
  REQUIRE(read_file(dir / "out" / "report.txt") == report);
  REQUIRE(read_file(dir / "out" / "grid.txt") == grid);
}

TEST_CASE("config validation failures exit with the validation code", "[cli]") {
  const fs::path dir = fresh_dir("badcfg");
  auto expect_invalid = [&](const char* name, const std::string& text) {
    const fs::path p = dir / name;
    write_file(p, text);
    INFO(name);
    REQUIRE(run({"solve", p.string()}) == cli::exit_validation);
  };
  expect_invalid("notjson.json", "{ nope");
  expect_invalid("schema.json", R"({"schema": "bie2d/99", "scenario": "custom"})");
  expect_invalid("oddn.json", R"({
    "schema": "bie2d/1", "scenario": "custom", "problem": "elastance",
    "bodies": [{"type": "disc", "center": [0,0], "radius": 1.0, "n": 63}],
    "data": {"charges": [0.0]}})");
  expect_invalid("arity.json", R"({
    "schema": "bie2d/1", "scenario": "custom", "problem": "elastance",
    "bodies": [{"type": "disc", "center": [-2,0], "radius": 1.0, "n": 64},
               {"type": "disc", "center": [2,0], "radius": 1.0, "n": 64}],
    "data": {"charges": [0.0]}})");
  expect_invalid("badtype.json", R"({
    "schema": "bie2d/1", "scenario": "custom", "problem": "elastance",
    "bodies": [{"type": "triangle", "center": [0,0], "n": 64}],
    "data": {"charges": [0.0]}})");
  expect_invalid("badproblem.json", R"({
    "schema": "bie2d/1", "scenario": "custom", "problem": "thermal",
    "bodies": [{"type": "disc", "center": [0,0], "radius": 1.0, "n": 64}],
    "data": {"charges": [0.0]}})");
  // Physical validation: charges must be neutral.
  expect_invalid("charged.json", R"({
    "schema": "bie2d/1", "scenario": "custom", "problem": "elastance",
    "bodies": [{"type": "disc", "center": [0,0], "radius": 1.0, "n": 64}],
    "data": {"charges": [1.0]}})");
}

TEST_CASE("solver failure exits with the solver code and leaves a trace", "[cli]") {
  const fs::path dir = fresh_dir("stall");
  const fs::path cfg = dir / "stall.json";
  write_file(cfg, R"({
  "schema": "bie2d/1",
  "scenario": "custom",
  "problem": "elastance",
  "bodies": [
    {"type": "disc", "center": [-2.0, 0.0], "radius": 1.0, "n": 64},
    {"type": "disc", "center": [2.0, 0.0], "radius": 1.0, "n": 64}
  ],
  "data": {"charges": [1.0, -1.0]},
  "solver": {"tol": 1e-14, "max_iterations": 2},
  "output": {"directory": ")" + (dir / "out").string() + R"("}
})");
  REQUIRE(run({"solve", cfg.string()}) == cli::exit_solver);
  const std::string hist = read_file(dir / "out" / "residual_history.txt");
  REQUIRE(hist.rfind("# gmres relative residual per iteration\n", 0) == 0);
  REQUIRE(count_lines(hist) == 1 + 2);  // header plus one residual per iteration
}

TEST_CASE("named two-disc scenario end to end through the front end", "[cli]") {
  const fs::path dir = fresh_dir("named");
  REQUIRE(run({"solve", "two-disc-elastance", "--d", "1.0", "--out", dir.string()}) ==
          cli::exit_ok);
  const std::string report = read_file(dir / "report.txt");
  REQUIRE(report.find("scenario = two-disc-elastance") != std::string::npos);
  REQUIRE(report.find("d = 1") != std::string::npos);
  REQUIRE(report.find("capacitance_problem = capacitance") != std::string::npos);
  REQUIRE(report.find("elastance_problem = elastance") != std::string::npos);
  REQUIRE(report.find("roundtrip_error_1 = ") != std::string::npos);
  REQUIRE(report.find("roundtrip_error_2 = ") != std::string::npos);
  REQUIRE(report.find("[table capacitance_bodies]") != std::string::npos);
  REQUIRE(report.find("[table elastance_bodies]") != std::string::npos);

  // The recovered potentials land in the table; spot-check the first body's
  // potential column against the scenario input.
  REQUIRE(report.find("0.209") != std::string::npos);
}
