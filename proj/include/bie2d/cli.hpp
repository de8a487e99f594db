#pragma once

// Command-line front end: named scenario presets and JSON-configured custom
// problems, emitting structured text reports and optional field grids.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bie2d/report.hpp"
#include "bie2d/scenarios.hpp"

namespace bie2d {
namespace cli {

constexpr int exit_ok = 0;
constexpr int exit_validation = 2;
constexpr int exit_solver = 3;

constexpr const char* config_schema = "bie2d/1";

struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GridSpec {
  bool enabled = false;
  Vec2 lo{0.0, 0.0}, hi{0.0, 0.0};
  int nx = 0, ny = 0;
};

struct ScenarioInfo {
  const char* name;
  const char* parameters;
  const char* description;
};

inline const std::vector<ScenarioInfo>& scenario_catalog() {
  static const std::vector<ScenarioInfo> catalog{
      {"two-disc-elastance", "--d (surface gap, default 0.5)",
       "Two unit discs with potentials (0.209, -0.123): a capacitance solve yields the induced "
       "charges, an elastance solve recovers the potentials. The far-field log coefficient of "
       "body 1 is -0.239487 at d=0.5, -0.743917 at d=0.05, -2.348079 at d=0.005."},
      {"two-disc-mobility", "--d (surface gap, default 0.5)",
       "Two unit discs moving with rigid velocities v1=(2.09, -1.034), v2=(1.00, 0.254) and "
       "angular velocities (0.12, 0.33): a resistance solve yields the forces, torques and "
       "ambient velocity (F1=(27.180434, -6.575686), T=(-1.496082, 1.494675) at d=0.5), a "
       "mobility solve driven by those outputs recovers the velocities."},
      {"splash-elastance", "(none)",
       "Five smooth star-shaped bodies with potentials (0.120625, 0.643859, 0.062342, "
       "0.490279, 0.306079) round-tripped through the capacitance and elastance solvers."},
      {"splash-mobility", "(none)",
       "The same five bodies with prescribed rigid velocities round-tripped through the "
       "resistance and mobility solvers."},
      {"nanocomposite", "--m (lattice rows, default 0), --A (aspect ratio, default 1)",
       "Two rounded capacitor plates at y=+-1.1 carrying charges +-1 with an m x 10 lattice of "
       "charge-neutral elliptic inclusions of aspect ratio A between them; reports the "
       "effective capacitance C = 1/(V1-V2), which is 2.2949 without inclusions."},
      {"custom", "(config file only)",
       "Bodies, problem data and outputs supplied in a JSON config with schema \"bie2d/1\"."},
  };
  return catalog;
}

struct RunRequest {
  std::string scenario;
  double d = 0.5;
  int m = 0;
  double A = 1.0;
  SolveConfig solve;
  std::string out_dir = ".";
  GridSpec grid;
  std::string config_text;  // exact text the checksum is computed over
  nlohmann::json config;    // parsed config (custom runs)
  std::string config_path;  // empty for flag-driven runs
};

// ---------------------------------------------------------------------------
// Config parsing

inline GridSpec parse_grid_flag(const std::string& text) {
  GridSpec g;
  char trailing = 0;
  const int got = std::sscanf(text.c_str(), "%lf,%lf,%lf,%lf,%d,%d%c", &g.lo.x, &g.lo.y, &g.hi.x,
                              &g.hi.y, &g.nx, &g.ny, &trailing);
  if (got != 6) throw ValidationError("--grid expects x0,y0,x1,y1,nx,ny (got \"" + text + "\")");
  if (!(g.hi.x > g.lo.x) || !(g.hi.y > g.lo.y))
    throw ValidationError("--grid bounding box must satisfy x1 > x0 and y1 > y0");
  if (g.nx < 2 || g.ny < 2) throw ValidationError("--grid needs nx, ny >= 2");
  g.enabled = true;
  return g;
}

namespace detail {

inline std::string line_anchor(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); i++) {
    if (text[i] == '\n') {
      line++;
      col = 1;
    } else {
      col++;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

template <typename T>
T field_as(const nlohmann::json& obj, const std::string& where, const std::string& key) {
  if (!obj.contains(key)) throw ValidationError(where + ": missing field \"" + key + "\"");
  try {
    return obj.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(where + ": field \"" + key + "\" has the wrong type (" + e.what() + ")");
  }
}

template <typename T>
T field_or(const nlohmann::json& obj, const std::string& where, const std::string& key, T fallback) {
  if (!obj.contains(key)) return fallback;
  return field_as<T>(obj, where, key);
}

inline Vec2 vec2_field(const nlohmann::json& obj, const std::string& where, const std::string& key) {
  const auto arr = field_as<std::vector<double>>(obj, where, key);
  if (arr.size() != 2) throw ValidationError(where + ": field \"" + key + "\" must be [x, y]");
  return Vec2{arr[0], arr[1]};
}

inline Discretization body_from_json(const nlohmann::json& body, const std::string& where) {
  const std::string type = field_as<std::string>(body, where, "type");
  const int n = field_as<int>(body, where, "n");
  if (n < 8) throw ValidationError(where + ": n must be at least 8");
  if (n % 2 != 0) throw ValidationError(where + ": n must be even (periodic rule)");
  Curve c;
  if (type == "disc") {
    c = make_disc(vec2_field(body, where, "center"),
                  field_as<double>(body, where, "radius"));
    if (c.radius <= 0) throw ValidationError(where + ": radius must be positive");
  } else if (type == "ellipse") {
    c = make_ellipse(vec2_field(body, where, "center"), field_as<double>(body, where, "semi_x"),
                     field_as<double>(body, where, "semi_y"),
                     field_or<double>(body, where, "rotation", 0.0));
    if (c.semi_x <= 0 || c.semi_y <= 0)
      throw ValidationError(where + ": semi-axes must be positive");
  } else if (type == "fourier_star") {
    c = make_fourier_star(vec2_field(body, where, "center"),
                          field_or<double>(body, where, "beta", 0.0),
                          field_as<std::vector<double>>(body, where, "coeffs"));
  } else if (type == "rounded_bar") {
    c = make_rounded_bar(field_as<double>(body, where, "shift_y"));
  } else {
    throw ValidationError(where + ": unknown body type \"" + type +
                          "\" (disc, ellipse, fourier_star, rounded_bar)");
  }
  try {
    return make_periodic(c, n, field_or<double>(body, where, "s0", 0.0));
  } catch (const std::exception& e) {
    throw ValidationError(where + ": " + e.what());
  }
}

} // namespace detail

inline RunRequest parse_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read config file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();

  RunRequest req;
  req.config_path = path;
  req.config_text = buf.str();
  try {
    req.config = nlohmann::json::parse(req.config_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(path + ": " + detail::line_anchor(req.config_text, e.byte) + ": " +
                          e.what());
  }
  const nlohmann::json& cfg = req.config;
  const std::string where = path;
  if (!cfg.is_object()) throw ValidationError(where + ": top level must be an object");
  const std::string schema = detail::field_as<std::string>(cfg, where, "schema");
  if (schema != config_schema)
    throw ValidationError(where + ": unsupported schema \"" + schema + "\" (expected \"" +
                          std::string(config_schema) + "\")");
  req.scenario = detail::field_as<std::string>(cfg, where, "scenario");

  req.d = detail::field_or<double>(cfg, where, "d", req.d);
  req.m = detail::field_or<int>(cfg, where, "m", req.m);
  req.A = detail::field_or<double>(cfg, where, "A", req.A);
  if (cfg.contains("solver")) {
    const nlohmann::json& s = cfg.at("solver");
    const std::string sw = where + ": solver";
    req.solve.gmres_tol = detail::field_or<double>(s, sw, "tol", req.solve.gmres_tol);
    req.solve.max_iter = detail::field_or<int>(s, sw, "max_iterations", req.solve.max_iter);
    req.solve.use_dense = detail::field_or<bool>(s, sw, "dense", req.solve.use_dense);
    req.solve.threads = detail::field_or<int>(s, sw, "threads", req.solve.threads);
  }
  if (cfg.contains("output")) {
    const nlohmann::json& o = cfg.at("output");
    const std::string ow = where + ": output";
    req.out_dir = detail::field_or<std::string>(o, ow, "directory", req.out_dir);
    if (o.contains("grid")) {
      const nlohmann::json& g = o.at("grid");
      const std::string gw = ow + ": grid";
      const auto bbox = detail::field_as<std::vector<double>>(g, gw, "bbox");
      if (bbox.size() != 4) throw ValidationError(gw + ": bbox must be [x0, y0, x1, y1]");
      req.grid.lo = {bbox[0], bbox[1]};
      req.grid.hi = {bbox[2], bbox[3]};
      req.grid.nx = detail::field_as<int>(g, gw, "nx");
      req.grid.ny = detail::field_as<int>(g, gw, "ny");
      if (!(req.grid.hi.x > req.grid.lo.x) || !(req.grid.hi.y > req.grid.lo.y))
        throw ValidationError(gw + ": bbox must satisfy x1 > x0 and y1 > y0");
      if (req.grid.nx < 2 || req.grid.ny < 2) throw ValidationError(gw + ": needs nx, ny >= 2");
      req.grid.enabled = true;
    }
  }
  return req;
}

// ---------------------------------------------------------------------------
// Scenario execution

namespace detail {

inline void add_header(ReportDoc& doc, const RunRequest& req) {
  doc.comment("bie2d report");
  doc.add("version", library_version);
  doc.add("config_checksum", format_hex64(fnv1a64(req.config_text)));
  doc.add("scenario", req.scenario);
  doc.add("gmres_tol", req.solve.gmres_tol);
  doc.add("threads", req.solve.threads);
  doc.blank();
}

inline void add_roundtrip_errors(ReportDoc& doc, const std::vector<double>& errors) {
  for (std::size_t b = 0; b < errors.size(); b++)
    doc.add("roundtrip_error_" + std::to_string(b + 1), errors[b]);
}

struct ScenarioOutput {
  ReportDoc doc;
  const Assembly* assembly = nullptr;    // grid source (null: grid unsupported)
  const SolveReport* gridable = nullptr; // report evaluated on the grid
};

inline void run_custom(const RunRequest& req, ScenarioOutput& out, Assembly& storage,
                       SolveReport& report_storage) {
  const std::string where = req.config_path;
  const nlohmann::json& cfg = req.config;
  if (!cfg.contains("bodies") || !cfg.at("bodies").is_array() || cfg.at("bodies").empty())
    throw ValidationError(where + ": custom scenario needs a nonempty \"bodies\" array");
  std::vector<Discretization> bodies;
  for (std::size_t i = 0; i < cfg.at("bodies").size(); i++)
    bodies.push_back(
        body_from_json(cfg.at("bodies").at(i), where + ": bodies[" + std::to_string(i) + "]"));
  storage = assemble(std::move(bodies));
  const std::size_t nb = storage.bodies.size();

  const std::string problem = field_as<std::string>(cfg, where, "problem");
  if (!cfg.contains("data") || !cfg.at("data").is_object())
    throw ValidationError(where + ": missing \"data\" object");
  const nlohmann::json& data = cfg.at("data");
  const std::string dw = where + ": data";
  auto expect_arity = [&](const char* key, std::size_t got) {
    if (got != nb)
      throw ValidationError(dw + ": \"" + key + "\" has " + std::to_string(got) +
                            " entries for " + std::to_string(nb) + " bodies");
  };
  auto vec2_list = [&](const char* key) {
    const auto raw = field_as<std::vector<std::vector<double>>>(data, dw, key);
    std::vector<Vec2> out2;
    for (const auto& e : raw) {
      if (e.size() != 2)
        throw ValidationError(dw + ": \"" + std::string(key) + "\" entries must be [x, y]");
      out2.push_back(Vec2{e[0], e[1]});
    }
    expect_arity(key, out2.size());
    return out2;
  };

  if (problem == "elastance") {
    auto q = field_as<std::vector<double>>(data, dw, "charges");
    expect_arity("charges", q.size());
    const double uinf = field_or<double>(data, dw, "u_inf", 0.0);
    report_storage = solve_elastance(storage, q, uinf, req.solve);
    out.gridable = &report_storage;
  } else if (problem == "capacitance") {
    auto phi = field_as<std::vector<double>>(data, dw, "potentials");
    expect_arity("potentials", phi.size());
    report_storage = solve_capacitance(storage, phi, req.solve);
  } else if (problem == "mobility") {
    auto F = vec2_list("forces");
    auto T = field_as<std::vector<double>>(data, dw, "torques");
    expect_arity("torques", T.size());
    Vec2 uinf{0.0, 0.0};
    if (data.contains("u_inf")) uinf = vec2_field(data, dw, "u_inf");
    report_storage = solve_mobility(storage, F, T, uinf, req.solve);
    out.gridable = &report_storage;
  } else if (problem == "resistance") {
    auto v = vec2_list("velocities");
    auto w = field_as<std::vector<double>>(data, dw, "angular_velocities");
    expect_arity("angular_velocities", w.size());
    report_storage = solve_resistance(storage, v, w, req.solve);
  } else {
    throw ValidationError(where + ": unknown problem \"" + problem +
                          "\" (elastance, capacitance, mobility, resistance)");
  }
  out.assembly = &storage;
  describe_solution(out.doc, storage, report_storage);
}

} // namespace detail

// Runs one scenario and writes its artifacts; assumes req was validated.
// Returns exit_ok or throws (ValidationError / SolveFailure / ...).
inline int execute(const RunRequest& req) {
  namespace fs = std::filesystem;
  // Outputs must be writable before we spend minutes solving.
  std::error_code ec;
  fs::create_directories(req.out_dir, ec);
  if (ec) throw ValidationError("cannot create output directory " + req.out_dir + ": " + ec.message());
  const std::string report_path = (fs::path(req.out_dir) / "report.txt").string();
  {
    std::ofstream probe(report_path, std::ios::binary | std::ios::app);
    if (!probe) throw ValidationError("output directory not writable: " + req.out_dir);
  }

  detail::ScenarioOutput out;
  detail::add_header(out.doc, req);

  // Storage the ScenarioOutput pointers refer to.
  Assembly assembly;
  SolveReport primary;
  ElastanceRoundTrip ert;
  MobilityRoundTrip mrt;
  scen::EffectiveCapacitance ecap;

  if (req.scenario == "two-disc-elastance" || req.scenario == "splash-elastance") {
    if (req.scenario == "two-disc-elastance") {
      out.doc.add("d", req.d);
      assembly = scen::two_disc_assembly(req.d);
    } else {
      assembly = scen::splash_assembly();
    }
    const std::vector<double>& phi =
        req.scenario == "two-disc-elastance" ? scen::two_disc_phi() : scen::splash_phi();
    ert = roundtrip_elastance(assembly, phi, req.solve);
    describe_solution(out.doc, assembly, ert.capacitance, "capacitance_bodies", "capacitance_");
    out.doc.blank();
    describe_solution(out.doc, assembly, ert.elastance, "elastance_bodies", "elastance_");
    out.doc.blank();
    detail::add_roundtrip_errors(out.doc, ert.errors);
    out.assembly = &assembly;
    out.gridable = &ert.elastance;
  } else if (req.scenario == "two-disc-mobility" || req.scenario == "splash-mobility") {
    const std::vector<Vec2>* v;
    const std::vector<double>* w;
    if (req.scenario == "two-disc-mobility") {
      out.doc.add("d", req.d);
      assembly = scen::two_disc_assembly(req.d, scen::two_disc_mobility_options());
      v = &scen::two_disc_v();
      w = &scen::two_disc_omega();
    } else {
      assembly = scen::splash_assembly();
      v = &scen::splash_v();
      w = &scen::splash_omega();
    }
    mrt = roundtrip_mobility(assembly, *v, *w, req.solve);
    describe_solution(out.doc, assembly, mrt.resistance, "resistance_bodies", "resistance_");
    out.doc.blank();
    describe_solution(out.doc, assembly, mrt.mobility, "mobility_bodies", "mobility_");
    out.doc.blank();
    detail::add_roundtrip_errors(out.doc, mrt.errors);
    out.assembly = &assembly;
    out.gridable = &mrt.mobility;
  } else if (req.scenario == "nanocomposite") {
    out.doc.add("m", req.m);
    out.doc.add("A", req.A);
    ecap = scen::effective_capacitance(req.m, req.A, req.solve);
    out.doc.add("C_effective", ecap.C_tilde);
    out.doc.add("V1", ecap.V1);
    out.doc.add("V2", ecap.V2);
    out.doc.blank();
    describe_solution(out.doc, ecap.assembly, ecap.report);
    out.assembly = &ecap.assembly;
    out.gridable = &ecap.report;
  } else if (req.scenario == "custom") {
    if (req.config_path.empty())
      throw ValidationError("the custom scenario needs a JSON config file (see list-scenarios)");
    detail::run_custom(req, out, assembly, primary);
  } else {
    std::string known;
    for (const ScenarioInfo& s : scenario_catalog()) {
      if (!known.empty()) known += ", ";
      known += s.name;
    }
    throw ValidationError("unknown scenario \"" + req.scenario + "\" (known: " + known + ")");
  }

  if (req.grid.enabled) {
    if (!out.gridable || !out.assembly)
      throw ValidationError("grid output is only available for elastance and mobility solves");
    const FieldGrid grid = evaluate_field_grid(*out.assembly, *out.gridable, req.grid.lo,
                                               req.grid.hi, req.grid.nx, req.grid.ny, true,
                                               req.solve);
    const std::string grid_path = (fs::path(req.out_dir) / "grid.txt").string();
    write_text_file(grid_path, grid_text(grid));
    out.doc.add("grid_file", grid_path);
    std::printf("wrote %s (%d x %d)\n", grid_path.c_str(), req.grid.nx, req.grid.ny);
  }

  write_text_file(report_path, out.doc.str());
  std::printf("wrote %s\n", report_path.c_str());
  return exit_ok;
}

// ---------------------------------------------------------------------------
// Entry point

inline int run_main(int argc, const char* const* argv) {
  CLI::App app{"bie2d: boundary integral solvers for 2D electrostatics and Stokes flow"};
  app.require_subcommand(1);

  std::string target;
  double flag_d = 0.5, flag_A = 1.0, flag_tol = 1e-6;
  int flag_m = 0, flag_threads = 1;
  std::string flag_out = ".", flag_grid;

  CLI::App* solve = app.add_subcommand("solve", "Solve a named scenario or a JSON config file");
  solve->add_option("target", target, "Scenario name or config path")->required();
  auto* opt_d = solve->add_option("--d", flag_d, "Two-disc surface gap");
  auto* opt_m = solve->add_option("--m", flag_m, "Nanocomposite lattice rows");
  auto* opt_A = solve->add_option("--A", flag_A, "Nanocomposite inclusion aspect ratio");
  auto* opt_tol = solve->add_option("--tol", flag_tol, "GMRES relative residual tolerance");
  auto* opt_threads = solve->add_option("--threads", flag_threads, "Worker thread cap");
  auto* opt_out = solve->add_option("--out", flag_out, "Output directory");
  auto* opt_grid = solve->add_option("--grid", flag_grid, "Field grid: x0,y0,x1,y1,nx,ny");

  bool machine = false;
  CLI::App* list = app.add_subcommand("list-scenarios", "Describe the built-in scenarios");
  list->add_flag("--machine", machine, "Tab-separated output for scripts");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
    app.exit(e);
    return exit_validation;
  }

  if (list->parsed()) {
    for (const ScenarioInfo& s : scenario_catalog()) {
      if (machine)
        std::printf("%s\t%s\t%s\n", s.name, s.parameters, s.description);
      else
        std::printf("%-20s %s\n%20s parameters: %s\n", s.name, s.description, "", s.parameters);
    }
    return exit_ok;
  }

  std::string history_dir = flag_out;  // where a failure's residual history goes
  try {
    RunRequest req;
    bool named = false;
    for (const ScenarioInfo& s : scenario_catalog())
      if (target == s.name) named = true;
    if (named && target != "custom") {
      req.scenario = target;
    } else if (!named) {
      if (!std::filesystem::exists(target)) {
        std::string known;
        for (const ScenarioInfo& s : scenario_catalog()) {
          if (!known.empty()) known += ", ";
          known += s.name;
        }
        throw ValidationError("no such scenario or config file: \"" + target +
                              "\" (scenarios: " + known + ")");
      }
      req = parse_config_file(target);
    } else {
      throw ValidationError("the custom scenario needs a JSON config file, e.g. "
                            "`bie2d solve my_config.json`");
    }

    if (opt_d->count()) req.d = flag_d;
    if (opt_m->count()) req.m = flag_m;
    if (opt_A->count()) req.A = flag_A;
    if (opt_tol->count()) req.solve.gmres_tol = flag_tol;
    if (opt_threads->count()) req.solve.threads = flag_threads;
    if (opt_out->count() || req.out_dir.empty()) req.out_dir = flag_out;
    if (opt_grid->count()) req.grid = parse_grid_flag(flag_grid);
    history_dir = req.out_dir;

    if (req.d <= 0) throw ValidationError("--d must be positive");
    if (req.m < 0) throw ValidationError("--m must be nonnegative");
    if (req.m > 0 && req.A <= 0) throw ValidationError("--A must be positive");
    if (req.solve.gmres_tol <= 0 || req.solve.gmres_tol >= 1)
      throw ValidationError("--tol must lie in (0, 1)");
    if (req.solve.threads < 1) throw ValidationError("--threads must be at least 1");

    if (req.config_text.empty()) {
      // Canonical text standing in for a config file, so flag-driven runs
      // carry a checksum too.
      std::string canon = std::string("schema=") + config_schema + "\nscenario=" + req.scenario +
                          "\nd=" + format_double(req.d) + "\nm=" + std::to_string(req.m) +
                          "\nA=" + format_double(req.A) +
                          "\ntol=" + format_double(req.solve.gmres_tol) +
                          "\nthreads=" + std::to_string(req.solve.threads) + "\n";
      req.config_text = std::move(canon);
    }
    return execute(req);
  } catch (const ValidationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_validation;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_validation;
  } catch (const SolveFailure& e) {
    std::fprintf(stderr, "solver failure: %s\n", e.what());
    std::error_code ec;
    std::filesystem::create_directories(history_dir, ec);
    const std::string hist_path =
        (std::filesystem::path(history_dir) / "residual_history.txt").string();
    std::string text = "# gmres relative residual per iteration\n";
    for (double r : e.residual_history) text += format_double(r) + "\n";
    try {
      write_text_file(hist_path, text);
      std::fprintf(stderr, "residual history written to %s\n", hist_path.c_str());
    } catch (const std::exception&) {
      // the history is secondary; the exit code already reports the failure
    }
    return exit_solver;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_solver;
  }
}

} // namespace cli
} // namespace bie2d
