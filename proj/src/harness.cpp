#include "radhydro/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <set>
#include <sstream>
#include <thread>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/core.h>
#include <fmt/ostream.h>
#include <json.hpp>

namespace radhydro {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

auto at(int k) -> std::size_t { return static_cast<std::size_t>(k); }

constexpr double kLandingSlack = 1e-9;
constexpr double kRoundoffError = 1e-13;

auto sanitize(std::string_view s) -> std::string {
  std::string out;
  for (char ch : s) {
    const bool keep = std::isalnum(static_cast<unsigned char>(ch)) != 0 ||
                      ch == '.' || ch == '-' || ch == '_';
    out.push_back(keep ? ch : '_');
  }
  return out;
}

auto open_out(const fs::path &path) -> std::ofstream {
  std::ofstream os(path);
  if (!os) {
    throw Error("cannot write " + path.string());
  }
  return os;
}

} // namespace

// ---------------------------------------------------------------- schemes

auto resolve_scheme(std::string_view name) -> SchemeSpec {
  SchemeSpec s;
  s.name = std::string(name);
  if (name == "ALIMEX-Euler") {
    s.kind = SchemeSpec::Kind::Alimex;
    return s;
  }
  if (name == "Op-Split" || name == "Op-Split-RK3" || name == "Op-Split-TVD3") {
    s.kind = SchemeSpec::Kind::Split;
    s.hydro = name == "Op-Split"       ? HydroScheme::ForwardEuler
              : name == "Op-Split-RK3" ? HydroScheme::Kutta3
                                       : HydroScheme::Tvd3;
    return s;
  }
  try {
    s.pair = &registry(name);
  } catch (const SchemeError &) {
    std::string msg = "unknown scheme '" + std::string(name) + "'; available:";
    for (const auto &n : available_schemes()) {
      msg += " " + n;
    }
    throw SchemeError(msg);
  }
  return s;
}

auto available_schemes() -> std::vector<std::string> {
  auto names = registered_pairs();
  for (const char *extra :
       {"ALIMEX-Euler", "Op-Split", "Op-Split-RK3", "Op-Split-TVD3"}) {
    names.emplace_back(extra);
  }
  return names;
}

auto advance(const Model &model, const CellState &state, double dt,
             const SchemeSpec &scheme) -> StepResult {
  switch (scheme.kind) {
  case SchemeSpec::Kind::Alimex:
    return alimex_first_order_step(model, state, dt);
  case SchemeSpec::Kind::Split:
    return lie_trotter_step(model, state, dt, scheme.hydro);
  case SchemeSpec::Kind::Limex:
  default:
    return limex_step(model, state, dt, *scheme.pair);
  }
}

// ----------------------------------------------------------------- config

void RunConfig::validate() const {
  try {
    (void)resolve_scheme(scheme);
    for (const auto &s : study_schemes) {
      (void)resolve_scheme(s);
    }
    const SchemeSpec ref = resolve_scheme(reference_scheme);
    if (ref.kind != SchemeSpec::Kind::Limex || ref.pair->order < 2) {
      throw ConfigError("reference scheme must be a second-order LIMEX pair");
    }
  } catch (const SchemeError &e) {
    throw ConfigError(e.what());
  }
  if (controller.dt_fixed) {
    if (!(*controller.dt_fixed > 0.0)) {
      throw ConfigError("scheme.dt must be positive");
    }
  } else if (!(controller.cfl > 0.0) || controller.cfl > 1.0) {
    throw ConfigError("scheme.cfl must lie in (0, 1]");
  }
  solver.validate();
  if (halvings < 1) {
    throw ConfigError("study.halvings must be at least 1");
  }
  if (workers < 1) {
    throw ConfigError("study.workers must be at least 1");
  }
  if (reference_refinement < 32) {
    throw ConfigError("study.reference_refinement must be at least 32");
  }
  if (!(audit_tol > 0.0)) {
    throw ConfigError("study.audit_tol must be positive");
  }
  if (dt0 && !(*dt0 > 0.0)) {
    throw ConfigError("study.dt0 must be positive");
  }
  if (kind == ProblemKind::ScalarOde) {
    if (!(ode.t_final > 0.0)) {
      throw ConfigError("problem.t_final must be positive for scalar-ode");
    }
    return;
  }
  try {
    problem.validate();
  } catch (const DomainError &e) {
    throw ConfigError(e.what());
  }
}

auto config_for_preset(std::string_view preset) -> RunConfig {
  RunConfig cfg;
  cfg.preset = std::string(preset);
  if (preset == "perturbed") {
    cfg.kind = ProblemKind::PerturbedBox;
    cfg.problem = perturbed_box_preset();
  } else if (preset == "scalar-ode") {
    cfg.kind = ProblemKind::ScalarOde;
    cfg.problem = perturbed_box_preset();
    cfg.problem.name = "scalar-ode";
  } else {
    cfg.kind = ProblemKind::Shock;
    cfg.problem = shock_preset(preset);
  }
  return cfg;
}

namespace {

auto to_double(const std::string &key, const std::string &text) -> double {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) {
      throw std::invalid_argument(text);
    }
    return v;
  } catch (const std::exception &) {
    throw ConfigError("'" + key + "' expects a number, got '" + text + "'");
  }
}

auto to_int(const std::string &key, const std::string &text) -> int {
  const double v = to_double(key, text);
  if (v != std::floor(v) || std::abs(v) > 1e9) {
    throw ConfigError("'" + key + "' expects an integer, got '" + text + "'");
  }
  return static_cast<int>(v);
}

auto to_bool(const std::string &key, const std::string &text) -> bool {
  if (text == "true" || text == "1" || text == "yes") {
    return true;
  }
  if (text == "false" || text == "0" || text == "no") {
    return false;
  }
  throw ConfigError("'" + key + "' expects true or false, got '" + text + "'");
}

/// Comma-separated items; commas inside parentheses belong to the item, so
/// scheme names such as H-LDIRK2(2,2,2) survive.
auto split_list(const std::string &text) -> std::vector<std::string> {
  std::vector<std::string> out;
  std::string item;
  int depth = 0;
  const auto flush = [&] {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b != std::string::npos) {
      out.push_back(item.substr(b, e - b + 1));
    }
    item.clear();
  };
  for (char ch : text) {
    depth += ch == '(' ? 1 : ch == ')' ? -1 : 0;
    if (ch == ',' && depth == 0) {
      flush();
    } else {
      item.push_back(ch);
    }
  }
  flush();
  return out;
}

using Setter = std::function<void(RunConfig &, const std::string &)>;

auto problem_setters() -> const std::map<std::string, Setter> & {
  static const std::map<std::string, Setter> m = {
      {"mach", [](RunConfig &c, const std::string &v) { c.problem.mach = to_double("problem.mach", v); }},
      {"n_cells", [](RunConfig &c, const std::string &v) { c.problem.n_cells = to_int("problem.n_cells", v); }},
      {"x_min", [](RunConfig &c, const std::string &v) { c.problem.x_min = to_double("problem.x_min", v); }},
      {"x_max", [](RunConfig &c, const std::string &v) { c.problem.x_max = to_double("problem.x_max", v); }},
      {"shock_position", [](RunConfig &c, const std::string &v) { c.problem.shock_position = to_double("problem.shock_position", v); }},
      {"shock_speed", [](RunConfig &c, const std::string &v) { c.problem.shock_speed = to_double("problem.shock_speed", v); }},
      {"rho", [](RunConfig &c, const std::string &v) { c.problem.rho_u = to_double("problem.rho", v); }},
      {"T_material", [](RunConfig &c, const std::string &v) { c.problem.T_mu = to_double("problem.T_material", v); }},
      {"T_radiation", [](RunConfig &c, const std::string &v) { c.problem.T_ru = to_double("problem.T_radiation", v); }},
      {"t_final",
       [](RunConfig &c, const std::string &v) {
         c.problem.t_final = to_double("problem.t_final", v);
         c.ode.t_final = c.problem.t_final;
       }},
      {"output_times",
       [](RunConfig &c, const std::string &v) {
         c.problem.output_times.clear();
         for (const auto &item : split_list(v)) {
           c.problem.output_times.push_back(to_double("problem.output_times", item));
         }
       }},
      {"perturbation", [](RunConfig &c, const std::string &v) { c.perturbation = to_double("problem.perturbation", v); }},
      {"radiative_jump", [](RunConfig &c, const std::string &v) { c.radiative_jump = to_bool("problem.radiative_jump", v); }},
      {"lambda_explicit", [](RunConfig &c, const std::string &v) { c.ode.lambda_explicit = to_double("problem.lambda_explicit", v); }},
      {"lambda_implicit", [](RunConfig &c, const std::string &v) { c.ode.lambda_implicit = to_double("problem.lambda_implicit", v); }},
      {"y0", [](RunConfig &c, const std::string &v) { c.ode.y0 = to_double("problem.y0", v); }},
  };
  return m;
}

auto section_setters() -> const std::map<std::string, std::map<std::string, Setter>> & {
  static const std::map<std::string, std::map<std::string, Setter>> m = {
      {"problem", problem_setters()},
      {"scheme",
       {{"name", [](RunConfig &c, const std::string &v) { c.scheme = v; }},
        {"cfl", [](RunConfig &c, const std::string &v) { c.controller.cfl = to_double("scheme.cfl", v); }},
        {"dt", [](RunConfig &c, const std::string &v) { c.controller.dt_fixed = to_double("scheme.dt", v); }}}},
      {"solver",
       {{"rel_tol", [](RunConfig &c, const std::string &v) { c.solver.rel_tol = to_double("solver.rel_tol", v); }},
        {"abs_tol_T", [](RunConfig &c, const std::string &v) { c.solver.abs_tol_T = to_double("solver.abs_tol_T", v); }},
        {"max_outer_iters", [](RunConfig &c, const std::string &v) { c.solver.max_outer_iters = to_int("solver.max_outer_iters", v); }},
        {"temperature_floor", [](RunConfig &c, const std::string &v) { c.solver.temperature_floor = to_double("solver.temperature_floor", v); }},
        {"Er_floor", [](RunConfig &c, const std::string &v) { c.solver.Er_floor = to_double("solver.Er_floor", v); }},
        {"max_floor_hits", [](RunConfig &c, const std::string &v) { c.solver.max_floor_hits = to_int("solver.max_floor_hits", v); }}}},
      {"output", {{"dir", [](RunConfig &c, const std::string &v) { c.output_dir = v; }}}},
      {"study",
       {{"halvings", [](RunConfig &c, const std::string &v) { c.halvings = to_int("study.halvings", v); }},
        {"dt0", [](RunConfig &c, const std::string &v) { c.dt0 = to_double("study.dt0", v); }},
        {"reference_scheme", [](RunConfig &c, const std::string &v) { c.reference_scheme = v; }},
        {"reference_refinement", [](RunConfig &c, const std::string &v) { c.reference_refinement = to_int("study.reference_refinement", v); }},
        {"workers", [](RunConfig &c, const std::string &v) { c.workers = to_int("study.workers", v); }},
        {"audit_tol", [](RunConfig &c, const std::string &v) { c.audit_tol = to_double("study.audit_tol", v); }},
        {"schemes", [](RunConfig &c, const std::string &v) { c.study_schemes = split_list(v); }}}},
  };
  return m;
}

} // namespace

auto parse_config(std::istream &is) -> RunConfig {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::read_ini(is, tree);
  } catch (const boost::property_tree::ini_parser_error &e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  const auto &sections = section_setters();
  for (const auto &[name, node] : tree) {
    if (!sections.contains(name)) {
      throw ConfigError("unknown config section [" + name + "]");
    }
    if (node.empty() && !node.data().empty()) {
      throw ConfigError("config key '" + name + "' must live in a section");
    }
  }

  std::string preset = "mach3";
  if (const auto p = tree.get_optional<std::string>("problem.preset")) {
    preset = *p;
  }
  RunConfig cfg = config_for_preset(preset);
  const auto preset_outputs = cfg.problem.output_times;

  bool has_cfl = false;
  bool has_dt = false;
  bool has_outputs = false;
  bool has_t_final = false;
  for (const auto &[name, node] : tree) {
    const auto &setters = sections.at(name);
    for (const auto &[key, value] : node) {
      if (name == "problem" && key == "preset") {
        continue;
      }
      const auto it = setters.find(key);
      if (it == setters.end()) {
        throw ConfigError("unknown config key '" + name + "." + key + "'");
      }
      it->second(cfg, value.data());
      has_cfl = has_cfl || (name == "scheme" && key == "cfl");
      has_dt = has_dt || (name == "scheme" && key == "dt");
      has_outputs = has_outputs || (name == "problem" && key == "output_times");
      has_t_final = has_t_final || (name == "problem" && key == "t_final");
    }
  }
  if (has_cfl && has_dt) {
    throw ConfigError("set exactly one of scheme.cfl and scheme.dt");
  }
  if (has_t_final && !has_outputs) {
    auto &times = cfg.problem.output_times;
    times.clear();
    for (double t : preset_outputs) {
      if (t < cfg.problem.t_final) {
        times.push_back(t);
      }
    }
    times.push_back(cfg.problem.t_final);
  }
  cfg.validate();
  return cfg;
}

auto load_config(const fs::path &path) -> RunConfig {
  std::ifstream is(path);
  if (!is) {
    throw ConfigError("cannot open config file " + path.string());
  }
  return parse_config(is);
}

auto build_problem(const RunConfig &config) -> InitialProblem {
  switch (config.kind) {
  case ProblemKind::PerturbedBox:
    return build_perturbed_box(config.problem, config.perturbation);
  case ProblemKind::ScalarOde:
    throw ConfigError("the scalar-ode problem has no spatial state");
  case ProblemKind::Shock:
  default: {
    JumpStates jump = jump_hydro(config.problem);
    if (config.radiative_jump) {
      jump = jump_full(config.problem, jump);
    }
    return build_initial_state(config.problem, jump);
  }
  }
}

auto make_model(const RunConfig &config, const InitialProblem &problem)
    -> Model {
  return Model{problem.grid, problem.bc, config.problem.material,
               config.solver};
}

// -------------------------------------------------------------------- run

auto StepRecord::drift() const -> double {
  return (energy_after - energy_before + outflow) / std::abs(energy_before);
}

auto error_variables() -> const std::vector<std::string> & {
  static const std::vector<std::string> v = {"rho", "mom", "rho_et", "Er",
                                             "T"};
  return v;
}

auto relative_errors(const Grid1D &grid, const CellState &sol,
                     const CellState &ref) -> VariableErrors {
  const std::vector<const std::vector<double> CellState::*> fields = {
      &CellState::rho, &CellState::mom, &CellState::rho_et, &CellState::Er,
      &CellState::T};
  VariableErrors out;
  const auto &names = error_variables();
  for (std::size_t v = 0; v < fields.size(); ++v) {
    const auto &a = sol.*fields[v];
    const auto &b = ref.*fields[v];
    ErrorNorms err;
    ErrorNorms mag;
    for (int k = grid.begin(); k < grid.end(); ++k) {
      const double d = std::abs(a[at(k)] - b[at(k)]);
      const double r = std::abs(b[at(k)]);
      err.l1 += d;
      err.l2 += d * d;
      err.linf = std::max(err.linf, d);
      mag.l1 += r;
      mag.l2 += r * r;
      mag.linf = std::max(mag.linf, r);
    }
    err.l2 = std::sqrt(err.l2);
    mag.l2 = std::sqrt(mag.l2);
    const auto rel = [](double e, double m) { return m > 0.0 ? e / m : e; };
    out[names[v]] = {rel(err.l1, mag.l1), rel(err.l2, mag.l2),
                     rel(err.linf, mag.linf)};
  }
  return out;
}

auto run(const RunConfig &config, const CellState *reference) -> RunReport {
  config.validate();
  if (config.kind == ProblemKind::ScalarOde) {
    throw ConfigError("the scalar-ode problem only supports converge");
  }
  const auto start = std::chrono::steady_clock::now();
  const InitialProblem problem = build_problem(config);
  const Model model = make_model(config, problem);
  const SchemeSpec scheme = resolve_scheme(config.scheme);
  const auto &eos = model.material.eos;
  const double t_final = config.problem.t_final;

  RunReport rep;
  rep.scheme = config.scheme;
  rep.problem = config.problem.name;
  rep.grid = problem.grid;
  rep.eos = eos;

  std::set<double> targets(config.problem.output_times.begin(),
                           config.problem.output_times.end());
  const std::set<double> outputs = targets;
  targets.insert(t_final);
  targets.erase(0.0);

  CellState state = problem.state;
  sync_temperature(problem.grid, state, eos);
  if (outputs.contains(0.0)) {
    rep.snapshots.push_back({0.0, state});
  }

  double t = 0.0;
  int step = 0;
  auto target = targets.begin();
  while (target != targets.end()) {
    try {
      sync_temperature(problem.grid, state, eos);
      double dt = compute_dt(problem.grid, state, eos, config.controller);
      const double remaining = *target - t;
      const bool land = dt >= remaining * (1.0 - kLandingSlack);
      if (land) {
        dt = remaining;
      }
      StepRecord rec;
      rec.index = step;
      rec.dt = dt;
      rec.energy_before = total_energy(problem.grid, state);
      StepResult res = advance(model, state, dt, scheme);
      rec.energy_after = total_energy(problem.grid, res.state);
      rec.outflow = res.energy_outflow;
      if (!std::isfinite(rec.energy_after)) {
        throw NegativeState("non-finite state after step");
      }
      state = std::move(res.state);
      rep.stats += res.stats;
      t = land ? *target : t + dt;
      rec.time = t;
      rep.steps.push_back(rec);
      ++step;
      if (land) {
        sync_temperature(problem.grid, state, eos);
        if (outputs.contains(t)) {
          rep.snapshots.push_back({t, state});
        }
        ++target;
      }
    } catch (const SimulationError &) {
      throw;
    } catch (const Error &e) {
      throw SimulationError(
          fmt::format("step {} at t = {:.9g} s: {}", step, t, e.what()), step,
          t);
    }
  }
  rep.final_state = std::move(state);
  rep.final_time = t;
  if (reference != nullptr) {
    rep.errors = relative_errors(rep.grid, rep.final_state, *reference);
  }
  rep.wallclock = std::chrono::duration<double>(
                      std::chrono::steady_clock::now() - start)
                      .count();
  if (!config.output_dir.empty()) {
    write_report(rep, config.output_dir);
  }
  return rep;
}

void write_report(const RunReport &report, const fs::path &dir) {
  fs::create_directories(dir);
  json j;
  j["scheme"] = report.scheme;
  j["problem"] = report.problem;
  j["n_cells"] = report.grid.n_cells;
  j["final_time"] = report.final_time;
  j["steps"] = report.steps.size();
  j["wallclock_s"] = report.wallclock;
  j["explicit_evals"] = report.stats.explicit_evals;
  j["implicit_solves"] = report.stats.implicit_solves;
  j["nonlinear_iterations"] = report.stats.nonlinear_iters;
  json snaps = json::array();
  for (std::size_t i = 0; i < report.snapshots.size(); ++i) {
    const auto name = fmt::format("snapshot_{:03d}.csv", i);
    auto os = open_out(dir / name);
    write_snapshot_csv(os, report.grid, report.snapshots[i].state, report.eos);
    snaps.push_back({{"time", report.snapshots[i].time}, {"file", name}});
  }
  j["snapshots"] = snaps;
  json dts = json::array();
  json drift = json::array();
  for (const auto &s : report.steps) {
    dts.push_back(s.dt);
    drift.push_back(s.drift());
  }
  j["dt"] = dts;
  j["drift"] = drift;
  if (report.errors) {
    for (const auto &[var, e] : *report.errors) {
      j["errors"][var] = {{"l1", e.l1}, {"l2", e.l2}, {"linf", e.linf}};
    }
  }
  auto os = open_out(dir / "report.json");
  os << j.dump(2) << '\n';
}

// -------------------------------------------------------------- reference

auto reference(const RunConfig &config, double dt_ref,
               double smallest_study_dt) -> ReferenceSolution {
  if (!(dt_ref > 0.0)) {
    throw DomainError("reference dt must be positive");
  }
  if (dt_ref * config.reference_refinement >
      smallest_study_dt * (1.0 + 1e-12)) {
    throw DomainError(fmt::format(
        "reference dt {:.6g} is not {}x smaller than the smallest study dt "
        "{:.6g}",
        dt_ref, config.reference_refinement, smallest_study_dt));
  }
  RunConfig cfg = config;
  cfg.scheme = config.reference_scheme;
  cfg.controller.dt_fixed = dt_ref;
  cfg.problem.output_times = {config.problem.t_final};
  cfg.output_dir.clear();
  RunReport rep = run(cfg);
  return ReferenceSolution{cfg.scheme,        rep.problem, dt_ref,
                           rep.final_time,    rep.grid,    std::move(rep.final_state)};
}

void write_reference(const ReferenceSolution &ref, const fs::path &dir) {
  fs::create_directories(dir);
  {
    auto os = open_out(dir / "reference.csv");
    os << "x,rho,mom,rho_et,Er,T\n";
    for (int k = ref.grid.begin(); k < ref.grid.end(); ++k) {
      const auto kk = at(k);
      os << fmt::format("{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n",
                        ref.grid.x_center(k), ref.state.rho[kk],
                        ref.state.mom[kk], ref.state.rho_et[kk],
                        ref.state.Er[kk], ref.state.T[kk]);
    }
  }
  json j = {{"scheme", ref.scheme},          {"problem", ref.problem},
            {"dt_ref", ref.dt_ref},          {"t_final", ref.t_final},
            {"x_min", ref.grid.x_min},       {"x_max", ref.grid.x_max},
            {"n_cells", ref.grid.n_cells}};
  auto os = open_out(dir / "reference.json");
  os << j.dump(2) << '\n';
}

auto read_reference(const fs::path &dir, const EosIdealGas &eos)
    -> ReferenceSolution {
  (void)eos;
  std::ifstream meta(dir / "reference.json");
  if (!meta) {
    throw ConfigError("no reference.json in " + dir.string());
  }
  const json j = json::parse(meta);
  ReferenceSolution ref;
  ref.scheme = j.at("scheme").get<std::string>();
  ref.problem = j.at("problem").get<std::string>();
  ref.dt_ref = j.at("dt_ref").get<double>();
  ref.t_final = j.at("t_final").get<double>();
  ref.grid = Grid1D::make(j.at("x_min").get<double>(),
                          j.at("x_max").get<double>(),
                          j.at("n_cells").get<int>());
  ref.state = CellState(ref.grid);
  std::ifstream is(dir / "reference.csv");
  std::string line;
  if (!std::getline(is, line) || line != "x,rho,mom,rho_et,Er,T") {
    throw ConfigError("reference.csv has an unexpected header");
  }
  int k = ref.grid.begin();
  while (std::getline(is, line)) {
    if (line.empty()) {
      continue;
    }
    if (k >= ref.grid.end()) {
      throw ConfigError("reference.csv has too many rows");
    }
    std::istringstream row(line);
    std::string cell;
    std::vector<double> values;
    while (std::getline(row, cell, ',')) {
      values.push_back(to_double("reference.csv", cell));
    }
    if (values.size() != 6) {
      throw ConfigError("reference.csv row has the wrong column count");
    }
    const auto kk = at(k);
    ref.state.rho[kk] = values[1];
    ref.state.mom[kk] = values[2];
    ref.state.rho_et[kk] = values[3];
    ref.state.Er[kk] = values[4];
    ref.state.T[kk] = values[5];
    ++k;
  }
  if (k != ref.grid.end()) {
    throw ConfigError("reference.csv has too few rows");
  }
  return ref;
}

// ------------------------------------------------------------ convergence

auto default_ladder(const RunConfig &config) -> std::vector<double> {
  const double t_final = config.kind == ProblemKind::ScalarOde
                             ? config.ode.t_final
                             : config.problem.t_final;
  if (!(t_final > 0.0)) {
    throw DomainError("a convergence ladder needs t_final > 0");
  }
  double dt0 = 0.0;
  if (config.dt0) {
    dt0 = *config.dt0;
  } else if (config.kind == ProblemKind::ScalarOde) {
    dt0 = t_final / 10.0;
  } else {
    const InitialProblem p = build_problem(config);
    StepController cfl_only;
    cfl_only.cfl = config.controller.cfl;
    dt0 = compute_dt(p.grid, p.state, config.problem.material.eos, cfl_only);
  }
  const double n = std::ceil(t_final / dt0 - 1e-9);
  dt0 = t_final / n;
  std::vector<double> ladder;
  for (int i = 0; i <= config.halvings; ++i) {
    ladder.push_back(std::ldexp(dt0, -i));
  }
  return ladder;
}

namespace {

void normalize_ladder(std::vector<double> &ladder) {
  if (ladder.empty()) {
    throw DomainError("empty dt ladder");
  }
  for (double dt : ladder) {
    if (!(dt > 0.0)) {
      throw DomainError("ladder entries must be positive");
    }
  }
  std::sort(ladder.begin(), ladder.end(), std::greater<>());
  ladder.erase(std::unique(ladder.begin(), ladder.end()), ladder.end());
}

void fill_orders(ConvergenceTable &table) {
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    auto &row = table.rows[i];
    for (const auto &var : table.variables) {
      double order = std::numeric_limits<double>::quiet_NaN();
      if (i > 0 && row.stable && table.rows[i - 1].stable) {
        const auto &prev = table.rows[i - 1];
        const double e0 = prev.errors.at(var).l2;
        const double e1 = row.errors.at(var).l2;
        if (e0 > kRoundoffError && e1 > kRoundoffError) {
          order = std::log(e0 / e1) / std::log(prev.dt / row.dt);
        }
      }
      row.order[var] = order;
    }
  }
}

/// Runs body(i) for i in [0, n) on up to `workers` threads.
void parallel_for(int n, int workers, const std::function<void(int)> &body) {
  const int threads = std::max(1, std::min(workers, n));
  if (threads == 1) {
    for (int i = 0; i < n; ++i) {
      body(i);
    }
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::jthread> pool;
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (int i = next++; i < n; i = next++) {
        body(i);
      }
    });
  }
}

} // namespace

auto converge(const RunConfig &config, std::vector<double> ladder,
              const ReferenceSolution &ref) -> ConvergenceTable {
  config.validate();
  normalize_ladder(ladder);
  if (ref.grid.n_cells != config.problem.n_cells ||
      ref.grid.x_min != config.problem.x_min ||
      ref.grid.x_max != config.problem.x_max ||
      std::abs(ref.t_final - config.problem.t_final) >
          1e-12 * config.problem.t_final) {
    throw DomainError("reference does not match the study problem/grid");
  }

  ConvergenceTable table;
  table.scheme = config.scheme;
  table.problem = config.problem.name;
  table.variables = error_variables();
  table.rows.resize(ladder.size());

  parallel_for(static_cast<int>(ladder.size()), config.workers, [&](int i) {
    auto &row = table.rows[at(i)];
    row.dt = ladder[at(i)];
    RunConfig cfg = config;
    cfg.controller.dt_fixed = row.dt;
    cfg.problem.output_times = {cfg.problem.t_final};
    cfg.output_dir.clear();
    try {
      const RunReport rep = run(cfg, &ref.state);
      row.errors = *rep.errors;
      row.stats = rep.stats;
      row.wallclock = rep.wallclock;
      for (const auto &[var, e] : row.errors) {
        if (!std::isfinite(e.l2)) {
          row.stable = false;
          row.failure = "non-finite error in " + var;
        }
      }
    } catch (const Error &e) {
      row.stable = false;
      row.failure = e.what();
    }
  });
  fill_orders(table);
  return table;
}

auto converge_scalar(const RunConfig &config, std::vector<double> ladder)
    -> ConvergenceTable {
  normalize_ladder(ladder);
  const SchemeSpec scheme = resolve_scheme(config.scheme);
  if (scheme.kind != SchemeSpec::Kind::Limex) {
    throw SchemeError("the scalar ODE mode needs an IMEX pair, not " +
                      config.scheme);
  }
  const auto &ode = config.ode;
  const double exact =
      ode.y0 * std::exp((ode.lambda_explicit + ode.lambda_implicit) * ode.t_final);

  ConvergenceTable table;
  table.scheme = config.scheme;
  table.problem = "scalar-ode";
  table.variables = {"y"};
  for (double dt : ladder) {
    const double steps = ode.t_final / dt;
    const double n = std::round(steps);
    if (std::abs(steps - n) > 1e-9 * steps) {
      throw DomainError("scalar ODE ladder dt must divide t_final");
    }
    double y = ode.y0;
    for (int k = 0; k < static_cast<int>(n); ++k) {
      y = limex_scalar_step(*scheme.pair, ode.lambda_explicit,
                            ode.lambda_implicit, y, dt);
    }
    ConvergenceRow row;
    row.dt = dt;
    const double e = std::abs(y - exact) / std::abs(exact);
    row.errors["y"] = {e, e, e};
    row.stable = std::isfinite(e);
    if (!row.stable) {
      row.failure = "non-finite solution";
    }
    table.rows.push_back(row);
  }
  fill_orders(table);
  return table;
}

void write_convergence(const ConvergenceTable &table, const fs::path &dir) {
  fs::create_directories(dir);
  auto os = open_out(dir / ("convergence_" + sanitize(table.problem) + "_" +
                            sanitize(table.scheme) + ".csv"));
  os << "dt,status";
  for (const auto &v : table.variables) {
    os << fmt::format(",{0}_l1,{0}_l2,{0}_linf,{0}_order", v);
  }
  os << '\n';
  for (const auto &row : table.rows) {
    os << fmt::format("{:.17g},{}", row.dt, row.stable ? "ok" : "UNSTABLE");
    for (const auto &v : table.variables) {
      if (!row.stable) {
        os << ",,,,";
        continue;
      }
      const auto &e = row.errors.at(v);
      const double order = row.order.at(v);
      os << fmt::format(",{:.17g},{:.17g},{:.17g},{}", e.l1, e.l2, e.linf,
                        std::isnan(order) ? std::string()
                                          : fmt::format("{:.6f}", order));
    }
    os << '\n';
  }
}

// ------------------------------------------------------------------ audit

auto AuditVerdict::message() const -> std::string {
  if (worst_step < 0) {
    return "PASS: no steps to audit";
  }
  return fmt::format("{}: worst relative energy drift {:.3e} at step {} "
                     "(tolerance {:.1e})",
                     pass ? "PASS" : "FAIL", worst_drift, worst_step,
                     tolerance);
}

auto audit(const RunReport &report, double tolerance) -> AuditVerdict {
  AuditVerdict v;
  v.tolerance = tolerance;
  for (const auto &s : report.steps) {
    const double d = std::abs(s.drift());
    if (v.worst_step < 0 || d > v.worst_drift || std::isnan(d)) {
      v.worst_drift = d;
      v.worst_step = s.index;
    }
    if (!(d <= tolerance)) {
      v.pass = false;
    }
  }
  return v;
}

// ------------------------------------------------------------------ plots

auto emit_plots(const std::vector<RunReport> &reports,
                const std::vector<ConvergenceTable> &tables,
                const fs::path &dir) -> std::vector<fs::path> {
  std::vector<fs::path> written;
  if (reports.empty() && tables.empty()) {
    fmt::print(stderr, "warning: emit_plots called with no reports or "
                       "tables; nothing written\n");
    return written;
  }
  fs::create_directories(dir);
  std::string script = "set datafile separator ','\nset key outside\n"
                       "set terminal pngcairo size 900,600\n";

  const std::vector<std::string> variables = {"rho", "u", "p", "T", "Er", "ei"};
  for (const auto &rep : reports) {
    for (const auto &var : variables) {
      const std::string name = "profile_" + sanitize(rep.problem) + "_" +
                               sanitize(rep.scheme) + "_" + var + ".csv";
      auto os = open_out(dir / name);
      os << "x";
      for (const auto &snap : rep.snapshots) {
        os << fmt::format(",{:g}", snap.time);
      }
      os << '\n';
      std::vector<PrimitiveState> prims;
      for (const auto &snap : rep.snapshots) {
        prims.push_back(conserved_to_primitive(snap.state, rep.eos));
      }
      for (int k = rep.grid.begin(); k < rep.grid.end(); ++k) {
        os << fmt::format("{:.17g}", rep.grid.x_center(k));
        for (std::size_t s = 0; s < prims.size(); ++s) {
          const auto &w = prims[s];
          const auto kk = at(k);
          double value = 0.0;
          if (var == "rho") {
            value = w.rho[kk];
          } else if (var == "u") {
            value = w.u[kk];
          } else if (var == "p") {
            value = w.p[kk];
          } else if (var == "T") {
            value = w.T[kk];
          } else if (var == "Er") {
            value = w.Er[kk];
          } else {
            value = w.p[kk] / ((rep.eos.gamma - 1.0) * w.rho[kk]);
          }
          os << fmt::format(",{:.17g}", value);
        }
        os << '\n';
      }
      written.push_back(dir / name);
      script += fmt::format("set output '{}.png'\nset xlabel 'x (cm)'\n"
                            "set ylabel '{}'\nplot for [i=2:{}] '{}' using "
                            "1:i with lines title columnhead(i)\n",
                            name.substr(0, name.size() - 4), var,
                            rep.snapshots.size() + 1, name);
    }
  }

  std::map<std::string, std::vector<const ConvergenceTable *>> by_problem;
  for (const auto &t : tables) {
    by_problem[t.problem].push_back(&t);
  }
  for (const auto &[problem, group] : by_problem) {
    std::set<double, std::greater<>> dts;
    for (const auto *t : group) {
      for (const auto &row : t->rows) {
        dts.insert(row.dt);
      }
    }
    const std::string name = "convergence_" + sanitize(problem) + ".csv";
    auto os = open_out(dir / name);
    os << "dt";
    int columns = 0;
    for (const auto *t : group) {
      for (const auto &v : t->variables) {
        // Commas inside scheme names would split the CSV header.
        std::string label = t->scheme;
        std::replace(label.begin(), label.end(), ',', ';');
        os << ',' << label << ':' << v;
        ++columns;
      }
    }
    os << '\n';
    for (double dt : dts) {
      os << fmt::format("{:.17g}", dt);
      for (const auto *t : group) {
        const auto row = std::find_if(t->rows.begin(), t->rows.end(),
                                      [&](const auto &r) { return r.dt == dt; });
        for (const auto &v : t->variables) {
          if (row == t->rows.end()) {
            os << ',';
          } else if (!row->stable) {
            os << ",nan";
          } else {
            os << fmt::format(",{:.17g}", row->errors.at(v).l2);
          }
        }
      }
      os << '\n';
    }
    written.push_back(dir / name);
    script += fmt::format("set output '{}.png'\nset logscale xy\n"
                          "set xlabel 'dt (s)'\nset ylabel 'relative L2 error'\n"
                          "plot for [i=2:{}] '{}' using 1:i with linespoints "
                          "title columnhead(i)\nunset logscale\n",
                          name.substr(0, name.size() - 4), columns + 1, name);
  }

  auto os = open_out(dir / "plots.gp");
  os << script;
  written.push_back(dir / "plots.gp");
  return written;
}

} // namespace radhydro
