// Command-line front end for the radiation-hydrodynamics harness.

#include <cmath>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/core.h>

#include "radhydro/harness.hpp"

namespace {

using namespace radhydro;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitAudit = 3;

struct Options {
  std::string config;
  std::string scheme;
  std::optional<double> cfl;
  std::optional<double> dt;
  std::string out;
  std::optional<int> workers;
};

void add_common(CLI::App *cmd, Options &o) {
  cmd->add_option("--config", o.config, "INI configuration file");
  cmd->add_option("--scheme", o.scheme, "time integration scheme");
  auto *cfl = cmd->add_option("--cfl", o.cfl, "hydrodynamic CFL number");
  auto *dt = cmd->add_option("--dt", o.dt, "fixed time step (s)");
  cfl->excludes(dt);
  cmd->add_option("--out", o.out, "output directory");
  cmd->add_option("--workers", o.workers, "concurrent ladder runs")
      ->check(CLI::PositiveNumber);
}

auto load(const Options &o) -> RunConfig {
  RunConfig cfg = o.config.empty() ? config_for_preset("mach3")
                                   : load_config(o.config);
  if (!o.scheme.empty()) {
    cfg.scheme = o.scheme;
  }
  if (o.cfl) {
    cfg.controller.cfl = *o.cfl;
    cfg.controller.dt_fixed.reset();
  }
  if (o.dt) {
    cfg.controller.dt_fixed = *o.dt;
  }
  if (!o.out.empty()) {
    cfg.output_dir = o.out;
  }
  if (o.workers) {
    cfg.workers = *o.workers;
  }
  cfg.validate();
  return cfg;
}

auto format_order(double order) -> std::string {
  return std::isnan(order) ? std::string("-") : fmt::format("{:.3f}", order);
}

void print_table(const ConvergenceTable &t) {
  fmt::print("scheme {} on {}\n", t.scheme, t.problem);
  fmt::print("{:>14}", "dt");
  for (const auto &v : t.variables) {
    fmt::print(" {:>12} {:>7}", v + " L2", "order");
  }
  fmt::print("\n");
  for (const auto &row : t.rows) {
    fmt::print("{:>14.6e}", row.dt);
    if (!row.stable) {
      fmt::print("  UNSTABLE ({})\n", row.failure);
      continue;
    }
    for (const auto &v : t.variables) {
      fmt::print(" {:>12.4e} {:>7}", row.errors.at(v).l2,
                 format_order(row.order.at(v)));
    }
    fmt::print("\n");
  }
}

auto study_schemes(const RunConfig &cfg) -> std::vector<std::string> {
  return cfg.study_schemes.empty() ? std::vector<std::string>{cfg.scheme}
                                   : cfg.study_schemes;
}

auto make_reference(const RunConfig &cfg, const std::vector<double> &ladder)
    -> ReferenceSolution {
  const double smallest = ladder.back();
  return reference(cfg, smallest / cfg.reference_refinement, smallest);
}

auto cmd_run(const Options &o) -> int {
  const RunConfig cfg = load(o);
  const RunReport rep = run(cfg);
  const AuditVerdict v = audit(rep, cfg.audit_tol);
  fmt::print("{} on {}: {} steps to t = {:.6g} s, {} nonlinear iterations, "
             "{:.3f} s wallclock\n",
             rep.scheme, rep.problem, rep.steps.size(), rep.final_time,
             rep.stats.nonlinear_iters, rep.wallclock);
  fmt::print("energy audit {}\n", v.message());
  return kExitOk;
}

auto cmd_reference(const Options &o) -> int {
  const RunConfig cfg = load(o);
  const auto ladder = default_ladder(cfg);
  const double dt_ref = o.dt ? *o.dt : ladder.back() / cfg.reference_refinement;
  const ReferenceSolution ref = reference(cfg, dt_ref, ladder.back());
  fmt::print("reference {} on {} at dt = {:.6e} s\n", ref.scheme, ref.problem,
             ref.dt_ref);
  if (!cfg.output_dir.empty()) {
    write_reference(ref, cfg.output_dir);
    fmt::print("written to {}\n", cfg.output_dir.string());
  }
  return kExitOk;
}

auto cmd_converge(const Options &o) -> int {
  RunConfig cfg = load(o);
  cfg.controller.dt_fixed.reset();
  const auto ladder = default_ladder(cfg);
  std::optional<ReferenceSolution> ref;
  if (cfg.kind != ProblemKind::ScalarOde) {
    ref = make_reference(cfg, ladder);
  }
  bool any_unstable = false;
  for (const auto &scheme : study_schemes(cfg)) {
    RunConfig c = cfg;
    c.scheme = scheme;
    const ConvergenceTable t = ref ? converge(c, ladder, *ref)
                                   : converge_scalar(c, ladder);
    print_table(t);
    for (const auto &row : t.rows) {
      any_unstable = any_unstable || !row.stable;
    }
    if (!cfg.output_dir.empty()) {
      write_convergence(t, cfg.output_dir);
    }
  }
  if (ref && !cfg.output_dir.empty()) {
    write_reference(*ref, cfg.output_dir);
  }
  return any_unstable ? kExitNumerical : kExitOk;
}

auto cmd_audit(const Options &o) -> int {
  const RunConfig cfg = load(o);
  const RunReport rep = run(cfg);
  const AuditVerdict v = audit(rep, cfg.audit_tol);
  fmt::print("{} on {}: {}\n", rep.scheme, rep.problem, v.message());
  return v.pass ? kExitOk : kExitAudit;
}

auto cmd_tableaux() -> int {
  bool ok = true;
  const auto print_tab = [](const char *label, const ButcherTableau &t) {
    fmt::print("  {}:\n", label);
    for (std::size_t i = 0; i < t.A.size(); ++i) {
      fmt::print("    {:>22.17g} |", t.c[i]);
      for (double a : t.A[i]) {
        fmt::print(" {:>22.17g}", a);
      }
      fmt::print("\n");
    }
    fmt::print("    {:>22} |", "");
    for (double b : t.b) {
      fmt::print(" {:>22.17g}", b);
    }
    fmt::print("\n");
  };
  for (const auto &name : registered_pairs()) {
    const ImexPair &pair = registry(name);
    const ValidationReport rep = validate(pair);
    fmt::print("{} (order {}) [{}]\n  source: {}\n", pair.name, pair.order,
               rep.ok() ? "valid" : "INVALID", pair.provenance);
    print_tab("explicit", pair.explicit_tableau);
    print_tab("implicit", pair.implicit_tableau);
    for (const auto &msg : rep.violations) {
      fmt::print("  violation: {}\n", msg);
    }
    ok = ok && rep.ok();
  }
  return ok ? kExitOk : kExitNumerical;
}

auto cmd_emit_plots(const Options &o) -> int {
  RunConfig cfg = load(o);
  const auto dir = cfg.output_dir.empty() ? std::filesystem::path("plots")
                                          : cfg.output_dir;
  cfg.output_dir.clear();
  std::vector<RunReport> reports;
  std::vector<ConvergenceTable> tables;
  if (cfg.kind == ProblemKind::ScalarOde) {
    const auto ladder = default_ladder(cfg);
    for (const auto &scheme : study_schemes(cfg)) {
      RunConfig c = cfg;
      c.scheme = scheme;
      tables.push_back(converge_scalar(c, ladder));
    }
  } else {
    for (const auto &scheme : study_schemes(cfg)) {
      RunConfig c = cfg;
      c.scheme = scheme;
      reports.push_back(run(c));
    }
    if (!cfg.study_schemes.empty()) {
      RunConfig c = cfg;
      c.controller.dt_fixed.reset();
      const auto ladder = default_ladder(c);
      const ReferenceSolution ref = make_reference(c, ladder);
      for (const auto &scheme : cfg.study_schemes) {
        c.scheme = scheme;
        tables.push_back(converge(c, ladder, ref));
      }
    }
  }
  for (const auto &path : emit_plots(reports, tables, dir)) {
    fmt::print("wrote {}\n", path.string());
  }
  return kExitOk;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"1D gray-diffusion radiation-hydrodynamics solver"};
  app.require_subcommand(1);
  Options opts;
  auto *run_cmd = app.add_subcommand("run", "run a simulation");
  auto *ref_cmd = app.add_subcommand("reference", "compute a reference solution");
  auto *conv_cmd = app.add_subcommand("converge", "temporal convergence study");
  auto *audit_cmd = app.add_subcommand("audit", "run and audit energy conservation");
  auto *tab_cmd = app.add_subcommand("tableaux", "dump and validate IMEX pairs");
  auto *plot_cmd = app.add_subcommand("emit-plots", "write plot data and a gnuplot script");
  for (auto *cmd : {run_cmd, ref_cmd, conv_cmd, audit_cmd, plot_cmd}) {
    add_common(cmd, opts);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (run_cmd->parsed()) {
      return cmd_run(opts);
    }
    if (ref_cmd->parsed()) {
      return cmd_reference(opts);
    }
    if (conv_cmd->parsed()) {
      return cmd_converge(opts);
    }
    if (audit_cmd->parsed()) {
      return cmd_audit(opts);
    }
    if (tab_cmd->parsed()) {
      return cmd_tableaux();
    }
    if (plot_cmd->parsed()) {
      return cmd_emit_plots(opts);
    }
  } catch (const ConfigError &e) {
    fmt::print(stderr, "config error: {}\n", e.what());
    return kExitUsage;
  } catch (const SchemeError &e) {
    fmt::print(stderr, "scheme error: {}\n", e.what());
    return kExitUsage;
  } catch (const Error &e) {
    fmt::print(stderr, "numerical failure: {}\n", e.what());
    return kExitNumerical;
  } catch (const std::exception &e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kExitUsage;
  }
  return kExitUsage;
}
