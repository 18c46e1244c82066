/**
 * @file harness.hpp
 * @brief Simulation driver, reference generation, convergence studies,
 * conservation audits and plot-data emission.
 */

#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "radhydro/errors.hpp"
#include "radhydro/integrators.hpp"
#include "radhydro/problems.hpp"

namespace radhydro {

// ---------------------------------------------------------------- schemes

struct SchemeSpec {
  enum class Kind { Limex, Alimex, Split };
  std::string name;
  Kind kind = Kind::Limex;
  const ImexPair *pair = nullptr; // Limex only
  HydroScheme hydro = HydroScheme::ForwardEuler; // Split only
};

/// Accepts registry names plus "ALIMEX-Euler", "Op-Split", "Op-Split-RK3"
/// and "Op-Split-TVD3". Throws SchemeError otherwise.
[[nodiscard]] auto resolve_scheme(std::string_view name) -> SchemeSpec;
[[nodiscard]] auto available_schemes() -> std::vector<std::string>;

[[nodiscard]] auto advance(const Model &model, const CellState &state,
                           double dt, const SchemeSpec &scheme) -> StepResult;

// ----------------------------------------------------------------- config

enum class ProblemKind { Shock, PerturbedBox, ScalarOde };

/// y' = lambda_explicit y + lambda_implicit y, split across the two tableaux.
struct ScalarOdeSpec {
  double lambda_explicit = -1.0;
  double lambda_implicit = -4.0;
  double y0 = 1.0;
  double t_final = 1.0;
};

struct RunConfig {
  ProblemKind kind = ProblemKind::Shock;
  std::string preset = "mach3";
  ShockProblemSpec problem = shock_preset("mach3");
  double perturbation = 0.1; // PerturbedBox amplitude
  bool radiative_jump = true; // false: hydro-only jump states
  ScalarOdeSpec ode;

  std::string scheme = "H-LDIRK2(2,2,2)";
  StepController controller;
  SolverSettings solver;
  std::filesystem::path output_dir; // empty: nothing is written

  int halvings = 4;
  std::optional<double> dt0; // first ladder entry; default hydro CFL
  std::string reference_scheme = "H-LDIRK2(2,2,2)";
  int reference_refinement = 32; // dt_ref = smallest study dt / this
  int workers = 1;
  double audit_tol = 1e-11;
  std::vector<std::string> study_schemes;

  /// Throws ConfigError on unresolvable schemes or inconsistent settings.
  void validate() const;
};

/// INI text with sections [problem], [scheme], [solver], [output], [study].
/// Unknown sections or keys are errors. See README for the schema.
[[nodiscard]] auto parse_config(std::istream &is) -> RunConfig;
[[nodiscard]] auto load_config(const std::filesystem::path &path) -> RunConfig;
[[nodiscard]] auto config_for_preset(std::string_view preset) -> RunConfig;

[[nodiscard]] auto build_problem(const RunConfig &config) -> InitialProblem;
[[nodiscard]] auto make_model(const RunConfig &config,
                              const InitialProblem &problem) -> Model;

// -------------------------------------------------------------------- run

/// Numerical failure inside a run, tagged with where it happened.
class SimulationError : public Error {
public:
  SimulationError(const std::string &what, int step, double time)
      : Error(what), step_(step), time_(time) {}
  [[nodiscard]] auto step() const -> int { return step_; }
  [[nodiscard]] auto time() const -> double { return time_; }

private:
  int step_;
  double time_;
};

struct Snapshot {
  double time = 0.0;
  CellState state;
};

struct StepRecord {
  int index = 0;
  double time = 0.0; // at the end of the step
  double dt = 0.0;
  double energy_before = 0.0;
  double energy_after = 0.0;
  double outflow = 0.0;

  /// (E_after - E_before + outflow) / |E_before|.
  [[nodiscard]] auto drift() const -> double;
};

struct ErrorNorms {
  double l1 = 0.0;
  double l2 = 0.0;
  double linf = 0.0;
};

using VariableErrors = std::map<std::string, ErrorNorms>;

/// Variables compared in error norms, in output order.
[[nodiscard]] auto error_variables() -> const std::vector<std::string> &;

/// Relative errors over interior cells; each norm is divided by the same
/// norm of the reference (absolute when the reference norm vanishes).
[[nodiscard]] auto relative_errors(const Grid1D &grid, const CellState &sol,
                                   const CellState &ref) -> VariableErrors;

struct RunReport {
  std::string scheme;
  std::string problem;
  Grid1D grid;
  EosIdealGas eos;
  std::vector<Snapshot> snapshots;
  CellState final_state;
  double final_time = 0.0;
  std::vector<StepRecord> steps;
  StepStats stats;
  double wallclock = 0.0;
  std::optional<VariableErrors> errors;
};

/// Runs the configured problem to t_final. Steps are clipped to land on
/// output times; temperature is synced from the EOS at the start of every
/// step. Writes snapshots and report.json when output_dir is set.
[[nodiscard]] auto run(const RunConfig &config,
                       const CellState *reference = nullptr) -> RunReport;

void write_report(const RunReport &report, const std::filesystem::path &dir);

// -------------------------------------------------------------- reference

struct ReferenceSolution {
  std::string scheme;
  std::string problem;
  double dt_ref = 0.0;
  double t_final = 0.0;
  Grid1D grid;
  CellState state;
};

/// Fixed-step run with the reference scheme. Throws DomainError unless
/// dt_ref * reference_refinement <= smallest_study_dt.
[[nodiscard]] auto reference(const RunConfig &config, double dt_ref,
                             double smallest_study_dt) -> ReferenceSolution;

void write_reference(const ReferenceSolution &ref,
                     const std::filesystem::path &dir);
[[nodiscard]] auto read_reference(const std::filesystem::path &dir,
                                  const EosIdealGas &eos)
    -> ReferenceSolution;

// ------------------------------------------------------------ convergence

struct ConvergenceRow {
  double dt = 0.0;
  bool stable = true;
  std::string failure; // set when unstable
  VariableErrors errors;
  std::map<std::string, double> order; // L2 order vs previous stable row
  StepStats stats;
  double wallclock = 0.0;
};

struct ConvergenceTable {
  std::string scheme;
  std::string problem;
  std::vector<std::string> variables;
  std::vector<ConvergenceRow> rows; // dt strictly decreasing
};

/// dt0, dt0/2, ..., dt0/2^halvings. dt0 defaults to the hydro CFL step of
/// the initial state, shrunk so that t_final is an integer multiple.
[[nodiscard]] auto default_ladder(const RunConfig &config) -> std::vector<double>;

/// Runs `config.scheme` at each ladder dt. Failing entries are marked
/// unstable and do not stop the study.
[[nodiscard]] auto converge(const RunConfig &config,
                            std::vector<double> ladder,
                            const ReferenceSolution &ref) -> ConvergenceTable;

/// Same protocol on the scalar ODE against its exact exponential solution.
[[nodiscard]] auto converge_scalar(const RunConfig &config,
                                   std::vector<double> ladder)
    -> ConvergenceTable;

void write_convergence(const ConvergenceTable &table,
                       const std::filesystem::path &dir);

// ------------------------------------------------------------------ audit

struct AuditVerdict {
  bool pass = true;
  double tolerance = 0.0;
  double worst_drift = 0.0;
  int worst_step = -1;
  [[nodiscard]] auto message() const -> std::string;
};

[[nodiscard]] auto audit(const RunReport &report, double tolerance)
    -> AuditVerdict;

// ------------------------------------------------------------------ plots

/// Writes profile CSVs (x against each variable at every snapshot time),
/// one convergence CSV per problem and a gnuplot script. Returns the files
/// written; with no inputs nothing is written and a warning is printed.
auto emit_plots(const std::vector<RunReport> &reports,
                const std::vector<ConvergenceTable> &tables,
                const std::filesystem::path &dir)
    -> std::vector<std::filesystem::path>;

} // namespace radhydro
