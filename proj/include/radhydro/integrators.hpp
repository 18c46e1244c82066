/**
 * @file integrators.hpp
 * @brief LIMEX-RK, first-order ALIMEX and Lie-Trotter time steppers.
 */

#pragma once

#include <optional>
#include <vector>

#include "radhydro/implicit.hpp"
#include "radhydro/physics.hpp"
#include "radhydro/spatial.hpp"
#include "radhydro/state.hpp"
#include "radhydro/tableau.hpp"

namespace radhydro {

/// Everything a stepper needs besides the state itself.
struct Model {
  Grid1D grid;
  BoundaryCondition bc;
  Material material;
  SolverSettings solver;
};

struct StepStats {
  int explicit_evals = 0;
  int implicit_solves = 0;
  int nonlinear_iters = 0;

  auto operator+=(const StepStats &o) -> StepStats & {
    explicit_evals += o.explicit_evals;
    implicit_solves += o.implicit_solves;
    nonlinear_iters += o.nonlinear_iters;
    return *this;
  }
};

struct StepResult {
  CellState state;
  /// Total energy that left through the physical boundary during the step
  /// (advective plus diffusive), per unit area.
  double energy_outflow = 0.0;
  StepStats stats;
};

inline void axpy(double &y, double alpha, double x) { y += alpha * x; }

/// Generic LIMEX-RK step. `stage(y_star, known, w)` must return the stage
/// rate N(Y*_i, Y_i), where Y_i solves Y_i = known + w N(Y*_i, Y_i). Each
/// stage rate is computed once and reused in every later combination.
template <class Vec, class Stage>
auto limex_drive(const ImexPair &pair, const Vec &yn, double dt, Stage &&stage)
    -> Vec {
  const auto &ex = pair.explicit_tableau;
  const auto &im = pair.implicit_tableau;
  const int s = im.stages();
  std::vector<Vec> rates;
  rates.reserve(static_cast<std::size_t>(s));
  for (int i = 0; i < s; ++i) {
    Vec y_star = yn;
    Vec known = yn;
    for (int j = 0; j < i; ++j) {
      const auto &rate = rates[static_cast<std::size_t>(j)];
      axpy(y_star, dt * ex.a(i, j), rate);
      axpy(known, dt * im.a(i, j), rate);
    }
    rates.push_back(stage(y_star, known, dt * im.a(i, i)));
  }
  Vec y = yn;
  for (int j = 0; j < s; ++j) {
    axpy(y, dt * im.b[static_cast<std::size_t>(j)],
         rates[static_cast<std::size_t>(j)]);
  }
  return y;
}

/// LIMEX-RK step for the radiation-hydrodynamics system. The input state
/// must carry an EOS-consistent temperature.
[[nodiscard]] auto limex_step(const Model &model, const CellState &state,
                              double dt, const ImexPair &pair) -> StepResult;

/// First-order ALIMEX step: explicit step with N_E, coefficients frozen at
/// the updated explicit state, one implicit solve with w = dt.
[[nodiscard]] auto alimex_first_order_step(const Model &model,
                                           const CellState &state, double dt)
    -> StepResult;

enum class HydroScheme { ForwardEuler, Kutta3, Tvd3 };

/// How the split step forms T* after the hydro substep.
enum class SplitTemperature {
  Eos,       // T* = f_T(rho^{n+1}, e_i*)
  Linearized // T* = T_n + dt L_T* / (rho* c_v*)
};

[[nodiscard]] auto hydro_tableau(HydroScheme scheme) -> ButcherTableau;

/// Lie-Trotter operator split: explicit hydro + material-motion substep,
/// implicit (E_r, T) solve, then energy deposition
/// e_i^{n+1} = e_i* + c_v (T^{n+1} - T*).
[[nodiscard]] auto
lie_trotter_step(const Model &model, const CellState &state, double dt,
                 HydroScheme scheme,
                 SplitTemperature t_star = SplitTemperature::Eos)
    -> StepResult;

struct StepController {
  double cfl = 0.5;
  std::optional<double> dt_fixed;
};

/// cfl h / max(|u| + c_s) unless a fixed step is set.
[[nodiscard]] auto compute_dt(const Grid1D &grid, const CellState &state,
                              const EosIdealGas &eos,
                              const StepController &controller) -> double;

/// One LIMEX step of the scalar test equation y' = lambda_E y* + lambda_I y.
[[nodiscard]] auto limex_scalar_step(const ImexPair &pair, double lambda_E,
                                     double lambda_I, double y, double dt)
    -> double;

} // namespace radhydro
