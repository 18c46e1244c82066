#include "radhydro/integrators.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "radhydro/errors.hpp"

namespace radhydro {

namespace {

auto at(int k) -> std::size_t { return static_cast<std::size_t>(k); }

/// Adds dt * N_E(rates) to the four conserved fields of `y`.
void add_explicit(const Grid1D &grid, CellState &y, double scale,
                  const ExplicitRates &r) {
  for (int i = 0; i < grid.n_cells; ++i) {
    const auto k = at(grid.begin() + i);
    y.rho[k] += scale * r.d_rho[at(i)];
    y.mom[k] += scale * r.d_mom[at(i)];
    y.rho_et[k] += scale * r.d_rho_et[at(i)];
    y.Er[k] += scale * r.d_Er[at(i)];
  }
}

auto zero_rates(int n) -> ExplicitRates {
  ExplicitRates r;
  r.d_rho.assign(at(n), 0.0);
  r.d_mom.assign(at(n), 0.0);
  r.d_rho_et.assign(at(n), 0.0);
  r.d_Er.assign(at(n), 0.0);
  r.d_T.assign(at(n), 0.0);
  return r;
}

auto diffusive_outflow(const StageSolution &sol) -> double {
  return -(sol.diffusive_flux_right - sol.diffusive_flux_left);
}

} // namespace

auto limex_step(const Model &model, const CellState &state, double dt,
                const ImexPair &pair) -> StepResult {
  const Grid1D &grid = model.grid;
  const auto &eos = model.material.eos;
  StepResult result;
  std::vector<double> stage_outflow;

  int stage_index = 0;
  auto stage = [&](const CellState &y_star, const CellState &known,
                   double w) -> CellState {
    const int this_stage = ++stage_index;
    const ExplicitRates er = explicit_operator(grid, y_star, model.bc, eos);
    ++result.stats.explicit_evals;
    const StageContext ctx =
        freeze(grid, y_star, model.bc, model.material, er);

    const int n = grid.n_cells;
    StageRhs rhs;
    rhs.w = w;
    rhs.b_rho_et.resize(at(n));
    rhs.b_Er.resize(at(n));
    rhs.b_T.resize(at(n));
    for (int i = 0; i < n; ++i) {
      const auto k = at(grid.begin() + i);
      rhs.b_rho_et[at(i)] = known.rho_et[k] + w * er.d_rho_et[at(i)];
      rhs.b_Er[at(i)] = known.Er[k] + w * er.d_Er[at(i)];
      rhs.b_T[at(i)] = known.T[k];
    }

    StageSolution sol;
    try {
      sol = solve_stage(ctx, rhs, model.solver);
    } catch (const NonConvergence &e) {
      throw NonConvergence("stage " + std::to_string(this_stage) + ": " +
                               e.label(),
                           e.residual(), e.iterations());
    } catch (const NegativeState &e) {
      throw NegativeState("stage " + std::to_string(this_stage) + ": " +
                          e.what());
    }
    if (w > 0.0) {
      ++result.stats.implicit_solves;
    }
    result.stats.nonlinear_iters += sol.iterations;

    CellState rate(grid);
    for (int i = 0; i < n; ++i) {
      const auto k = at(grid.begin() + i);
      const auto ii = at(i);
      double radiation; // div D grad E - exchange
      double dT;
      if (w > 0.0) {
        radiation = (sol.Er[ii] - rhs.b_Er[ii]) / w;
        dT = (sol.T[ii] - rhs.b_T[ii]) / w;
      } else {
        radiation = sol.diffusion[ii] - sol.exchange[ii];
        dT = (sol.exchange[ii] + ctx.L_T[ii]) / (ctx.rho[ii] * ctx.c_v[ii]);
      }
      rate.rho[k] = er.d_rho[ii];
      rate.mom[k] = er.d_mom[ii];
      rate.Er[k] = er.d_Er[ii] + radiation;
      rate.rho_et[k] = er.d_rho_et[ii] + sol.diffusion[ii] - radiation;
      rate.T[k] = dT;
    }
    stage_outflow.push_back(er.energy_outflow() + diffusive_outflow(sol));
    return rate;
  };

  result.state = limex_drive(pair, state, dt, stage);
  for (std::size_t j = 0; j < stage_outflow.size(); ++j) {
    result.energy_outflow += dt * pair.implicit_tableau.b[j] * stage_outflow[j];
  }
  return result;
}

auto alimex_first_order_step(const Model &model, const CellState &state,
                             double dt) -> StepResult {
  const Grid1D &grid = model.grid;
  const auto &eos = model.material.eos;
  const int n = grid.n_cells;
  StepResult result;

  const ExplicitRates er0 = explicit_operator(grid, state, model.bc, eos);
  CellState y_star = state;
  add_explicit(grid, y_star, dt, er0);

  const ExplicitRates er_star = explicit_operator(grid, y_star, model.bc, eos);
  result.stats.explicit_evals = 2;
  const StageContext ctx =
      freeze(grid, y_star, model.bc, model.material, er_star);

  StageRhs rhs;
  rhs.w = dt;
  rhs.b_rho_et.resize(at(n));
  rhs.b_Er.resize(at(n));
  rhs.b_T.resize(at(n));
  for (int i = 0; i < n; ++i) {
    const auto k = at(grid.begin() + i);
    rhs.b_rho_et[at(i)] = y_star.rho_et[k];
    rhs.b_Er[at(i)] = y_star.Er[k];
    rhs.b_T[at(i)] = state.T[k];
  }
  const StageSolution sol = solve_stage(ctx, rhs, model.solver);
  result.stats.implicit_solves = 1;
  result.stats.nonlinear_iters = sol.iterations;

  result.state = y_star;
  for (int i = 0; i < n; ++i) {
    const auto k = at(grid.begin() + i);
    result.state.rho_et[k] = sol.rho_et[at(i)];
    result.state.Er[k] = sol.Er[at(i)];
    result.state.T[k] = sol.T[at(i)];
  }
  result.energy_outflow = dt * (er0.energy_outflow() + diffusive_outflow(sol));
  return result;
}

auto hydro_tableau(HydroScheme scheme) -> ButcherTableau {
  switch (scheme) {
  case HydroScheme::Kutta3:
    return kutta_rk3_tableau();
  case HydroScheme::Tvd3:
    return ssp_rk3_tableau();
  case HydroScheme::ForwardEuler:
  default:
    return forward_euler_tableau();
  }
}

auto lie_trotter_step(const Model &model, const CellState &state, double dt,
                      HydroScheme scheme, SplitTemperature t_star)
    -> StepResult {
  const Grid1D &grid = model.grid;
  const auto &eos = model.material.eos;
  const int n = grid.n_cells;
  StepResult result;

  // Steps 1 and 1.5: explicit RK on (rho, rho u, rho e_t, E_r) with N_E.
  const ButcherTableau tab = hydro_tableau(scheme);
  const int s = tab.stages();
  std::vector<ExplicitRates> k_rates;
  k_rates.reserve(at(s));
  CellState hydro = state;
  double hydro_outflow = 0.0;
  for (int i = 0; i < s; ++i) {
    CellState y_i = state;
    for (int j = 0; j < i; ++j) {
      add_explicit(grid, y_i, dt * tab.a(i, j), k_rates[at(j)]);
    }
    k_rates.push_back(explicit_operator(grid, y_i, model.bc, eos));
    ++result.stats.explicit_evals;
    add_explicit(grid, hydro, dt * tab.b[at(i)], k_rates.back());
    hydro_outflow += tab.b[at(i)] * k_rates.back().energy_outflow();
  }

  std::vector<double> T_star(at(n));
  if (t_star == SplitTemperature::Eos) {
    for (int i = 0; i < n; ++i) {
      const int k = grid.begin() + i;
      const auto kk = at(k);
      const double e_i =
          internal_energy(hydro.rho[kk], hydro.mom[kk], hydro.rho_et[kk], k);
      T_star[at(i)] = temperature_from_eos(eos, hydro.rho[kk], e_i);
    }
  } else {
    const ExplicitRates er = explicit_operator(grid, hydro, model.bc, eos);
    ++result.stats.explicit_evals;
    const auto lt = temperature_source(grid, hydro, er);
    for (int i = 0; i < n; ++i) {
      const auto k = at(grid.begin() + i);
      T_star[at(i)] = state.T[k] + dt * lt[at(i)] / (hydro.rho[k] * eos.c_v);
    }
  }
  for (int i = 0; i < n; ++i) {
    hydro.T[at(grid.begin() + i)] = T_star[at(i)];
  }

  // Step 2: implicit radiation solve with coefficients at the hydro state.
  const StageContext ctx =
      freeze(grid, hydro, model.bc, model.material, zero_rates(n));
  StageRhs rhs;
  rhs.w = dt;
  rhs.b_rho_et.resize(at(n));
  rhs.b_Er.resize(at(n));
  rhs.b_T = T_star;
  for (int i = 0; i < n; ++i) {
    const auto k = at(grid.begin() + i);
    rhs.b_rho_et[at(i)] = hydro.rho_et[k];
    rhs.b_Er[at(i)] = hydro.Er[k];
  }
  const StageSolution sol = solve_stage(ctx, rhs, model.solver);
  result.stats.implicit_solves = 1;
  result.stats.nonlinear_iters = sol.iterations;

  // Step 2.5: energy deposition.
  result.state = hydro;
  for (int i = 0; i < n; ++i) {
    const auto k = at(grid.begin() + i);
    const auto ii = at(i);
    result.state.Er[k] = sol.Er[ii];
    result.state.T[k] = sol.T[ii];
    result.state.rho_et[k] =
        hydro.rho_et[k] + hydro.rho[k] * eos.c_v * (sol.T[ii] - T_star[ii]);
  }
  result.energy_outflow = dt * (hydro_outflow + diffusive_outflow(sol));
  return result;
}

auto compute_dt(const Grid1D &grid, const CellState &state,
                const EosIdealGas &eos, const StepController &controller)
    -> double {
  if (controller.dt_fixed) {
    if (!(*controller.dt_fixed > 0.0)) {
      throw DomainError("fixed time step must be positive");
    }
    return *controller.dt_fixed;
  }
  if (!(controller.cfl > 0.0) || controller.cfl > 1.0) {
    throw DomainError("CFL number must lie in (0, 1]");
  }
  double s_max = 0.0;
  for (int k = grid.begin(); k < grid.end(); ++k) {
    const auto w = cell_primitive(state, k, eos);
    s_max = std::max(s_max, std::abs(w.u) + sound_speed(eos, w.rho, w.p));
  }
  if (!(s_max > 0.0)) {
    throw DomainError("degenerate CFL: maximum signal speed is zero");
  }
  return controller.cfl * grid.h() / s_max;
}

auto limex_scalar_step(const ImexPair &pair, double lambda_E, double lambda_I,
                       double y, double dt) -> double {
  auto stage = [&](double y_star, double known, double w) {
    const double y_i = (known + w * lambda_E * y_star) / (1.0 - w * lambda_I);
    return lambda_E * y_star + lambda_I * y_i;
  };
  return limex_drive(pair, y, dt, stage);
}

} // namespace radhydro
