#include <cmath>

#include <doctest.h>

#include "radhydro/errors.hpp"
#include "radhydro/integrators.hpp"
#include "radhydro/problems.hpp"

using namespace radhydro;
using doctest::Approx;

namespace {

auto at(int k) -> std::size_t { return static_cast<std::size_t>(k); }

auto max_rel_diff(const Grid1D &g, const CellState &a, const CellState &b)
    -> double {
  double worst = 0.0;
  const auto peak = [&](const std::vector<double> &x) {
    double m = 0.0;
    for (int k = g.begin(); k < g.end(); ++k) {
      m = std::max(m, std::abs(x[at(k)]));
    }
    return m;
  };
  const auto cmp = [&](const std::vector<double> &x, const std::vector<double> &y,
                       double floor = 0.0) {
    const double scale = std::max(peak(x), floor);
    for (int k = g.begin(); k < g.end(); ++k) {
      worst = std::max(worst, std::abs(x[at(k)] - y[at(k)]) / scale);
    }
  };
  cmp(a.rho, b.rho);
  // Momentum may vanish; measure it against sqrt(rho * rho_et).
  cmp(a.mom, b.mom, std::sqrt(peak(a.rho) * peak(a.rho_et)));
  cmp(a.rho_et, b.rho_et);
  cmp(a.Er, b.Er);
  cmp(a.T, b.T);
  return worst;
}

auto mach3_model() -> std::pair<Model, CellState> {
  const auto spec = shock_preset("mach3");
  auto p = build_initial_state(spec, jump_hydro(spec));
  return {Model{p.grid, p.bc, spec.material, SolverSettings{}}, p.state};
}

/// Uniform state at rest in radiative equilibrium. Open boundaries hold the
/// same state in the ghosts; closed walls drop the wall pressure force.
auto equilibrium(const Material &m, int n, bool closed = false)
    -> std::pair<Model, CellState> {
  const Grid1D g = Grid1D::make(0.0, 0.01, n);
  CellState s(g);
  PrimitiveCell w;
  w.rho = 1.0;
  w.T = 100.0;
  w.p = pressure(m.eos, w.rho, internal_energy_from_temperature(m.eos, w.T));
  w.Er = m.constants.a * 1e8;
  for (int k = 0; k < g.size(); ++k) {
    set_cell_from_primitive(s, k, w, m.eos);
  }
  const BoundaryCondition bc =
      closed ? BoundaryCondition{NoFluxBc{}} : BoundaryCondition{FixedStateBc{w, w}};
  return {Model{g, bc, m, SolverSettings{}}, s};
}

} // namespace

TEST_CASE("tableau registry") {
  const auto &euler = registry("IMEX-Euler");
  CHECK(euler.implicit_tableau.stages() == euler.explicit_tableau.stages());
  CHECK(euler.implicit_tableau.b.back() == 1.0);

  const double g = 1.0 - 1.0 / std::sqrt(2.0);
  const auto &h = registry("H-LDIRK2(2,2,2)");
  CHECK(h.implicit_tableau.a(0, 0) == Approx(0.29289321881).epsilon(1e-11));
  CHECK(h.implicit_tableau.a(1, 1) == Approx(g));
  // b^T c = 1/2 on the implicit tableau.
  CHECK(0.5 * h.implicit_tableau.c[0] + 0.5 * h.implicit_tableau.c[1] == Approx(0.5));

  const auto &ssp = registry("SSP-LDIRK3(3,3,2)");
  for (const auto *t : {&ssp.explicit_tableau, &ssp.implicit_tableau}) {
    CHECK(t->b[0] == Approx(1.0 / 6.0));
    CHECK(t->b[1] == Approx(1.0 / 6.0));
    CHECK(t->b[2] == Approx(2.0 / 3.0));
  }

  for (const auto &name : registered_pairs()) {
    INFO(name);
    CHECK(validate(registry(name)).ok());
    CHECK(registry(name).explicit_tableau.is_explicit());
    CHECK(registry(name).implicit_tableau.is_dirk());
  }
  CHECK_THROWS_AS((void)registry("no-such-scheme"), SchemeError);

  ImexPair broken = h;
  broken.explicit_tableau.b = {0.25, 0.75};
  CHECK_FALSE(validate(broken).ok());
}

TEST_CASE("H-LDIRK2 amplification factor") {
  // Two-stage recursion written out by hand for y' = lE y* + lI y, y0 = 1.
  const double g = 1.0 - 1.0 / std::sqrt(2.0);
  for (const auto [zE, zI] : {std::pair{-0.3, -2.5}, std::pair{0.2, -10.0},
                             std::pair{-1.0, 0.0}}) {
    const double d = 1.0 - g * zI;
    const double s = zE + zI;
    const double k1 = s / d;
    const double y2 = (1.0 + (1.0 - 2.0 * g) * k1 + g * zE * (1.0 + k1)) / d;
    const double k2 = zE * (1.0 + k1) + zI * y2;
    const double R = 1.0 + 0.5 * k1 + 0.5 * k2;
    CHECK(limex_scalar_step(registry("H-LDIRK2(2,2,2)"), zE, zI, 1.0, 1.0) ==
          Approx(R).epsilon(1e-14));
  }
  // IMEX-Euler: (1 + zE) / (1 - zI).
  CHECK(limex_scalar_step(registry("LIMEX-Euler"), -0.4, -3.0, 1.0, 1.0) ==
        Approx(0.6 / 4.0));
}

TEST_CASE("uniform equilibrium is a fixed point of every integrator") {
  const Material m{EosIdealGas{}, ConstantOpacity{577.35, 0.0}, Constants{}};
  auto [model, s] = equilibrium(m, 8);
  const double dt = 1e-11;
  for (const auto &name : registered_pairs()) {
    INFO(name);
    const auto r = limex_step(model, s, dt, registry(name));
    CHECK(max_rel_diff(model.grid, r.state, s) < 1e-14);
  }
  CHECK(max_rel_diff(model.grid, alimex_first_order_step(model, s, dt).state, s) < 1e-14);
  for (auto scheme : {HydroScheme::ForwardEuler, HydroScheme::Kutta3, HydroScheme::Tvd3}) {
    CHECK(max_rel_diff(model.grid, lie_trotter_step(model, s, dt, scheme).state, s) < 1e-14);
  }
}

TEST_CASE("zero coupling leaves only explicit hydrodynamics") {
  auto [model, s] = mach3_model();
  // Pure scattering: no coupling, and diffusion far below roundoff.
  model.material.opacity = ConstantOpacity{0.0, 1e30};
  const double dt = compute_dt(model.grid, s, model.material.eos, StepController{});
  const auto split = lie_trotter_step(model, s, dt, HydroScheme::ForwardEuler);
  const auto limex = limex_step(model, s, dt, registry("LIMEX-Euler"));
  const auto rates = explicit_operator(model.grid, s, model.bc, model.material.eos);
  CellState fe = s;
  for (int i = 0; i < model.grid.n_cells; ++i) {
    const auto k = at(model.grid.begin() + i);
    fe.rho[k] += dt * rates.d_rho[at(i)];
    fe.mom[k] += dt * rates.d_mom[at(i)];
    fe.rho_et[k] += dt * rates.d_rho_et[at(i)];
    fe.Er[k] += dt * rates.d_Er[at(i)];
  }
  for (const auto *r : {&split.state, &limex.state}) {
    for (int k = model.grid.begin(); k < model.grid.end(); ++k) {
      CHECK(r->rho[at(k)] == Approx(fe.rho[at(k)]).epsilon(1e-14));
      CHECK(r->rho_et[at(k)] == Approx(fe.rho_et[at(k)]).epsilon(1e-13));
      CHECK(r->Er[at(k)] == Approx(fe.Er[at(k)]).epsilon(1e-13));
    }
  }
}

TEST_CASE("ALIMEX-Euler equals the linearised split on a multi-cell shock") {
  auto [model, s] = mach3_model();
  const double dt = compute_dt(model.grid, s, model.material.eos, StepController{});
  const auto a = alimex_first_order_step(model, s, dt);
  const auto b = lie_trotter_step(model, s, dt, HydroScheme::ForwardEuler,
                                  SplitTemperature::Linearized);
  CHECK(max_rel_diff(model.grid, a.state, b.state) < 1e-12);
}

TEST_CASE("ALIMEX-Euler and LIMEX-Euler agree when nothing moves") {
  // One closed cell: no fluxes, so the starred state is the old state.
  const Material m{EosIdealGas{}, ConstantOpacity{577.35, 0.0}, Constants{}};
  auto [model, s] = equilibrium(m, 1, true);
  s.Er[at(model.grid.begin())] *= 3.0;
  const auto a = alimex_first_order_step(model, s, 1e-11);
  const auto l = limex_step(model, s, 1e-11, registry("LIMEX-Euler"));
  CHECK(max_rel_diff(model.grid, a.state, l.state) < 1e-14);
}

TEST_CASE("split step satisfies its own update equations") {
  auto [model, s] = mach3_model();
  const double dt = compute_dt(model.grid, s, model.material.eos, StepController{});
  const auto r = lie_trotter_step(model, s, dt, HydroScheme::ForwardEuler);
  // Mass and momentum are untouched by the radiation solve.
  const auto rates = explicit_operator(model.grid, s, model.bc, model.material.eos);
  for (int i = 0; i < model.grid.n_cells; ++i) {
    const auto k = at(model.grid.begin() + i);
    CHECK(r.state.rho[k] == Approx(s.rho[k] + dt * rates.d_rho[at(i)]).epsilon(1e-14));
    CHECK(r.state.mom[k] ==
          Approx(s.mom[k] + dt * rates.d_mom[at(i)]).epsilon(1e-13).scale(1e6));
  }
  // Total energy changes only by the boundary flux.
  const double e0 = total_energy(model.grid, s);
  const double e1 = total_energy(model.grid, r.state);
  CHECK(std::abs(e1 - e0 + r.energy_outflow) <= 1e-13 * e0);
}

TEST_CASE("hydrodynamic CFL step") {
  const auto spec = shock_preset("mach3");
  const auto up = upstream_state(spec);
  const Grid1D g = Grid1D::make(0.0, 1e-2, 100);
  CellState s(g);
  for (int k = 0; k < g.size(); ++k) {
    set_cell_from_primitive(s, k, up, spec.material.eos);
  }
  StepController c;
  const double dt = compute_dt(g, s, spec.material.eos, c);
  CHECK(dt == Approx(0.5 * 1e-4 / (4.0 * sound_speed(spec.material.eos, up.rho, up.p))));
  CHECK(dt == Approx(9.86e-13).epsilon(1e-3));
  c.cfl = 1.0;
  CHECK(compute_dt(g, s, spec.material.eos, c) == Approx(2.0 * dt));
  c.cfl = 1.5;
  CHECK_THROWS_AS((void)compute_dt(g, s, spec.material.eos, c), DomainError);
  c.dt_fixed = 3e-12;
  CHECK(compute_dt(g, s, spec.material.eos, c) == 3e-12);
}
