#include "radhydro/problems.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "radhydro/errors.hpp"

namespace radhydro {

namespace {

auto table1_material() -> Material {
  return Material{EosIdealGas::make(5.0 / 3.0, 1.447e12),
                  ConstantOpacity{577.35, 0.0}, Constants{}};
}

} // namespace

void ShockProblemSpec::validate() const {
  if (!(mach > 0.0)) {
    throw DomainError("Mach number must be positive");
  }
  if (!(rho_u > 0.0) || !(T_mu > 0.0) || !(T_ru > 0.0)) {
    throw DomainError("upstream density and temperatures must be positive");
  }
  if (!(x_max > x_min) || n_cells < 1) {
    throw DomainError("invalid domain");
  }
  if (t_final < 0.0) {
    throw DomainError("t_final must be non-negative");
  }
  for (double t : output_times) {
    if (t < 0.0 || t > t_final) {
      throw DomainError(
          fmt::format("output time {:g} lies outside [0, t_final]", t));
    }
  }
}

auto shock_preset(std::string_view name) -> ShockProblemSpec {
  ShockProblemSpec spec;
  spec.name = std::string(name);
  spec.material = table1_material();
  if (name == "mach1.2" || name == "mach3") {
    spec.mach = name == "mach3" ? 3.0 : 1.2;
    spec.x_min = 0.0;
    spec.x_max = 0.06;
    spec.n_cells = 240;
    spec.shock_position = 0.03;
    spec.t_final = 0.75e-9;
    spec.output_times = {0.0, 0.25e-9, 0.5e-9, 0.75e-9};
    return spec;
  }
  if (name == "mach45") {
    spec.mach = 45.0;
    spec.material.opacity = PowerLawOpacity{4.494e8, 2.0, -3.5, 0.4006, 1.0};
    spec.shock_speed = -5.7054e8;
    spec.x_min = 0.0;
    spec.x_max = 0.6;
    spec.n_cells = 240;
    spec.shock_position = 0.3;
    spec.t_final = 150e-9;
    spec.output_times = {0.0, 50e-9, 100e-9, 150e-9};
    return spec;
  }
  throw ConfigError("unknown problem preset '" + std::string(name) +
                    "' (expected mach1.2, mach3, mach45 or perturbed)");
}

auto perturbed_box_preset() -> ShockProblemSpec {
  ShockProblemSpec spec;
  spec.name = "perturbed";
  spec.material = table1_material();
  spec.mach = 1.0;
  spec.x_min = 0.0;
  spec.x_max = 0.06;
  spec.n_cells = 128;
  spec.shock_position = 0.03;
  spec.t_final = 0.25e-9;
  spec.output_times = {0.0, 0.25e-9};
  return spec;
}

auto upstream_state(const ShockProblemSpec &spec) -> PrimitiveCell {
  const auto &eos = spec.material.eos;
  PrimitiveCell up;
  up.rho = spec.rho_u;
  up.T = spec.T_mu;
  up.p = pressure(eos, up.rho, internal_energy_from_temperature(eos, up.T));
  up.u = spec.mach * sound_speed(eos, up.rho, up.p);
  const double T2 = spec.T_ru * spec.T_ru;
  up.Er = spec.material.constants.a * T2 * T2;
  up.pr = radiation_pressure(up.Er);
  return up;
}

auto jump_hydro(const ShockProblemSpec &spec) -> JumpStates {
  if (spec.mach < 1.0) {
    throw DomainError("hydrodynamic jump needs M >= 1");
  }
  const auto &eos = spec.material.eos;
  const double g = eos.gamma;
  const double m2 = spec.mach * spec.mach;
  JumpStates j;
  j.upstream = upstream_state(spec);
  const auto &up = j.upstream;
  auto &down = j.downstream;
  down.rho = up.rho * (g + 1.0) * m2 / (2.0 + (g - 1.0) * m2);
  down.u = up.u * up.rho / down.rho;
  down.p = up.p * (1.0 + 2.0 * g * (m2 - 1.0) / (g + 1.0));
  down.T = temperature_from_eos(eos, down.rho,
                                down.p / ((g - 1.0) * down.rho));
  const double T2 = down.T * down.T;
  down.Er = spec.material.constants.a * T2 * T2;
  down.pr = radiation_pressure(down.Er);
  return j;
}

namespace {

struct Fluxes {
  double mass;
  double momentum;
  double energy;
};

auto fluxes(const EosIdealGas &eos, const PrimitiveCell &w, bool radiation)
    -> Fluxes {
  const double pr = radiation ? radiation_pressure(w.Er) : 0.0;
  const double Er = radiation ? w.Er : 0.0;
  const double E = w.p / (eos.gamma - 1.0) + 0.5 * w.rho * w.u * w.u + Er;
  return {w.rho * w.u, w.rho * w.u * w.u + w.p + pr, (E + w.p + pr) * w.u};
}

} // namespace

auto jump_residual(const ShockProblemSpec &spec, const JumpStates &states,
                   bool with_radiation) -> std::array<double, 3> {
  const auto &eos = spec.material.eos;
  const Fluxes fu = fluxes(eos, states.upstream, with_radiation);
  const Fluxes fd = fluxes(eos, states.downstream, with_radiation);
  return {(fu.mass - fd.mass) / fu.mass,
          (fu.momentum - fd.momentum) / fu.momentum,
          (fu.energy - fd.energy) / fu.energy};
}

auto jump_full(const ShockProblemSpec &spec, const JumpStates &initial_guess)
    -> JumpStates {
  const auto &eos = spec.material.eos;
  const double g = eos.gamma;
  const double cv = eos.c_v;
  const double a = spec.material.constants.a;

  JumpStates j = initial_guess;
  j.upstream = upstream_state(spec);
  const Fluxes fu = fluxes(eos, j.upstream, true);

  double rho = j.downstream.rho;
  double u = j.downstream.u;
  double T = j.downstream.T;

  const auto residual = [&](double r, double v, double t) {
    const double t4 = t * t * t * t;
    const double p = (g - 1.0) * r * cv * t;
    const double enthalpy = g * r * cv * t + 0.5 * r * v * v + 4.0 / 3.0 * a * t4;
    return std::array<double, 3>{
        (fu.mass - r * v) / fu.mass,
        (fu.momentum - (r * v * v + p + a * t4 / 3.0)) / fu.momentum,
        (fu.energy - enthalpy * v) / fu.energy};
  };

  constexpr int kMaxIters = 50;
  constexpr double kTol = 1e-13;
  double norm = 0.0;
  for (int it = 0; it <= kMaxIters; ++it) {
    const auto f = residual(rho, u, T);
    norm = std::max({std::abs(f[0]), std::abs(f[1]), std::abs(f[2])});
    if (norm <= kTol) {
      j.downstream.rho = rho;
      j.downstream.u = u;
      j.downstream.T = T;
      j.downstream.p = (g - 1.0) * rho * cv * T;
      j.downstream.Er = a * T * T * T * T;
      j.downstream.pr = radiation_pressure(j.downstream.Er);
      return j;
    }
    if (it == kMaxIters) {
      break;
    }
    const double T3 = T * T * T;
    const double enthalpy =
        g * rho * cv * T + 0.5 * rho * u * u + 4.0 / 3.0 * a * T3 * T;
    // Jacobian of the scaled residual (rows) w.r.t. (rho, u, T).
    double J[3][3] = {
        {-u / fu.mass, -rho / fu.mass, 0.0},
        {-(u * u + (g - 1.0) * cv * T) / fu.momentum, -2.0 * rho * u / fu.momentum,
         -((g - 1.0) * rho * cv + 4.0 / 3.0 * a * T3) / fu.momentum},
        {-(g * cv * T + 0.5 * u * u) * u / fu.energy,
         -(enthalpy + rho * u * u) / fu.energy,
         -(g * rho * cv + 16.0 / 3.0 * a * T3) * u / fu.energy}};
    double rhs[3] = {-f[0], -f[1], -f[2]};
    // Gaussian elimination with partial pivoting.
    int perm[3] = {0, 1, 2};
    for (int col = 0; col < 3; ++col) {
      int piv = col;
      for (int r = col + 1; r < 3; ++r) {
        if (std::abs(J[perm[r]][col]) > std::abs(J[perm[piv]][col])) {
          piv = r;
        }
      }
      std::swap(perm[col], perm[piv]);
      const double d = J[perm[col]][col];
      if (d == 0.0) {
        throw SingularMatrix("singular jump-condition Jacobian");
      }
      for (int r = col + 1; r < 3; ++r) {
        const double f_r = J[perm[r]][col] / d;
        for (int c = col; c < 3; ++c) {
          J[perm[r]][c] -= f_r * J[perm[col]][c];
        }
        rhs[perm[r]] -= f_r * rhs[perm[col]];
      }
    }
    double dx[3];
    for (int col = 2; col >= 0; --col) {
      double acc = rhs[perm[col]];
      for (int c = col + 1; c < 3; ++c) {
        acc -= J[perm[col]][c] * dx[c];
      }
      dx[col] = acc / J[perm[col]][col];
    }
    rho += dx[0];
    u += dx[1];
    T += dx[2];
  }
  throw NonConvergence("radiative jump conditions", norm, kMaxIters);
}

auto build_initial_state(const ShockProblemSpec &spec, const JumpStates &jump)
    -> InitialProblem {
  spec.validate();
  const auto &eos = spec.material.eos;
  InitialProblem p{Grid1D::make(spec.x_min, spec.x_max, spec.n_cells),
                   CellState{}, NoFluxBc{}};
  p.state = CellState(p.grid);

  PrimitiveCell up = jump.upstream;
  PrimitiveCell down = jump.downstream;
  up.u += spec.shock_speed;
  down.u += spec.shock_speed;
  for (int k = p.grid.begin(); k < p.grid.end(); ++k) {
    const bool upstream_side = p.grid.x_center(k) < spec.shock_position;
    set_cell_from_primitive(p.state, k, upstream_side ? up : down, eos);
  }
  sync_temperature(p.grid, p.state, eos);
  p.bc = FixedStateBc{up, down};
  fill_ghosts(p.grid, p.state, p.bc, eos);
  return p;
}

auto build_perturbed_box(const ShockProblemSpec &spec, double amplitude)
    -> InitialProblem {
  spec.validate();
  const auto &eos = spec.material.eos;
  const double a = spec.material.constants.a;
  InitialProblem p{Grid1D::make(spec.x_min, spec.x_max, spec.n_cells),
                   CellState{}, NoFluxBc{}};
  p.state = CellState(p.grid);
  const double length = spec.x_max - spec.x_min;
  const double p_ref = pressure(eos, spec.rho_u,
                                internal_energy_from_temperature(eos, spec.T_mu));
  const double cs = sound_speed(eos, spec.rho_u, p_ref);
  for (int k = p.grid.begin(); k < p.grid.end(); ++k) {
    const double phase =
        2.0 * std::numbers::pi * (p.grid.x_center(k) - spec.x_min) / length;
    PrimitiveCell w;
    w.rho = spec.rho_u * (1.0 + amplitude * std::sin(phase));
    w.u = amplitude * cs * std::sin(2.0 * phase);
    w.T = spec.T_mu * (1.0 + 0.5 * amplitude * std::cos(phase));
    w.p = pressure(eos, w.rho, internal_energy_from_temperature(eos, w.T));
    const double Tr = spec.T_ru * (1.0 + 0.5 * amplitude * std::sin(3.0 * phase));
    w.Er = a * Tr * Tr * Tr * Tr;
    w.pr = radiation_pressure(w.Er);
    set_cell_from_primitive(p.state, k, w, eos);
  }
  fill_ghosts(p.grid, p.state, p.bc, eos);
  return p;
}

} // namespace radhydro
