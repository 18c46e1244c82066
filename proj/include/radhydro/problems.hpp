/**
 * @file problems.hpp
 * @brief Radiative shock problem construction.
 *
 * Jump states are expressed in the shock frame with the upstream gas on the
 * left flowing in the +x direction; build_initial_state shifts every velocity
 * by shock_speed into the lab frame.
 */

#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "radhydro/physics.hpp"
#include "radhydro/spatial.hpp"
#include "radhydro/state.hpp"

namespace radhydro {

struct ShockProblemSpec {
  std::string name;
  double mach = 1.0;
  Material material;
  double rho_u = 1.0; // g/cm^3
  double T_mu = 100.0; // eV
  double T_ru = 100.0; // eV
  double shock_speed = 0.0; // cm/s
  double x_min = 0.0;
  double x_max = 0.06;
  int n_cells = 240;
  double shock_position = 0.03;
  double t_final = 0.75e-9;
  std::vector<double> output_times;

  /// Throws DomainError when the settings violate their invariants.
  void validate() const;
};

/// "mach1.2", "mach3" and "mach45" presets; throws ConfigError otherwise.
[[nodiscard]] auto shock_preset(std::string_view name) -> ShockProblemSpec;

/// Closed box used for conservation checks: shock-test material, NoFlux walls.
[[nodiscard]] auto perturbed_box_preset() -> ShockProblemSpec;

struct JumpStates {
  PrimitiveCell upstream;
  PrimitiveCell downstream;
};

/// Upstream state in the shock frame: u_u = M c_s, E_r = a T_ru^4.
[[nodiscard]] auto upstream_state(const ShockProblemSpec &spec)
    -> PrimitiveCell;

/// Closed-form jump ignoring radiation; downstream E_r = a T_d^4.
[[nodiscard]] auto jump_hydro(const ShockProblemSpec &spec) -> JumpStates;

/// Mass, momentum and energy flux mismatches, each divided by the
/// corresponding upstream flux. With `with_radiation` false the radiation
/// pressure and energy are dropped.
[[nodiscard]] auto jump_residual(const ShockProblemSpec &spec,
                                 const JumpStates &states,
                                 bool with_radiation = true)
    -> std::array<double, 3>;

/// Newton solve of the full jump conditions with E_r = a T^4 on each side.
/// Throws NonConvergence after 50 iterations.
[[nodiscard]] auto jump_full(const ShockProblemSpec &spec,
                             const JumpStates &initial_guess) -> JumpStates;

struct InitialProblem {
  Grid1D grid;
  CellState state;
  BoundaryCondition bc;
};

/// Step profile at shock_position, velocities shifted into the lab frame,
/// temperature synced, FixedState boundaries.
[[nodiscard]] auto build_initial_state(const ShockProblemSpec &spec,
                                       const JumpStates &jump)
    -> InitialProblem;

/// Smoothly perturbed density, velocity, material and radiation temperature
/// in a NoFlux box. `amplitude` scales every relative perturbation.
[[nodiscard]] auto build_perturbed_box(const ShockProblemSpec &spec,
                                       double amplitude) -> InitialProblem;

} // namespace radhydro
