/**
 * @file implicit.hpp
 * @brief Linearly implicit radiation / temperature stage solve.
 *
 * For frozen coefficients (sigma_E*, sigma_p*, D*, rho*, c_v*, L_T*) and
 * weight w = a_ii dt, each stage solves on the interior cells
 *
 *   E   = b_E + w (div D* grad E - sigma_E* c E + sigma_p* a c T^4)
 *   T   = b_T + w / (rho* c_v*) (sigma_E* c E - sigma_p* a c T^4 + L_T*)
 *
 * and then updates rho e_t algebraically.
 */

#pragma once

#include <span>
#include <vector>

#include "radhydro/physics.hpp"
#include "radhydro/spatial.hpp"
#include "radhydro/state.hpp"

namespace radhydro {

/// Frozen coefficients of one linearly implicit stage. Interior arrays have
/// n_cells entries; D spans every array cell so boundary faces can be formed.
struct StageContext {
  Grid1D grid;
  BoundaryCondition bc;
  Constants constants;
  std::vector<double> sigma_E;
  std::vector<double> sigma_p;
  std::vector<double> rho;
  std::vector<double> c_v;
  std::vector<double> L_T;
  std::vector<double> D;
  double Er_ghost_left = 0.0; // Dirichlet data for FixedState boundaries
  double Er_ghost_right = 0.0;
};

/// Builds the context from a starred state whose explicit rates are already
/// known, so L_T* costs no extra operator evaluation.
[[nodiscard]] auto freeze(const Grid1D &grid, const CellState &starred,
                          const BoundaryCondition &bc,
                          const Material &material,
                          const ExplicitRates &starred_rates) -> StageContext;

[[nodiscard]] auto freeze(const Grid1D &grid, const CellState &starred,
                          const BoundaryCondition &bc,
                          const Material &material) -> StageContext;

struct StageRhs {
  std::vector<double> b_rho_et;
  std::vector<double> b_Er;
  std::vector<double> b_T;
  double w = 0.0;
};

struct SolverSettings {
  double rel_tol = 1e-10;
  double abs_tol_T = 1e-8; // eV
  int max_outer_iters = 100;
  double temperature_floor = 1e-6; // eV
  double Er_floor = 0.0;
  int max_floor_hits = 16;

  /// Throws ConfigError on rel_tol <= 0 or max_outer_iters < 1.
  void validate() const;
};

struct StageSolution {
  std::vector<double> Er;
  std::vector<double> T;
  std::vector<double> rho_et;
  std::vector<double> diffusion; // div D* grad E at the returned E
  std::vector<double> exchange;  // sigma_E* c E - sigma_p* a c T^4
  double diffusive_flux_left = 0.0;
  double diffusive_flux_right = 0.0;
  int iterations = 0;
  double residual = 0.0;
};

/// Newton iteration on the emission term: T is eliminated cell-locally and
/// each update is a single tridiagonal solve in E_r. rho e_t is returned as
/// b_e + (b_E - E) + w div D* grad E, which equals b_e + w * exchange at
/// convergence and makes the stage conserve total energy exactly.
/// Throws NonConvergence or NegativeState.
[[nodiscard]] auto solve_stage(const StageContext &ctx, const StageRhs &rhs,
                               const SolverSettings &settings = {})
    -> StageSolution;

/// Thomas algorithm; lower[0] and upper[n-1] are ignored. Throws
/// SingularMatrix when a pivot vanishes.
[[nodiscard]] auto tridiagonal_solve(std::span<const double> lower,
                                     std::span<const double> diag,
                                     std::span<const double> upper,
                                     std::span<const double> rhs)
    -> std::vector<double>;

} // namespace radhydro
