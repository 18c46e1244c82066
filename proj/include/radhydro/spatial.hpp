/**
 * @file spatial.hpp
 * @brief Second-order cell-centred finite-volume operators.
 *
 * Faces are numbered f = 0..n_cells; face f separates array cells
 * begin()+f-1 and begin()+f, so faces 0 and n_cells are the physical
 * boundary.
 */

#pragma once

#include <array>
#include <span>
#include <variant>
#include <vector>

#include "radhydro/physics.hpp"
#include "radhydro/state.hpp"

namespace radhydro {

/// Ghost cells pinned to fixed primitive states on each side.
struct FixedStateBc {
  PrimitiveCell left;
  PrimitiveCell right;
};

/// Closed box: every boundary face flux (advective and diffusive) is zero.
struct NoFluxBc {};

using BoundaryCondition = std::variant<FixedStateBc, NoFluxBc>;

[[nodiscard]] inline auto is_no_flux(const BoundaryCondition &bc) -> bool {
  return std::holds_alternative<NoFluxBc>(bc);
}

/// FixedState copies the boundary primitives into every ghost layer (T
/// included); NoFlux copies the adjacent interior cell.
void fill_ghosts(const Grid1D &grid, CellState &state,
                 const BoundaryCondition &bc, const EosIdealGas &eos);

/// Reconstructed primitive values on one side of a face.
struct FaceValue {
  double rho;
  double u;
  double p;
  double Er;
};

/// Conserved-variable quadruple (rho, rho u, rho e_t, E_r); also used for
/// fluxes of those variables.
struct FluxVector {
  double rho = 0.0;
  double mom = 0.0;
  double rho_et = 0.0;
  double Er = 0.0;
};

struct FaceFlux {
  FluxVector flux;
  double alpha; // shared by every component
};

/// Limiter index order of the reconstructed primitives.
enum class Prim : int { Rho = 0, U = 1, P = 2, Er = 3 };

struct Reconstruction {
  std::vector<FaceValue> left;  // value just left of face f
  std::vector<FaceValue> right; // value just right of face f
  /// Barth-Jespersen coefficient per array cell and primitive; 1 where no
  /// reconstruction is performed (outer ghosts).
  std::vector<std::array<double, 4>> phi;
};

/// Barth-Jespersen coefficient for a cell mean w0 with neighbours wm, wp and
/// face increments +/-delta (delta = slope * h / 2).
[[nodiscard]] auto barth_jespersen(double wm, double w0, double wp,
                                   double delta) -> double;

/// Limited linear reconstruction of (rho, u, p, E_r). `state` must have its
/// ghost cells filled.
[[nodiscard]] auto reconstruct(const Grid1D &grid, const CellState &state,
                               const EosIdealGas &eos) -> Reconstruction;

[[nodiscard]] auto conserved_at(const EosIdealGas &eos, const FaceValue &w)
    -> FluxVector;

/// Physical flux of (rho, rho u, rho e_t, E_r) with p_r = E_r / 3.
[[nodiscard]] auto physical_flux(const EosIdealGas &eos, const FaceValue &w)
    -> FluxVector;

/// Local Lax-Friedrichs flux; alpha = max(|u| + c_s) over both sides.
[[nodiscard]] auto rusanov_flux(const EosIdealGas &eos, const FaceValue &left,
                                const FaceValue &right) -> FaceFlux;

/// Explicit hydrodynamics + radiation material-motion partition.
struct ExplicitRates {
  std::vector<double> d_rho, d_mom, d_rho_et, d_Er, d_T; // interior cells
  FluxVector flux_left;  // numerical flux through face 0
  FluxVector flux_right; // numerical flux through face n_cells

  /// Net rate of total energy leaving through the boundary faces.
  [[nodiscard]] auto energy_outflow() const noexcept -> double {
    return (flux_right.rho_et + flux_right.Er) -
           (flux_left.rho_et + flux_left.Er);
  }
};

[[nodiscard]] auto explicit_operator(const Grid1D &grid,
                                     const CellState &state,
                                     const BoundaryCondition &bc,
                                     const EosIdealGas &eos) -> ExplicitRates;

struct DiffusionResult {
  std::vector<double> rate; // (div D grad E_r)_k on interior cells
  double flux_left = 0.0;   // D dE/dx through face 0
  double flux_right = 0.0;  // D dE/dx through face n_cells
};

/// Harmonic mean of two non-negative coefficients (0 if both vanish).
[[nodiscard]] auto harmonic_mean(double a, double b) -> double;

/// Central-difference diffusion with harmonic-mean face coefficients.
/// `Er` and `D` span every array cell, ghosts included.
[[nodiscard]] auto diffusion_operator(const Grid1D &grid,
                                      std::span<const double> Er,
                                      std::span<const double> D,
                                      const BoundaryCondition &bc)
    -> DiffusionResult;

/// L_T = N^{rho e_t} - u N^{rho u} + (u^2 - e_t) N^{rho}, from precomputed
/// explicit rates of the same state.
[[nodiscard]] auto temperature_source(const Grid1D &grid,
                                      const CellState &state,
                                      const ExplicitRates &rates)
    -> std::vector<double>;

[[nodiscard]] auto temperature_source(const Grid1D &grid,
                                      const CellState &state,
                                      const BoundaryCondition &bc,
                                      const EosIdealGas &eos)
    -> std::vector<double>;

} // namespace radhydro
