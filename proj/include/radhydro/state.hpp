/**
 * @file state.hpp
 * @brief Uniform 1D grid and cell-averaged state storage.
 *
 * Every per-cell array spans n_cells + 2 n_ghost entries; interior cells are
 * [begin(), end()). Temperature is carried as a fifth field and only
 * re-synchronised from the EOS at the start of a time step.
 */

#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "radhydro/physics.hpp"

namespace radhydro {

struct Grid1D {
  double x_min = 0.0;
  double x_max = 1.0;
  int n_cells = 1;
  int n_ghost = 2;

  /// Throws DomainError unless x_max > x_min, n_cells >= 1, n_ghost >= 2.
  [[nodiscard]] static auto make(double x_min, double x_max, int n_cells,
                                 int n_ghost = 2) -> Grid1D;

  [[nodiscard]] auto h() const noexcept -> double {
    return (x_max - x_min) / n_cells;
  }
  [[nodiscard]] auto size() const noexcept -> int {
    return n_cells + 2 * n_ghost;
  }
  [[nodiscard]] auto begin() const noexcept -> int { return n_ghost; }
  [[nodiscard]] auto end() const noexcept -> int { return n_ghost + n_cells; }
  /// Cell-centre position of array index k (ghosts included).
  [[nodiscard]] auto x_center(int k) const noexcept -> double {
    return x_min + (k - n_ghost + 0.5) * h();
  }
};

struct CellState {
  std::vector<double> rho;
  std::vector<double> mom;    // rho u
  std::vector<double> rho_et; // rho e_t
  std::vector<double> Er;
  std::vector<double> T;

  CellState() = default;
  explicit CellState(std::size_t n)
      : rho(n, 0.0), mom(n, 0.0), rho_et(n, 0.0), Er(n, 0.0), T(n, 0.0) {}
  explicit CellState(const Grid1D &grid)
      : CellState(static_cast<std::size_t>(grid.size())) {}

  [[nodiscard]] auto size() const noexcept -> std::size_t {
    return rho.size();
  }
};

/// y += alpha x over all five fields (ghosts included).
void axpy(CellState &y, double alpha, const CellState &x);

struct PrimitiveCell {
  double rho = 1.0;
  double u = 0.0;
  double p = 0.0;
  double T = 0.0;
  double Er = 0.0;
  double pr = 0.0;
};

struct PrimitiveState {
  std::vector<double> rho, u, p, T, Er, pr;
};

/// Specific internal energy e_t - u^2/2; throws PositivityError if <= 0.
[[nodiscard]] auto internal_energy(double rho, double mom, double rho_et,
                                   int cell = -1) -> double;

[[nodiscard]] auto cell_primitive(const CellState &s, int k,
                                  const EosIdealGas &eos) -> PrimitiveCell;

void set_cell_from_primitive(CellState &s, int k, const PrimitiveCell &w,
                             const EosIdealGas &eos);

/// Replaces T in the interior cells by its EOS value.
void sync_temperature(const Grid1D &grid, CellState &state,
                      const EosIdealGas &eos);

[[nodiscard]] auto conserved_to_primitive(const CellState &state,
                                          const EosIdealGas &eos)
    -> PrimitiveState;

[[nodiscard]] auto primitive_to_conserved(const PrimitiveState &prim,
                                          const EosIdealGas &eos) -> CellState;

/// sum_k h (rho e_t + E_r) over interior cells.
[[nodiscard]] auto total_energy(const Grid1D &grid, const CellState &state)
    -> double;

/// Interior-cell CSV with header `x,rho,u,p,T,Er`, 17 significant digits.
void write_snapshot_csv(std::ostream &os, const Grid1D &grid,
                        const CellState &state, const EosIdealGas &eos);

/// Inverse of write_snapshot_csv; ghost entries are left zero.
[[nodiscard]] auto read_snapshot_csv(std::istream &is, const Grid1D &grid,
                                     const EosIdealGas &eos) -> CellState;

} // namespace radhydro
