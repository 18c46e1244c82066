#include "radhydro/state.hpp"

#include <fmt/format.h>

#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "radhydro/errors.hpp"

namespace radhydro {

auto Grid1D::make(double x_min, double x_max, int n_cells, int n_ghost)
    -> Grid1D {
  if (!(x_max > x_min) || n_cells < 1) {
    throw DomainError("grid needs x_max > x_min and at least one cell");
  }
  if (n_ghost < 2) {
    throw DomainError("second-order reconstruction needs two ghost layers");
  }
  return Grid1D{x_min, x_max, n_cells, n_ghost};
}

void axpy(CellState &y, double alpha, const CellState &x) {
  if (alpha == 0.0) {
    return;
  }
  const std::size_t n = y.size();
  for (std::size_t k = 0; k < n; ++k) {
    y.rho[k] += alpha * x.rho[k];
    y.mom[k] += alpha * x.mom[k];
    y.rho_et[k] += alpha * x.rho_et[k];
    y.Er[k] += alpha * x.Er[k];
    y.T[k] += alpha * x.T[k];
  }
}

auto internal_energy(double rho, double mom, double rho_et, int cell)
    -> double {
  if (!(rho > 0.0)) {
    throw PositivityError(fmt::format("non-positive density {:.6e}", rho), cell);
  }
  const double u = mom / rho;
  const double e_i = rho_et / rho - 0.5 * u * u;
  if (!(e_i > 0.0)) {
    throw PositivityError(
        fmt::format("non-positive internal energy {:.6e}", e_i), cell);
  }
  return e_i;
}

auto cell_primitive(const CellState &s, int k, const EosIdealGas &eos)
    -> PrimitiveCell {
  const auto i = static_cast<std::size_t>(k);
  const double e_i = internal_energy(s.rho[i], s.mom[i], s.rho_et[i], k);
  PrimitiveCell w;
  w.rho = s.rho[i];
  w.u = s.mom[i] / s.rho[i];
  w.p = pressure(eos, w.rho, e_i);
  w.T = s.T[i];
  w.Er = s.Er[i];
  w.pr = radiation_pressure(w.Er);
  return w;
}

void set_cell_from_primitive(CellState &s, int k, const PrimitiveCell &w,
                             const EosIdealGas &eos) {
  const auto i = static_cast<std::size_t>(k);
  s.rho[i] = w.rho;
  s.mom[i] = w.rho * w.u;
  s.rho_et[i] = w.p / (eos.gamma - 1.0) + 0.5 * w.rho * w.u * w.u;
  s.Er[i] = w.Er;
  s.T[i] = w.T;
}

void sync_temperature(const Grid1D &grid, CellState &state,
                      const EosIdealGas &eos) {
  for (int k = grid.begin(); k < grid.end(); ++k) {
    const auto i = static_cast<std::size_t>(k);
    const double e_i =
        internal_energy(state.rho[i], state.mom[i], state.rho_et[i], k);
    state.T[i] = temperature_from_eos(eos, state.rho[i], e_i);
  }
}

auto conserved_to_primitive(const CellState &state, const EosIdealGas &eos)
    -> PrimitiveState {
  const std::size_t n = state.size();
  PrimitiveState prim;
  prim.rho.resize(n);
  prim.u.resize(n);
  prim.p.resize(n);
  prim.T.resize(n);
  prim.Er.resize(n);
  prim.pr.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const auto w = cell_primitive(state, static_cast<int>(k), eos);
    prim.rho[k] = w.rho;
    prim.u[k] = w.u;
    prim.p[k] = w.p;
    prim.T[k] = w.T;
    prim.Er[k] = w.Er;
    prim.pr[k] = w.pr;
  }
  return prim;
}

auto primitive_to_conserved(const PrimitiveState &prim, const EosIdealGas &eos)
    -> CellState {
  const std::size_t n = prim.rho.size();
  CellState s(n);
  for (std::size_t k = 0; k < n; ++k) {
    if (!(prim.rho[k] > 0.0) || !(prim.p[k] > 0.0)) {
      throw PositivityError("non-positive primitive density or pressure",
                            static_cast<int>(k));
    }
    PrimitiveCell w{prim.rho[k], prim.u[k], prim.p[k],
                    prim.T[k],   prim.Er[k], prim.pr[k]};
    set_cell_from_primitive(s, static_cast<int>(k), w, eos);
  }
  return s;
}

auto total_energy(const Grid1D &grid, const CellState &state) -> double {
  double sum = 0.0;
  for (int k = grid.begin(); k < grid.end(); ++k) {
    const auto i = static_cast<std::size_t>(k);
    sum += state.rho_et[i] + state.Er[i];
  }
  return grid.h() * sum;
}

void write_snapshot_csv(std::ostream &os, const Grid1D &grid,
                        const CellState &state, const EosIdealGas &eos) {
  os << "x,rho,u,p,T,Er\n";
  for (int k = grid.begin(); k < grid.end(); ++k) {
    const auto w = cell_primitive(state, k, eos);
    os << fmt::format("{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n",
                      grid.x_center(k), w.rho, w.u, w.p, w.T, w.Er);
  }
}

auto read_snapshot_csv(std::istream &is, const Grid1D &grid,
                       const EosIdealGas &eos) -> CellState {
  std::string line;
  if (!std::getline(is, line) || line.rfind("x,rho,u,p,T,Er", 0) != 0) {
    throw ConfigError("snapshot CSV is missing the x,rho,u,p,T,Er header");
  }
  CellState s(grid);
  int k = grid.begin();
  while (std::getline(is, line)) {
    if (line.empty()) {
      continue;
    }
    if (k >= grid.end()) {
      throw ConfigError("snapshot CSV has more rows than the grid has cells");
    }
    std::istringstream row(line);
    double vals[6];
    for (double &v : vals) {
      std::string field;
      if (!std::getline(row, field, ',')) {
        throw ConfigError("snapshot CSV row has fewer than six fields");
      }
      v = std::stod(field);
    }
    PrimitiveCell w{vals[1], vals[2], vals[3], vals[4], vals[5],
                    radiation_pressure(vals[5])};
    set_cell_from_primitive(s, k, w, eos);
    ++k;
  }
  if (k != grid.end()) {
    throw ConfigError("snapshot CSV has " + std::to_string(k - grid.begin()) +
                      " rows, grid has " + std::to_string(grid.n_cells));
  }
  return s;
}

} // namespace radhydro
