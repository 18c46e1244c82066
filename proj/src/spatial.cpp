#include "radhydro/spatial.hpp"

#include <algorithm>
#include <cmath>

namespace radhydro {

namespace {

auto at(int k) -> std::size_t { return static_cast<std::size_t>(k); }

struct CellPrim {
  double rho, u, p, Er;
};

auto cell_prims(const CellState &s, int k, const EosIdealGas &eos)
    -> CellPrim {
  const auto i = at(k);
  const double e_i = internal_energy(s.rho[i], s.mom[i], s.rho_et[i], k);
  return {s.rho[i], s.mom[i] / s.rho[i], pressure(eos, s.rho[i], e_i),
          s.Er[i]};
}

auto component(const CellPrim &w, int v) -> double {
  switch (v) {
  case 0:
    return w.rho;
  case 1:
    return w.u;
  case 2:
    return w.p;
  default:
    return w.Er;
  }
}

} // namespace

void fill_ghosts(const Grid1D &grid, CellState &state,
                 const BoundaryCondition &bc, const EosIdealGas &eos) {
  const int g = grid.n_ghost;
  if (const auto *fixed = std::get_if<FixedStateBc>(&bc)) {
    for (int j = 0; j < g; ++j) {
      set_cell_from_primitive(state, j, fixed->left, eos);
      set_cell_from_primitive(state, grid.end() + j, fixed->right, eos);
    }
    return;
  }
  const auto copy = [&state](int dst, int src) {
    state.rho[at(dst)] = state.rho[at(src)];
    state.mom[at(dst)] = state.mom[at(src)];
    state.rho_et[at(dst)] = state.rho_et[at(src)];
    state.Er[at(dst)] = state.Er[at(src)];
    state.T[at(dst)] = state.T[at(src)];
  };
  for (int j = 0; j < g; ++j) {
    copy(j, grid.begin());
    copy(grid.end() + j, grid.end() - 1);
  }
}

auto barth_jespersen(double wm, double w0, double wp, double delta) -> double {
  if (delta == 0.0) {
    return 1.0;
  }
  const double d_max = std::max({wm, w0, wp}) - w0;
  const double d_min = std::min({wm, w0, wp}) - w0;
  // The two faces see +delta and -delta.
  const auto face = [&](double d) {
    if (d > 0.0) {
      return std::min(1.0, d_max / d);
    }
    return std::min(1.0, d_min / d);
  };
  return std::min(face(delta), face(-delta));
}

auto reconstruct(const Grid1D &grid, const CellState &state,
                 const EosIdealGas &eos) -> Reconstruction {
  const int n = grid.n_cells;
  const int first = grid.begin() - 1;
  const int last = grid.end(); // inclusive: one ghost on each side

  std::vector<CellPrim> w(at(grid.size()));
  for (int k = first - 1; k <= last + 1; ++k) {
    w[at(k)] = cell_prims(state, k, eos);
  }

  Reconstruction rec;
  rec.left.resize(at(n + 1));
  rec.right.resize(at(n + 1));
  rec.phi.assign(at(grid.size()), {1.0, 1.0, 1.0, 1.0});

  for (int k = first; k <= last; ++k) {
    std::array<double, 4> lo{};
    std::array<double, 4> hi{};
    for (int v = 0; v < 4; ++v) {
      const double wm = component(w[at(k - 1)], v);
      const double w0 = component(w[at(k)], v);
      const double wp = component(w[at(k + 1)], v);
      // 1D least squares on a uniform grid is the central difference.
      const double delta = 0.25 * (wp - wm);
      const double phi = barth_jespersen(wm, w0, wp, delta);
      rec.phi[at(k)][at(v)] = phi;
      lo[at(v)] = w0 - phi * delta;
      hi[at(v)] = w0 + phi * delta;
    }
    const FaceValue low{lo[0], lo[1], lo[2], lo[3]};
    const FaceValue high{hi[0], hi[1], hi[2], hi[3]};
    const int f_left = k - grid.begin();
    const int f_right = f_left + 1;
    if (f_left >= 0 && f_left <= n) {
      rec.right[at(f_left)] = low;
    }
    if (f_right >= 0 && f_right <= n) {
      rec.left[at(f_right)] = high;
    }
  }
  return rec;
}

auto conserved_at(const EosIdealGas &eos, const FaceValue &w) -> FluxVector {
  return {w.rho, w.rho * w.u,
          w.p / (eos.gamma - 1.0) + 0.5 * w.rho * w.u * w.u, w.Er};
}

auto physical_flux(const EosIdealGas &eos, const FaceValue &w) -> FluxVector {
  const double pr = radiation_pressure(w.Er);
  const double rho_et = w.p / (eos.gamma - 1.0) + 0.5 * w.rho * w.u * w.u;
  return {w.rho * w.u, w.rho * w.u * w.u + w.p + pr,
          (rho_et + w.p + pr) * w.u, w.Er * w.u};
}

auto rusanov_flux(const EosIdealGas &eos, const FaceValue &left,
                  const FaceValue &right) -> FaceFlux {
  const double sl = std::abs(left.u) + sound_speed(eos, left.rho, left.p);
  const double sr = std::abs(right.u) + sound_speed(eos, right.rho, right.p);
  const double alpha = std::max(sl, sr);

  const FluxVector fl = physical_flux(eos, left);
  const FluxVector fr = physical_flux(eos, right);
  const FluxVector ul = conserved_at(eos, left);
  const FluxVector ur = conserved_at(eos, right);

  FaceFlux out;
  out.alpha = alpha;
  out.flux.rho = 0.5 * (fl.rho + fr.rho) - 0.5 * alpha * (ur.rho - ul.rho);
  out.flux.mom = 0.5 * (fl.mom + fr.mom) - 0.5 * alpha * (ur.mom - ul.mom);
  out.flux.rho_et =
      0.5 * (fl.rho_et + fr.rho_et) - 0.5 * alpha * (ur.rho_et - ul.rho_et);
  out.flux.Er = 0.5 * (fl.Er + fr.Er) - 0.5 * alpha * (ur.Er - ul.Er);
  return out;
}

auto explicit_operator(const Grid1D &grid, const CellState &state,
                       const BoundaryCondition &bc, const EosIdealGas &eos)
    -> ExplicitRates {
  CellState s = state;
  fill_ghosts(grid, s, bc, eos);
  const Reconstruction rec = reconstruct(grid, s, eos);

  const int n = grid.n_cells;
  const bool closed = is_no_flux(bc);
  std::vector<FluxVector> flux(at(n + 1));
  std::vector<double> u_face(at(n + 1));
  for (int f = 0; f <= n; ++f) {
    const bool wall = closed && (f == 0 || f == n);
    if (wall) {
      flux[at(f)] = FluxVector{};
      u_face[at(f)] = 0.0;
      continue;
    }
    flux[at(f)] = rusanov_flux(eos, rec.left[at(f)], rec.right[at(f)]).flux;
    u_face[at(f)] = 0.5 * (rec.left[at(f)].u + rec.right[at(f)].u);
  }

  ExplicitRates r;
  r.d_rho.resize(at(n));
  r.d_mom.resize(at(n));
  r.d_rho_et.resize(at(n));
  r.d_Er.resize(at(n));
  r.d_T.assign(at(n), 0.0);
  const double inv_h = 1.0 / grid.h();
  for (int i = 0; i < n; ++i) {
    const FluxVector &fl = flux[at(i)];
    const FluxVector &fr = flux[at(i + 1)];
    const double pr = radiation_pressure(s.Er[at(grid.begin() + i)]);
    // Identical p_r div(u) expression enters both energy equations.
    const double work = pr * (u_face[at(i + 1)] - u_face[at(i)]) * inv_h;
    r.d_rho[at(i)] = -(fr.rho - fl.rho) * inv_h;
    r.d_mom[at(i)] = -(fr.mom - fl.mom) * inv_h;
    r.d_rho_et[at(i)] = -(fr.rho_et - fl.rho_et) * inv_h + work;
    r.d_Er[at(i)] = -(fr.Er - fl.Er) * inv_h - work;
  }
  r.flux_left = flux.front();
  r.flux_right = flux.back();
  return r;
}

auto harmonic_mean(double a, double b) -> double {
  const double sum = a + b;
  return sum > 0.0 ? 2.0 * a * b / sum : 0.0;
}

auto diffusion_operator(const Grid1D &grid, std::span<const double> Er,
                        std::span<const double> D, const BoundaryCondition &bc)
    -> DiffusionResult {
  const int n = grid.n_cells;
  const double inv_h = 1.0 / grid.h();
  const bool closed = is_no_flux(bc);
  std::vector<double> G(at(n + 1));
  for (int f = 0; f <= n; ++f) {
    if (closed && (f == 0 || f == n)) {
      G[at(f)] = 0.0;
      continue;
    }
    const int kl = grid.begin() + f - 1;
    const int kr = kl + 1;
    G[at(f)] =
        harmonic_mean(D[at(kl)], D[at(kr)]) * (Er[at(kr)] - Er[at(kl)]) * inv_h;
  }
  DiffusionResult out;
  out.rate.resize(at(n));
  for (int i = 0; i < n; ++i) {
    out.rate[at(i)] = (G[at(i + 1)] - G[at(i)]) * inv_h;
  }
  out.flux_left = G.front();
  out.flux_right = G.back();
  return out;
}

auto temperature_source(const Grid1D &grid, const CellState &state,
                        const ExplicitRates &rates) -> std::vector<double> {
  const int n = grid.n_cells;
  std::vector<double> lt(at(n));
  for (int i = 0; i < n; ++i) {
    const auto k = at(grid.begin() + i);
    const double u = state.mom[k] / state.rho[k];
    const double e_t = state.rho_et[k] / state.rho[k];
    lt[at(i)] = rates.d_rho_et[at(i)] - u * rates.d_mom[at(i)] +
                (u * u - e_t) * rates.d_rho[at(i)];
  }
  return lt;
}

auto temperature_source(const Grid1D &grid, const CellState &state,
                        const BoundaryCondition &bc, const EosIdealGas &eos)
    -> std::vector<double> {
  return temperature_source(grid, state,
                            explicit_operator(grid, state, bc, eos));
}

} // namespace radhydro
