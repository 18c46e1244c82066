#include "radhydro/implicit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "radhydro/errors.hpp"

namespace radhydro {

namespace {

auto at(int k) -> std::size_t { return static_cast<std::size_t>(k); }

} // namespace

void SolverSettings::validate() const {
  if (!(rel_tol > 0.0)) {
    throw ConfigError("solver rel_tol must be positive");
  }
  if (max_outer_iters < 1) {
    throw ConfigError("solver max_outer_iters must be at least 1");
  }
}

auto freeze(const Grid1D &grid, const CellState &starred,
            const BoundaryCondition &bc, const Material &material,
            const ExplicitRates &starred_rates) -> StageContext {
  CellState s = starred;
  fill_ghosts(grid, s, bc, material.eos);

  StageContext ctx;
  ctx.grid = grid;
  ctx.bc = bc;
  ctx.constants = material.constants;
  const int n = grid.n_cells;
  ctx.sigma_E.resize(at(n));
  ctx.sigma_p.resize(at(n));
  ctx.rho.resize(at(n));
  ctx.c_v.assign(at(n), material.eos.c_v);
  ctx.D.assign(at(grid.size()), 0.0);

  for (int k = 0; k < grid.size(); ++k) {
    const auto op = opacities(material.opacity, s.rho[at(k)], s.T[at(k)]);
    const double sigma_t = std::max(op.sigma_a + op.sigma_s, kOpacityFloor);
    ctx.D[at(k)] = diffusion_coefficient(material.constants, sigma_t, 0.0);
    const int i = k - grid.begin();
    if (i >= 0 && i < n) {
      ctx.sigma_E[at(i)] = op.sigma_E;
      ctx.sigma_p[at(i)] = op.sigma_p;
      ctx.rho[at(i)] = s.rho[at(k)];
    }
  }
  ctx.L_T = temperature_source(grid, s, starred_rates);
  ctx.Er_ghost_left = s.Er[at(grid.begin() - 1)];
  ctx.Er_ghost_right = s.Er[at(grid.end())];
  return ctx;
}

auto freeze(const Grid1D &grid, const CellState &starred,
            const BoundaryCondition &bc, const Material &material)
    -> StageContext {
  return freeze(grid, starred, bc, material,
                explicit_operator(grid, starred, bc, material.eos));
}

auto tridiagonal_solve(std::span<const double> lower,
                       std::span<const double> diag,
                       std::span<const double> upper,
                       std::span<const double> rhs) -> std::vector<double> {
  const std::size_t n = diag.size();
  std::vector<double> c_prime(n);
  std::vector<double> x(n);
  if (n == 0) {
    return x;
  }
  auto check = [](double pivot, std::size_t row) {
    if (pivot == 0.0 || !std::isfinite(pivot)) {
      throw SingularMatrix("tridiagonal pivot vanished at row " +
                           std::to_string(row));
    }
  };
  check(diag[0], 0);
  c_prime[0] = n > 1 ? upper[0] / diag[0] : 0.0;
  x[0] = rhs[0] / diag[0];
  // Forward sweep
  for (std::size_t i = 1; i < n; ++i) {
    const double pivot = diag[i] - lower[i] * c_prime[i - 1];
    check(pivot, i);
    c_prime[i] = i + 1 < n ? upper[i] / pivot : 0.0;
    x[i] = (rhs[i] - lower[i] * x[i - 1]) / pivot;
  }
  // Back substitution
  for (std::size_t i = n - 1; i > 0; --i) {
    x[i - 1] -= c_prime[i - 1] * x[i];
  }
  return x;
}

namespace {

/// Face diffusion conductances w D_f / h^2 and boundary Dirichlet data.
struct DiffusionStencil {
  std::vector<double> face_D; // n + 1 faces, zero on closed walls
  double Er_left;
  double Er_right;
  double inv_h;

  [[nodiscard]] auto apply(std::span<const double> E, std::size_t n,
                           double &g_left, double &g_right) const
      -> std::vector<double> {
    std::vector<double> out(n);
    const auto value = [&](long k) -> double {
      if (k < 0) {
        return Er_left;
      }
      if (k >= static_cast<long>(n)) {
        return Er_right;
      }
      return E[static_cast<std::size_t>(k)];
    };
    double g_prev = face_D[0] * (value(0) - value(-1)) * inv_h;
    g_left = g_prev;
    for (std::size_t i = 0; i < n; ++i) {
      const double g_next =
          face_D[i + 1] *
          (value(static_cast<long>(i) + 1) - value(static_cast<long>(i))) *
          inv_h;
      out[i] = (g_next - g_prev) * inv_h;
      g_prev = g_next;
    }
    g_right = g_prev;
    return out;
  }

  /// Sum of the magnitudes of the terms making up the diffusion of cell i;
  /// sets the roundoff floor of the discrete operator.
  [[nodiscard]] auto magnitude(std::span<const double> E, std::size_t n,
                               std::size_t i) const -> double {
    const double left = i == 0 ? Er_left : E[i - 1];
    const double right = i + 1 == n ? Er_right : E[i + 1];
    return (face_D[i] * (std::abs(left) + std::abs(E[i])) +
            face_D[i + 1] * (std::abs(right) + std::abs(E[i]))) *
           inv_h * inv_h;
  }
};

} // namespace

auto solve_stage(const StageContext &ctx, const StageRhs &rhs,
                 const SolverSettings &settings) -> StageSolution {
  const Grid1D &grid = ctx.grid;
  const std::size_t n = at(grid.n_cells);
  const double w = rhs.w;
  const double c = ctx.constants.c;
  const double a = ctx.constants.a;

  DiffusionStencil stencil;
  stencil.inv_h = 1.0 / grid.h();
  stencil.Er_left = ctx.Er_ghost_left;
  stencil.Er_right = ctx.Er_ghost_right;
  stencil.face_D.resize(n + 1);
  const bool closed = is_no_flux(ctx.bc);
  for (std::size_t f = 0; f <= n; ++f) {
    if (closed && (f == 0 || f == n)) {
      stencil.face_D[f] = 0.0;
      continue;
    }
    const auto kl = at(grid.begin()) + f - 1;
    stencil.face_D[f] = harmonic_mean(ctx.D[kl], ctx.D[kl + 1]);
  }

  std::vector<double> kappa_E(n);
  std::vector<double> kappa_p(n);
  std::vector<double> beta(n);
  for (std::size_t i = 0; i < n; ++i) {
    kappa_E[i] = ctx.sigma_E[i] * c;
    kappa_p[i] = ctx.sigma_p[i] * a * c;
    beta[i] = w / (ctx.rho[i] * ctx.c_v[i]);
  }

  StageSolution sol;
  sol.Er = rhs.b_Er;
  sol.T = rhs.b_T;
  sol.exchange.resize(n);
  std::vector<double> res_E(n);
  std::vector<double> res_T(n);

  // Residuals of both nonlinear equations in a max norm scaled by the
  // magnitude of the terms that enter them.
  const auto evaluate = [&]() -> double {
    sol.diffusion = stencil.apply(sol.Er, n, sol.diffusive_flux_left,
                                  sol.diffusive_flux_right);
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double T2 = sol.T[i] * sol.T[i];
      const double absorb = kappa_E[i] * sol.Er[i];
      const double emit = kappa_p[i] * T2 * T2;
      sol.exchange[i] = absorb - emit;
      const double r_E =
          sol.Er[i] - rhs.b_Er[i] - w * (sol.diffusion[i] - sol.exchange[i]);
      const double s_E =
          std::abs(sol.Er[i]) + std::abs(rhs.b_Er[i]) +
          w * (stencil.magnitude(sol.Er, n, i) + std::abs(absorb) +
               std::abs(emit));
      const double r_T =
          sol.T[i] - rhs.b_T[i] - beta[i] * (sol.exchange[i] + ctx.L_T[i]);
      const double s_T = std::abs(sol.T[i]) + std::abs(rhs.b_T[i]) +
                         beta[i] * (std::abs(absorb) + std::abs(emit) +
                                    std::abs(ctx.L_T[i]));
      res_E[i] = r_E;
      res_T[i] = r_T;
      if (s_E > 0.0) {
        worst = std::max(worst, std::abs(r_E) / s_E);
      }
      if (std::abs(r_T) > settings.abs_tol_T && s_T > 0.0) {
        worst = std::max(worst, std::abs(r_T) / s_T);
      }
      if (!std::isfinite(r_E) || !std::isfinite(r_T)) {
        worst = std::numeric_limits<double>::infinity();
      }
    }
    return worst;
  };

  const auto finish = [&]() {
    sol.rho_et.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      sol.rho_et[i] =
          rhs.b_rho_et[i] + (rhs.b_Er[i] - sol.Er[i]) + w * sol.diffusion[i];
    }
  };

  if (w == 0.0) {
    sol.residual = evaluate();
    sol.rho_et = rhs.b_rho_et;
    return sol;
  }

  std::vector<double> lower(n);
  std::vector<double> diag(n);
  std::vector<double> upper(n);
  std::vector<double> b(n);
  std::vector<double> shrink(n); // 1 / (1 + 4 beta kappa_p T^3)
  const double ih2 = stencil.inv_h * stencil.inv_h;
  int floor_hits = 0;

  // Newton in correction form: the linearisation only sets the step, so its
  // roundoff cannot shift the converged point away from the zero of the
  // residuals. Converged once the scaled residual is below tolerance and the
  // relative update is too, or has stopped contracting (roundoff reached).
  double update = std::numeric_limits<double>::infinity();
  double previous_update = std::numeric_limits<double>::infinity();
  for (int it = 0;; ++it) {
    sol.residual = evaluate();
    const bool settled =
        update <= settings.rel_tol ||
        (std::isfinite(previous_update) && update > 0.5 * previous_update);
    if (sol.residual <= settings.rel_tol && settled) {
      sol.iterations = it;
      break;
    }
    if (it >= settings.max_outer_iters) {
      throw NonConvergence("radiation stage solve", sol.residual, it);
    }

    // Eliminating the temperature correction cell by cell,
    //   dT = (beta kappa_E dE - r_T) / (1 + x),  x = 4 beta kappa_p T^3,
    // leaves a tridiagonal system for dE.
    for (std::size_t i = 0; i < n; ++i) {
      const double T = sol.T[i];
      const double x = 4.0 * beta[i] * kappa_p[i] * T * T * T;
      shrink[i] = 1.0 / (1.0 + x);
      const double cl = w * stencil.face_D[i] * ih2;
      const double cr = w * stencil.face_D[i + 1] * ih2;
      lower[i] = -cl;
      upper[i] = -cr;
      diag[i] = 1.0 + w * kappa_E[i] * shrink[i] + cl + cr;
      b[i] = -res_E[i] - ctx.rho[i] * ctx.c_v[i] * x * shrink[i] * res_T[i];
    }
    const std::vector<double> dE = tridiagonal_solve(lower, diag, upper, b);

    previous_update = update;
    update = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double dT =
          (beta[i] * kappa_E[i] * dE[i] - res_T[i]) * shrink[i];
      const double E_old = sol.Er[i];
      const double T_old = sol.T[i];
      sol.Er[i] += dE[i];
      sol.T[i] += dT;
      if (sol.Er[i] < settings.Er_floor) {
        sol.Er[i] = settings.Er_floor;
        ++floor_hits;
      }
      if (sol.T[i] < settings.temperature_floor) {
        sol.T[i] = settings.temperature_floor;
        ++floor_hits;
      }
      update = std::max(
          {update,
           std::abs(sol.Er[i] - E_old) /
               (std::abs(E_old) + std::abs(rhs.b_Er[i]) +
                std::numeric_limits<double>::min()),
           std::abs(sol.T[i] - T_old) / T_old});
    }
    if (floor_hits > settings.max_floor_hits) {
      throw NegativeState("radiation stage solve hit positivity floors " +
                          std::to_string(floor_hits) +
                          " times; reduce the time step");
    }
  }
  finish();
  return sol;
}

} // namespace radhydro
