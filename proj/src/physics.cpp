#include "radhydro/physics.hpp"

#include <cmath>
#include <string>

#include "radhydro/errors.hpp"

namespace radhydro {

auto radiation_constant_ev() -> double {
  const double a_kelvin = 4.0 * kStefanBoltzmannK / kSpeedOfLight;
  const double k2 = kKelvinPerEv * kKelvinPerEv;
  return a_kelvin * k2 * k2;
}

auto Constants::make(double c, double a) -> Constants {
  if (!(c > 0.0) || !(a > 0.0)) {
    throw DomainError("physical constants must be positive");
  }
  return Constants{c, a};
}

auto EosIdealGas::make(double gamma, double c_v) -> EosIdealGas {
  if (!(gamma > 1.0)) {
    throw DomainError("adiabatic index must exceed 1, got " +
                      std::to_string(gamma));
  }
  if (!(c_v > 0.0)) {
    throw DomainError("specific heat must be positive");
  }
  return EosIdealGas{gamma, c_v};
}

auto pressure(const EosIdealGas &eos, double rho, double e_i) -> double {
  return (eos.gamma - 1.0) * rho * e_i;
}

auto temperature_from_eos(const EosIdealGas &eos, double /*rho*/, double e_i)
    -> double {
  return e_i / eos.c_v;
}

auto internal_energy_from_temperature(const EosIdealGas &eos, double T)
    -> double {
  return eos.c_v * T;
}

auto sound_speed(const EosIdealGas &eos, double rho, double p) -> double {
  if (!(rho > 0.0) || p < 0.0) {
    throw DomainError("sound speed needs rho > 0 and p >= 0 (rho=" +
                      std::to_string(rho) + ", p=" + std::to_string(p) + ")");
  }
  return std::sqrt(eos.gamma * p / rho);
}

namespace {

struct OpacityVisitor {
  double rho;
  double T;

  auto operator()(const ConstantOpacity &m) const -> Opacities {
    return {m.sigma_a, m.sigma_s, m.sigma_a, m.sigma_a};
  }

  auto operator()(const PowerLawOpacity &m) const -> Opacities {
    if (!(T > 0.0)) {
      throw DomainError("power-law opacity needs T > 0, got " +
                        std::to_string(T));
    }
    const double sa =
        m.coeff_a * std::pow(rho, m.rho_exp_a) * std::pow(T, m.T_exp_a);
    const double ss = m.coeff_s * std::pow(rho, m.rho_exp_s);
    return {sa, ss, sa, sa};
  }
};

} // namespace

auto opacities(const OpacityModel &model, double rho, double T) -> Opacities {
  return std::visit(OpacityVisitor{rho, T}, model);
}

auto diffusion_coefficient(const Constants &constants, double sigma_a,
                           double sigma_s) -> double {
  const double sigma_t = sigma_a + sigma_s;
  if (!(sigma_t > 0.0)) {
    throw DomainError("diffusion coefficient needs positive total opacity");
  }
  return constants.c / (3.0 * sigma_t);
}

} // namespace radhydro
