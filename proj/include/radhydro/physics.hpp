/**
 * @file physics.hpp
 * @brief Equation of state, opacities and gray-diffusion closures.
 *
 * Units are cgs with temperature in eV throughout.
 */

#pragma once

#include <variant>

namespace radhydro {

inline constexpr double kSpeedOfLight = 2.99792458e10;     // cm/s
inline constexpr double kStefanBoltzmannK = 5.670374419e-5; // erg/(cm^2 s K^4)
inline constexpr double kKelvinPerEv = 11604.5;

/// Radiation constant a = 4 sigma_SB / c expressed per eV^4.
[[nodiscard]] auto radiation_constant_ev() -> double;

struct Constants {
  double c = kSpeedOfLight;
  double a = radiation_constant_ev();

  /// Validating constructor; c and a must be positive.
  [[nodiscard]] static auto make(double c, double a) -> Constants;
};

struct EosIdealGas {
  double gamma = 5.0 / 3.0;
  double c_v = 1.447e12; // erg/(eV g)

  [[nodiscard]] static auto make(double gamma, double c_v) -> EosIdealGas;
};

struct ConstantOpacity {
  double sigma_a = 0.0; // cm^-1
  double sigma_s = 0.0;
};

/// sigma_a = coeff_a rho^rho_exp_a T^T_exp_a, sigma_s = coeff_s rho^rho_exp_s.
struct PowerLawOpacity {
  double coeff_a = 0.0;
  double rho_exp_a = 0.0;
  double T_exp_a = 0.0;
  double coeff_s = 0.0;
  double rho_exp_s = 0.0;
};

using OpacityModel = std::variant<ConstantOpacity, PowerLawOpacity>;

struct Opacities {
  double sigma_a;
  double sigma_s;
  double sigma_E; // energy-mean absorption
  double sigma_p; // Planck-mean emission
};

/// Floor applied to the total opacity before forming D.
inline constexpr double kOpacityFloor = 1e-10;

/// Everything a stepper needs to evaluate material closures.
struct Material {
  EosIdealGas eos;
  OpacityModel opacity;
  Constants constants;
};

[[nodiscard]] auto pressure(const EosIdealGas &eos, double rho, double e_i)
    -> double;

[[nodiscard]] auto temperature_from_eos(const EosIdealGas &eos, double rho,
                                        double e_i) -> double;

[[nodiscard]] auto internal_energy_from_temperature(const EosIdealGas &eos,
                                                    double T) -> double;

/// sqrt(gamma p / rho); throws DomainError for p < 0 or rho <= 0.
[[nodiscard]] auto sound_speed(const EosIdealGas &eos, double rho, double p)
    -> double;

/// sigma_E = sigma_p = sigma_a; scattering only enters D.
[[nodiscard]] auto opacities(const OpacityModel &model, double rho, double T)
    -> Opacities;

/// Unlimited gray diffusion coefficient c / (3 sigma_t).
[[nodiscard]] auto diffusion_coefficient(const Constants &constants,
                                         double sigma_a, double sigma_s)
    -> double;

/// Eddington closure.
[[nodiscard]] constexpr auto radiation_pressure(double E_r) -> double {
  return E_r / 3.0;
}

} // namespace radhydro
