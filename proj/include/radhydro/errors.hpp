/**
 * @file errors.hpp
 * @brief Exception types shared by the solver modules.
 */

#pragma once

#include <stdexcept>
#include <cstdio>
#include <string>

namespace radhydro {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid argument outside a function's mathematical domain (e.g. T <= 0).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Non-positive density or internal energy in a state that must be physical.
class PositivityError : public Error {
 public:
  PositivityError(const std::string &what, int cell)
      : Error(what + " (cell " + std::to_string(cell) + ")"), cell_(cell) {}

  [[nodiscard]] auto cell() const noexcept -> int { return cell_; }

 private:
  int cell_;
};

/// Outer iteration of a nonlinear solve exhausted its budget.
class NonConvergence : public Error {
 public:
  NonConvergence(const std::string &what, double residual, int iterations)
      : Error(describe(what, residual, iterations)), label_(what),
        residual_(residual), iterations_(iterations) {}

  /// The context string without the residual summary.
  [[nodiscard]] auto label() const noexcept -> const std::string & {
    return label_;
  }

  [[nodiscard]] auto residual() const noexcept -> double { return residual_; }
  [[nodiscard]] auto iterations() const noexcept -> int { return iterations_; }

 private:
  static auto describe(const std::string &what, double residual,
                       int iterations) -> std::string {
    char buf[64];
    std::snprintf(buf, sizeof buf, ": residual %.3e after %d iterations",
                  residual, iterations);
    return what + buf;
  }

  std::string label_;
  double residual_;
  int iterations_;
};

/// Stage solve hit its positivity floors too often; the step is too large.
class NegativeState : public Error {
 public:
  using Error::Error;
};

/// Singular or near-singular linear system.
class SingularMatrix : public Error {
 public:
  using Error::Error;
};

/// Butcher tableau or scheme lookup failures.
class SchemeError : public Error {
 public:
  using Error::Error;
};

/// Malformed configuration or command line.
class ConfigError : public Error {
 public:
  using Error::Error;
};

} // namespace radhydro
