/**
 * @file tableau.hpp
 * @brief Butcher tableaux, IMEX pairs and the scheme registry.
 */

#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace radhydro {

struct ButcherTableau {
  std::vector<std::vector<double>> A;
  std::vector<double> b;
  std::vector<double> c;

  [[nodiscard]] auto stages() const noexcept -> int {
    return static_cast<int>(b.size());
  }
  /// A strictly lower triangular.
  [[nodiscard]] auto is_explicit() const -> bool;
  /// A lower triangular.
  [[nodiscard]] auto is_dirk() const -> bool;
  [[nodiscard]] auto a(int i, int j) const -> double {
    return A[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  }
};

/// Explicit tableau paired with a DIRK tableau sharing weights b.
struct ImexPair {
  std::string name;
  int order = 1;
  ButcherTableau explicit_tableau;
  ButcherTableau implicit_tableau;
  std::string provenance;
};

struct ValidationReport {
  std::vector<std::string> violations;

  [[nodiscard]] auto ok() const noexcept -> bool { return violations.empty(); }
};

/// Shape, row-sum, shared-weight and (for order >= 2) second-order
/// conditions including the coupling terms b^T c~ = b~^T c = 1/2.
[[nodiscard]] auto validate(const ImexPair &pair) -> ValidationReport;

/// Looks up a registered LIMEX pair; throws SchemeError listing the
/// available names.
[[nodiscard]] auto registry(std::string_view name) -> const ImexPair &;

[[nodiscard]] auto registered_pairs() -> std::vector<std::string>;

/// Explicit schemes used for the hydro substep of the operator split.
[[nodiscard]] auto forward_euler_tableau() -> ButcherTableau;
[[nodiscard]] auto kutta_rk3_tableau() -> ButcherTableau;
[[nodiscard]] auto ssp_rk3_tableau() -> ButcherTableau;

} // namespace radhydro
