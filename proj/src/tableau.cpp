#include "radhydro/tableau.hpp"

#include <cmath>
#include <map>
#include <numeric>

#include "radhydro/errors.hpp"

namespace radhydro {

auto ButcherTableau::is_explicit() const -> bool {
  for (std::size_t i = 0; i < A.size(); ++i) {
    for (std::size_t j = i; j < A[i].size(); ++j) {
      if (A[i][j] != 0.0) {
        return false;
      }
    }
  }
  return true;
}

auto ButcherTableau::is_dirk() const -> bool {
  for (std::size_t i = 0; i < A.size(); ++i) {
    for (std::size_t j = i + 1; j < A[i].size(); ++j) {
      if (A[i][j] != 0.0) {
        return false;
      }
    }
  }
  return true;
}

namespace {

constexpr double kCoefTol = 1e-14;

auto dot(const std::vector<double> &x, const std::vector<double> &y)
    -> double {
  return std::inner_product(x.begin(), x.end(), y.begin(), 0.0);
}

void check_shape(const ButcherTableau &t, const std::string &label,
                 std::vector<std::string> &out) {
  const auto s = t.b.size();
  bool square = t.A.size() == s && t.c.size() == s;
  for (const auto &row : t.A) {
    square = square && row.size() == s;
  }
  if (!square) {
    out.push_back(label + ": A, b, c sizes disagree");
    return;
  }
  const double sum_b = std::accumulate(t.b.begin(), t.b.end(), 0.0);
  if (std::abs(sum_b - 1.0) > kCoefTol) {
    out.push_back(label + ": weights do not sum to 1");
  }
  for (std::size_t i = 0; i < s; ++i) {
    const double row = std::accumulate(t.A[i].begin(), t.A[i].end(), 0.0);
    if (std::abs(row - t.c[i]) > kCoefTol) {
      out.push_back(label + ": row-sum condition fails in stage " +
                    std::to_string(i + 1));
    }
  }
}

} // namespace

auto validate(const ImexPair &pair) -> ValidationReport {
  ValidationReport report;
  auto &v = report.violations;
  const auto &ex = pair.explicit_tableau;
  const auto &im = pair.implicit_tableau;
  check_shape(ex, "explicit tableau", v);
  check_shape(im, "implicit tableau", v);
  if (!v.empty()) {
    return report;
  }
  if (ex.stages() != im.stages()) {
    v.emplace_back("stage counts differ");
    return report;
  }
  if (!ex.is_explicit()) {
    v.emplace_back("explicit tableau is not strictly lower triangular");
  }
  if (!im.is_dirk()) {
    v.emplace_back("implicit tableau is not lower triangular");
  }
  if (ex.b != im.b) {
    v.emplace_back("shared-weights condition b = b~ fails");
  }
  if (pair.order >= 2) {
    const auto half = [&](double x, const char *what) {
      if (std::abs(x - 0.5) > kCoefTol) {
        v.push_back(std::string("second-order condition ") + what +
                    " = 1/2 fails");
      }
    };
    half(dot(im.b, im.c), "b^T c");
    half(dot(ex.b, ex.c), "b~^T c~");
    half(dot(im.b, ex.c), "b^T c~");
    half(dot(ex.b, im.c), "b~^T c");
  }
  return report;
}

namespace {

auto heun() -> ButcherTableau {
  return {{{0.0, 0.0}, {1.0, 0.0}}, {0.5, 0.5}, {0.0, 1.0}};
}

auto build_registry() -> std::map<std::string, ImexPair, std::less<>> {
  const double g = 1.0 - 1.0 / std::sqrt(2.0);
  std::map<std::string, ImexPair, std::less<>> reg;

  ImexPair euler{"IMEX-Euler", 1, {{{0.0}}, {1.0}, {0.0}},
                 {{{1.0}}, {1.0}, {1.0}}, "padded forward/backward Euler"};
  reg["IMEX-Euler"] = euler;
  euler.name = "LIMEX-Euler";
  reg["LIMEX-Euler"] = euler;

  reg["H-LDIRK2(2,2,2)"] = ImexPair{
      "H-LDIRK2(2,2,2)", 2, heun(),
      {{{g, 0.0}, {1.0 - 2.0 * g, g}}, {0.5, 0.5}, {g, 1.0 - g}},
      "Pareschi & Russo (2005); gamma = 1 - 1/sqrt(2)"};

  reg["SSP-LDIRK3(3,3,2)"] = ImexPair{
      "SSP-LDIRK3(3,3,2)",
      2,
      {{{0.0, 0.0, 0.0}, {1.0, 0.0, 0.0}, {0.25, 0.25, 0.0}},
       {1.0 / 6.0, 1.0 / 6.0, 2.0 / 3.0},
       {0.0, 1.0, 0.5}},
      {{{g, 0.0, 0.0}, {1.0 - 2.0 * g, g, 0.0}, {0.5 - g, 0.0, g}},
       {1.0 / 6.0, 1.0 / 6.0, 2.0 / 3.0},
       {g, 1.0 - g, 0.5}},
      "Pareschi & Russo (2005); gamma = 1 - 1/sqrt(2)"};

  reg["H-CN(2,2,2)"] = ImexPair{
      "H-CN(2,2,2)", 2, heun(),
      {{{0.0, 0.0}, {0.5, 0.5}}, {0.5, 0.5}, {0.0, 1.0}},
      "Boscarino, Filbet & Russo (2016): Crank-Nicolson ESDIRK with Heun; "
      "reconstructed from the order conditions"};

  reg["H-DIRK2(2,2,2)"] = ImexPair{
      "H-DIRK2(2,2,2)", 2, heun(),
      {{{0.5, 0.0}, {0.0, 0.5}}, {0.5, 0.5}, {0.5, 0.5}},
      "Boscarino, Filbet & Russo (2016): A-stable SDIRK with Heun; "
      "reconstructed from the order conditions"};

  reg["SSP-LDIRK2(3,3,2)"] = ImexPair{
      "SSP-LDIRK2(3,3,2)",
      2,
      {{{0.0, 0.0, 0.0}, {0.5, 0.0, 0.0}, {0.5, 0.5, 0.0}},
       {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0},
       {0.0, 0.5, 1.0}},
      {{{0.25, 0.0, 0.0}, {0.0, 0.25, 0.0}, {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}},
       {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0},
       {0.25, 0.25, 1.0}},
      "Pareschi & Russo (2005); reconstructed from the order conditions"};

  {
    const double d = 1.0 - 1.0 / std::sqrt(2.0);
    const double w = std::sqrt(2.0) / 4.0;
    const double a32 = 2.0 / 3.0;
    reg["TR-BDF2"] = ImexPair{
        "TR-BDF2",
        2,
        {{{0.0, 0.0, 0.0}, {2.0 * d, 0.0, 0.0}, {1.0 - a32, a32, 0.0}},
         {w, w, d},
         {0.0, 2.0 * d, 1.0}},
        {{{0.0, 0.0, 0.0}, {d, d, 0.0}, {w, w, d}}, {w, w, d}, {0.0, 2.0 * d, 1.0}},
        "Giraldo, Kelly & Constantinescu (2013) with a32 = 2/3; reconstructed "
        "from the order conditions"};
  }
  return reg;
}

auto registry_map() -> const std::map<std::string, ImexPair, std::less<>> & {
  static const auto reg = build_registry();
  return reg;
}

} // namespace

auto registry(std::string_view name) -> const ImexPair & {
  const auto &reg = registry_map();
  const auto it = reg.find(name);
  if (it == reg.end()) {
    std::string msg = "unknown IMEX scheme '" + std::string(name) +
                      "'; available:";
    for (const auto &[key, pair] : reg) {
      msg += " " + key;
    }
    throw SchemeError(msg);
  }
  return it->second;
}

auto registered_pairs() -> std::vector<std::string> {
  std::vector<std::string> names;
  for (const auto &[key, pair] : registry_map()) {
    names.push_back(key);
  }
  return names;
}

auto forward_euler_tableau() -> ButcherTableau {
  return {{{0.0}}, {1.0}, {0.0}};
}

auto kutta_rk3_tableau() -> ButcherTableau {
  return {{{0.0, 0.0, 0.0}, {0.5, 0.0, 0.0}, {-1.0, 2.0, 0.0}},
          {1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0},
          {0.0, 0.5, 1.0}};
}

auto ssp_rk3_tableau() -> ButcherTableau {
  return {{{0.0, 0.0, 0.0}, {1.0, 0.0, 0.0}, {0.25, 0.25, 0.0}},
          {1.0 / 6.0, 1.0 / 6.0, 2.0 / 3.0},
          {0.0, 1.0, 0.5}};
}

} // namespace radhydro
