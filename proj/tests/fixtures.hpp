#pragma once

// Independent reference data and oracles shared by the unit tests and the acceptance binary.
// Nothing here calls into the coefficient engine.

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include "stochint/expansion.hpp"
#include "stochint/kernels.hpp"

namespace fixtures {

// Published coefficient tables, row = j_2, column = j_1.
// T1: weights 0, k = 3, j_3 = 3.  T2: k = 4, (j_3, j_4) = (1, 2).  T3: k = 5, (j_3, j_4, j_5) = (1, 0, 1).
inline const std::array<std::array<const char*, 7>, 7> kTable1 = {{
    {"0", "2/105", "0", "-4/315", "0", "2/693", "0"},
    {"4/105", "0", "-2/315", "0", "-8/3465", "0", "10/9009"},
    {"2/35", "-2/105", "0", "4/3465", "0", "-74/45045", "0"},
    {"2/315", "0", "-2/3465", "0", "16/45045", "0", "-10/9009"},
    {"-2/63", "46/3465", "0", "-32/45045", "0", "2/9009", "0"},
    {"-10/693", "0", "38/9009", "0", "-4/9009", "0", "122/765765"},
    {"0", "-10/3003", "0", "20/9009", "0", "-226/765765", "0"},
}};
inline const std::array<std::array<const char*, 3>, 3> kTable2 = {{
    {"2/21", "-2/45", "2/315"},
    {"2/315", "2/315", "-2/225"},
    {"-2/105", "2/225", "2/1155"},
}};
inline const std::array<std::array<const char*, 2>, 2> kTable3 = {{
    {"4/315", "0"},
    {"4/315", "-8/945"},
}};

struct ExactConstant {
  std::vector<int> weights;
  std::vector<int> labels;
  int p;
  const char* value;  // coefficient of h^{k + 2 sum(weights)}
};

// Frozen from an independent rational-arithmetic evaluation of the nested integrals.
inline const std::vector<ExactConstant> kExactConstants = {
    {{0, 0, 0}, {1, 2, 3}, 6, "3754499729/192008134890"},
    {{0, 0, 0, 0}, {1, 2, 3, 4}, 2, "234761/10245312"},
    {{0, 0, 0, 0, 0}, {1, 2, 3, 4, 5}, 1, "32131/4233600"},
    {{1, 0, 0}, {1, 2, 3}, 2, "17261/2116800"},
    {{0, 1, 0}, {1, 2, 3}, 2, "8909/529200"},
    {{0, 0, 1}, {1, 2, 3}, 2, "53513/2116800"},
    {{0, 0, 0}, {1, 2, 3}, 2, "554/11025"},
    {{1, 0}, {1, 1}, 3, "29/317520"},
    {{0, 0, 0}, {1, 1, 2}, 2, "277/11025"},
    {{0, 0, 0}, {1, 2, 2}, 2, "277/11025"},
    {{0, 0, 0}, {1, 2, 1}, 2, "2227/44100"},
    {{0, 0, 0, 0}, {1, 2, 2, 1}, 1, "19/720"},
    {{0, 0, 0, 0, 0}, {1, 2, 3, 2, 3}, 1, "19921/2822400"},
};

// ---- Printed double-integral series: coefficient of zeta_a^{(i1)} zeta_b^{(i2)}, h = T - t. ----

inline double d3(int i) {
  return std::sqrt((2.0 * i + 1) * (2.0 * i + 7)) * (2.0 * i + 3) * (2.0 * i + 5);
}
inline double d1(int i) {
  return std::sqrt((2.0 * i + 1) * (2.0 * i + 3)) * (2.0 * i - 1) * (2.0 * i + 5);
}
inline double d2(int i) { return std::sqrt((2.0 * i + 1) * (2.0 * i + 5)) * (2.0 * i + 3); }

inline double series00(int a, int b, double h) {
  if (a == 0 && b == 0) return h / 2;
  if (b == a + 1) return h / (2 * std::sqrt(4.0 * b * b - 1));
  if (a == b + 1) return -h / (2 * std::sqrt(4.0 * a * a - 1));
  return 0.0;
}

inline double series01(int a, int b, double h) {
  double s = 0.0;
  if (a == 0 && b == 1) s += 1 / std::sqrt(3.0);
  if (b == a + 2) s += (a + 2) / d2(a);
  if (a == b + 2) s -= (b + 1) / d2(b);
  if (a == b) s -= 1 / ((2.0 * a - 1) * (2.0 * a + 3));
  return -h / 2 * series00(a, b, h) - h * h / 4 * s;
}

inline double series10(int a, int b, double h) {
  double s = 0.0;
  if (a == 1 && b == 0) s += 1 / std::sqrt(3.0);
  if (b == a + 2) s += (a + 1) / d2(a);
  if (a == b + 2) s -= (b + 2) / d2(b);
  if (a == b) s += 1 / ((2.0 * a - 1) * (2.0 * a + 3));
  return -h / 2 * series00(a, b, h) - h * h / 4 * s;
}

inline double series02(int a, int b, double h) {
  double s = 0.0;
  if (a == 0 && b == 2) s += 2 / (3 * std::sqrt(5.0));
  if (a == 0 && b == 0) s += 1.0 / 3;
  if (b == a + 3) s += (a + 2.0) * (a + 3) / d3(a);
  if (a == b + 3) s -= (b + 1.0) * (b + 2) / d3(b);
  if (b == a + 1) s += (a * a + a - 3.0) / d1(a);
  if (a == b + 1) s -= (b * b + 3.0 * b - 1) / d1(b);
  return -h * h / 4 * series00(a, b, h) - h * series01(a, b, h) + h * h * h / 8 * s;
}

inline double series20(int a, int b, double h) {
  double s = 0.0;
  if (a == 2 && b == 0) s += 2 / (3 * std::sqrt(5.0));
  if (a == 0 && b == 0) s += 1.0 / 3;
  if (b == a + 3) s += (a + 1.0) * (a + 2) / d3(a);
  if (a == b + 3) s -= (b + 2.0) * (b + 3) / d3(b);
  if (b == a + 1) s += (a * a + 3.0 * a - 1) / d1(a);
  if (a == b + 1) s -= (b * b + b - 3.0) / d1(b);
  return -h * h / 4 * series00(a, b, h) - h * series10(a, b, h) + h * h * h / 8 * s;
}

inline double series11(int a, int b, double h) {
  double s = 0.0;
  if (a == 1 && b == 1) s += 1.0 / 3;
  if (b == a + 3) s += (a + 1.0) * (a + 3) / d3(a);
  if (a == b + 3) s -= (b + 1.0) * (b + 3) / d3(b);
  if (b == a + 1) s += (a + 1.0) * (a + 1) / d1(a);
  if (a == b + 1) s -= (b + 1.0) * (b + 1) / d1(b);
  return -h * h / 4 * series00(a, b, h) - h / 2 * (series10(a, b, h) + series01(a, b, h)) +
         h * h * h / 8 * s;
}

using Series = double (*)(int, int, double);

struct SeriesCase {
  const char* name;
  std::vector<int> weights;  // innermost first
  Series series;
};

inline const std::vector<SeriesCase> kSeries = {
    {"I_(00)", {0, 0}, series00}, {"I_(01)", {0, 1}, series01}, {"I_(10)", {1, 0}, series10},
    {"I_(02)", {0, 2}, series02}, {"I_(20)", {2, 0}, series20}, {"I_(11)", {1, 1}, series11},
};

// ---- Gaussian moment oracle for programs over independent standard normal slots. ----

inline double gaussian_moment(int m) {
  if (m % 2 != 0) return 0.0;
  double r = 1.0;
  for (int i = m - 1; i > 1; i -= 2) r *= i;
  return r;
}

inline double monomial_expectation(const std::map<std::uint32_t, int>& powers) {
  double r = 1.0;
  for (const auto& [slot, m] : powers) r *= gaussian_moment(m);
  return r;
}

inline std::map<std::uint32_t, int> monomial_powers(const stochint::kernels::MonomialProgram& prog,
                                                    std::size_t m) {
  std::map<std::uint32_t, int> powers;
  for (std::uint32_t s = prog.start[m]; s < prog.start[m + 1]; ++s) ++powers[prog.slots[s]];
  return powers;
}

inline double program_mean(const stochint::kernels::MonomialProgram& prog) {
  double r = prog.constant;
  for (std::size_t m = 0; m < prog.size(); ++m) {
    r += prog.coef[m] * monomial_expectation(monomial_powers(prog, m));
  }
  return r;
}

// E[(program)^2], exact for Gaussian slots.
inline double program_second_moment(const stochint::kernels::MonomialProgram& prog) {
  std::vector<std::map<std::uint32_t, int>> mono(prog.size());
  for (std::size_t m = 0; m < prog.size(); ++m) mono[m] = monomial_powers(prog, m);
  double r = prog.constant * prog.constant;
  for (std::size_t a = 0; a < prog.size(); ++a) {
    r += 2 * prog.constant * prog.coef[a] * monomial_expectation(mono[a]);
    for (std::size_t b = 0; b < prog.size(); ++b) {
      auto joint = mono[a];
      for (const auto& [slot, m] : mono[b]) joint[slot] += m;
      r += prog.coef[a] * prog.coef[b] * monomial_expectation(joint);
    }
  }
  return r;
}

// ---- Plain nested Gauss oracle on [t, T], written without the library quadrature. ----

inline std::vector<std::pair<double, double>> gauss_nodes(int n) {
  std::vector<std::pair<double, double>> out;
  for (int i = 1; i <= n; ++i) {
    double x = std::cos(std::numbers::pi * (i - 0.25) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int m = 2; m <= n; ++m) {
        const double p2 = ((2.0 * m - 1) * x * p1 - (m - 1.0) * p0) / m;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    out.emplace_back(x, 2 / ((1 - x * x) * dp * dp));
  }
  return out;
}

// Nested integral of prod f_l over t < s_1 < ... < s_k < T, f_0 innermost.
inline double nested_oracle(const std::vector<std::function<double(double)>>& f, double t, double T,
                            int n = 24) {
  const auto rule = gauss_nodes(n);
  std::function<double(std::size_t, double)> level = [&](std::size_t l, double upper) -> double {
    const double half = 0.5 * (upper - t);
    double sum = 0.0;
    for (const auto& [x, w] : rule) {
      const double s = t + half * (x + 1);
      const double inner = l == 0 ? 1.0 : level(l - 1, s);
      sum += w * f[l](s) * inner;
    }
    return half * sum;
  };
  return level(f.size() - 1, T);
}

// Orthonormal shifted Legendre function on [t, T] via its own recurrence.
inline double legendre_phi(int j, double s, double t, double T) {
  const double h = T - t;
  const double x = (2 * s - t - T) / h;
  double p0 = 1.0, p1 = x;
  if (j == 0) p1 = 1.0;
  for (int m = 2; m <= j; ++m) {
    const double p2 = ((2.0 * m - 1) * x * p1 - (m - 1.0) * p0) / m;
    p0 = p1;
    p1 = p2;
  }
  return std::sqrt((2.0 * j + 1) / h) * p1;
}

}  // namespace fixtures
