#include "stochint/basis.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace stochint {

std::string to_string(Basis b) {
  return b == Basis::legendre ? "legendre" : "trigonometric";
}

Basis basis_from_string(std::string_view s) {
  if (s == "legendre") return Basis::legendre;
  if (s == "trigonometric" || s == "trig") return Basis::trigonometric;
  throw std::invalid_argument("unknown basis: " + std::string(s));
}

Interval::Interval(double t, double T) : t_(t), T_(T) {
  if (!std::isfinite(t) || !std::isfinite(T) || !(T > t) || !std::isfinite(T - t)) {
    throw std::invalid_argument("interval requires finite t < T");
  }
}

double legendre_value(int n, double x) {
  if (n == 0) return 1.0;
  double p0 = 1.0;
  double p1 = x;
  for (int m = 1; m < n; ++m) {
    const double p2 = ((2 * m + 1) * x * p1 - m * p0) / (m + 1);
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

double basis_eval_unchecked(Basis basis, int j, double s, const Interval& iv) {
  const double h = iv.length();
  if (basis == Basis::legendre) {
    const double x = (s - 0.5 * (iv.T() + iv.t())) * 2.0 / h;
    return std::sqrt((2.0 * j + 1.0) / h) * legendre_value(j, x);
  }
  if (j == 0) return 1.0 / std::sqrt(h);
  const int r = (j + 1) / 2;
  const double arg = 2.0 * std::numbers::pi * r * (s - iv.t()) / h;
  const double amp = std::sqrt(2.0 / h);
  return (j % 2 == 1) ? amp * std::sin(arg) : amp * std::cos(arg);
}

double basis_eval(Basis basis, int j, double s, const Interval& iv) {
  if (j < 0) throw std::invalid_argument("basis index must be nonnegative");
  if (!(s >= iv.t() && s <= iv.T())) {
    throw std::out_of_range("basis_eval: s outside [t, T]");
  }
  return basis_eval_unchecked(basis, j, s, iv);
}

double basis_integral(Basis, int j, const Interval& iv) {
  return j == 0 ? std::sqrt(iv.length()) : 0.0;
}

}  // namespace stochint
