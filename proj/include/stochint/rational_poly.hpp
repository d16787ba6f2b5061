#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <string>
#include <vector>

namespace stochint {

using Rational = mpq_class;

inline constexpr std::size_t kDefaultMaxDegree = 64;

std::string to_string(const Rational& r);
Rational rational_from_string(const std::string& s);

// Dense univariate polynomial with exact rational coefficients.
// coeffs()[d] is the coefficient of x^d; the zero polynomial has no coefficients.
class RationalPoly {
 public:
  RationalPoly() = default;
  explicit RationalPoly(std::vector<Rational> coeffs);

  static RationalPoly constant(const Rational& c);
  static RationalPoly monomial(std::size_t degree, const Rational& c = 1);

  // -1 for the zero polynomial.
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  const std::vector<Rational>& coeffs() const { return coeffs_; }
  Rational coeff(std::size_t d) const;

  Rational operator()(const Rational& x) const;
  double eval(double x) const;

  RationalPoly& operator+=(const RationalPoly& o);
  RationalPoly& operator-=(const RationalPoly& o);
  RationalPoly& operator*=(const Rational& s);

  friend RationalPoly operator+(RationalPoly a, const RationalPoly& b) { return a += b; }
  friend RationalPoly operator-(RationalPoly a, const RationalPoly& b) { return a -= b; }
  friend RationalPoly operator*(RationalPoly a, const Rational& s) { return a *= s; }
  friend RationalPoly operator*(const Rational& s, RationalPoly a) { return a *= s; }
  friend RationalPoly operator*(const RationalPoly& a, const RationalPoly& b);
  friend bool operator==(const RationalPoly& a, const RationalPoly& b) {
    return a.coeffs_ == b.coeffs_;
  }

  // Antiderivative with an unspecified constant of zero.
  RationalPoly antiderivative() const;
  Rational integrate(const Rational& a, const Rational& b) const;

  // "c0 c1 c2 ..." with each coefficient as num/den.
  std::string serialize() const;
  static RationalPoly deserialize(const std::string& s);

 private:
  void trim();
  std::vector<Rational> coeffs_;
};

// Product that throws LimitError if the result degree exceeds max_degree.
RationalPoly multiply(const RationalPoly& a, const RationalPoly& b,
                      std::size_t max_degree = kDefaultMaxDegree);

// q(y) = integral of p from lower to y.
RationalPoly poly_integrate_from(const RationalPoly& p, const Rational& lower,
                                 std::size_t max_degree = kDefaultMaxDegree);

// Legendre polynomial P_n via the Bonnet recurrence.
RationalPoly legendre_poly(int n, std::size_t max_degree = kDefaultMaxDegree);

}  // namespace stochint
