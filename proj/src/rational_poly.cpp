#include "stochint/rational_poly.hpp"

#include <sstream>
#include <stdexcept>

#include "stochint/error.hpp"

namespace stochint {

std::string to_string(const Rational& r) { return r.get_str(); }

Rational rational_from_string(const std::string& s) {
  Rational r;
  if (s.empty() || r.set_str(s, 10) != 0) {
    throw std::invalid_argument("not a rational: '" + s + "'");
  }
  if (r.get_den() == 0) throw std::invalid_argument("zero denominator: '" + s + "'");
  r.canonicalize();
  return r;
}

RationalPoly::RationalPoly(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) {
  trim();
}

RationalPoly RationalPoly::constant(const Rational& c) { return RationalPoly({c}); }

RationalPoly RationalPoly::monomial(std::size_t degree, const Rational& c) {
  std::vector<Rational> v(degree + 1);
  v[degree] = c;
  return RationalPoly(std::move(v));
}

Rational RationalPoly::coeff(std::size_t d) const {
  return d < coeffs_.size() ? coeffs_[d] : Rational(0);
}

void RationalPoly::trim() {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

Rational RationalPoly::operator()(const Rational& x) const {
  Rational acc = 0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

double RationalPoly::eval(double x) const {
  double acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + it->get_d();
  return acc;
}

RationalPoly& RationalPoly::operator+=(const RationalPoly& o) {
  if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size());
  for (std::size_t d = 0; d < o.coeffs_.size(); ++d) coeffs_[d] += o.coeffs_[d];
  trim();
  return *this;
}

RationalPoly& RationalPoly::operator-=(const RationalPoly& o) {
  if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size());
  for (std::size_t d = 0; d < o.coeffs_.size(); ++d) coeffs_[d] -= o.coeffs_[d];
  trim();
  return *this;
}

RationalPoly& RationalPoly::operator*=(const Rational& s) {
  if (s == 0) {
    coeffs_.clear();
    return *this;
  }
  for (auto& c : coeffs_) c *= s;
  return *this;
}

RationalPoly operator*(const RationalPoly& a, const RationalPoly& b) {
  return multiply(a, b, static_cast<std::size_t>(-1));
}

RationalPoly multiply(const RationalPoly& a, const RationalPoly& b, std::size_t max_degree) {
  if (a.is_zero() || b.is_zero()) return {};
  const std::size_t deg = a.coeffs().size() + b.coeffs().size() - 2;
  if (deg > max_degree) {
    throw LimitError("polynomial degree " + std::to_string(deg) + " exceeds cap " +
                     std::to_string(max_degree));
  }
  std::vector<Rational> out(deg + 1);
  Rational tmp;
  for (std::size_t i = 0; i < a.coeffs().size(); ++i) {
    if (a.coeffs()[i] == 0) continue;
    for (std::size_t j = 0; j < b.coeffs().size(); ++j) {
      mpq_mul(tmp.get_mpq_t(), a.coeffs()[i].get_mpq_t(), b.coeffs()[j].get_mpq_t());
      out[i + j] += tmp;
    }
  }
  return RationalPoly(std::move(out));
}

RationalPoly RationalPoly::antiderivative() const {
  if (is_zero()) return {};
  std::vector<Rational> out(coeffs_.size() + 1);
  for (std::size_t d = 0; d < coeffs_.size(); ++d) {
    out[d + 1] = coeffs_[d] / Rational(static_cast<long>(d + 1));
  }
  return RationalPoly(std::move(out));
}

Rational RationalPoly::integrate(const Rational& a, const Rational& b) const {
  const RationalPoly F = antiderivative();
  return F(b) - F(a);
}

RationalPoly poly_integrate_from(const RationalPoly& p, const Rational& lower,
                                 std::size_t max_degree) {
  if (p.is_zero()) return {};
  if (static_cast<std::size_t>(p.degree() + 1) > max_degree) {
    throw LimitError("polynomial degree " + std::to_string(p.degree() + 1) + " exceeds cap " +
                     std::to_string(max_degree));
  }
  RationalPoly F = p.antiderivative();
  return F - RationalPoly::constant(F(lower));
}

std::string RationalPoly::serialize() const {
  std::ostringstream os;
  for (std::size_t d = 0; d < coeffs_.size(); ++d) {
    if (d) os << ' ';
    os << coeffs_[d].get_str();
  }
  return os.str();
}

RationalPoly RationalPoly::deserialize(const std::string& s) {
  std::istringstream is(s);
  std::vector<Rational> v;
  std::string tok;
  while (is >> tok) v.push_back(rational_from_string(tok));
  return RationalPoly(std::move(v));
}

RationalPoly legendre_poly(int n, std::size_t max_degree) {
  if (n < 0) throw std::invalid_argument("legendre_poly: negative degree");
  if (static_cast<std::size_t>(n) > max_degree) {
    throw LimitError("legendre degree " + std::to_string(n) + " exceeds cap " +
                     std::to_string(max_degree));
  }
  RationalPoly prev = RationalPoly::constant(1);
  if (n == 0) return prev;
  RationalPoly cur = RationalPoly::monomial(1);
  const RationalPoly x = RationalPoly::monomial(1);
  for (int m = 1; m < n; ++m) {
    // (m+1) P_{m+1} = (2m+1) x P_m - m P_{m-1}
    RationalPoly next = (x * cur) * Rational(2 * m + 1, m + 1) - prev * Rational(m, m + 1);
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

}  // namespace stochint
