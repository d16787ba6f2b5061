#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "json.hpp"

#include "stochint/basis.hpp"
#include "stochint/rational_poly.hpp"

namespace stochint {

// Exponents l_1..l_k of (t - s)^l per integration layer, innermost first.
using WeightVector = std::vector<int>;
// Basis indices j_1..j_k; j_1 pairs with the innermost variable.
using MultiIndex = std::vector<int>;
using WeightFn = std::function<double(double)>;

enum class CoeffMode { automatic, exact, numeric };

struct TableOptions {
  CoeffMode mode = CoeffMode::automatic;
  int quad_order = 0;  // 0 picks a degree-based default
  std::size_t max_entries = 2'000'000;
  std::size_t max_degree = kDefaultMaxDegree;
  int workers = 1;
};

// Complete table of coefficients over all (p+1)^k multi-indices, stored with j_1 varying fastest.
class CoefficientTable {
 public:
  CoefficientTable(WeightVector weights, Basis basis, int p, Interval iv, std::vector<double> c,
                   std::optional<std::vector<Rational>> cbar = std::nullopt);

  int k() const { return static_cast<int>(weights_.size()); }
  const WeightVector& weights() const { return weights_; }
  Basis basis() const { return basis_; }
  int p() const { return p_; }
  const Interval& interval() const { return iv_; }
  bool has_exact() const { return cbar_.has_value(); }
  std::size_t size() const { return c_.size(); }

  std::size_t flat_index(std::span<const int> j) const;
  MultiIndex multi_index(std::size_t flat) const;

  double c(std::span<const int> j) const { return c_[flat_index(j)]; }
  double c_at(std::size_t flat) const { return c_[flat]; }
  const Rational& cbar(std::span<const int> j) const;
  const Rational& cbar_at(std::size_t flat) const;
  const std::vector<double>& values() const { return c_; }

  // Restriction to indices <= p_new.
  CoefficientTable truncated(int p_new) const;
  // Copy with one exact entry replaced (c rescaled accordingly).
  CoefficientTable with_entry(std::span<const int> j, const Rational& cbar) const;

 private:
  WeightVector weights_;
  Basis basis_;
  int p_;
  Interval iv_;
  std::vector<double> c_;
  std::optional<std::vector<Rational>> cbar_;
};

// Exact coefficient on [-1, 1]:
//   int_{-1}^{1} P_{j_k} w_k ... int_{-1}^{x_2} P_{j_1} w_1 dx_1 ... dx_k,  w_l(x) = (-(x+1))^{l_l}.
Rational simplex_coeff_exact(const WeightVector& weights, const MultiIndex& j,
                             std::size_t max_degree = kDefaultMaxDegree);

// prod sqrt(2 j_l + 1) * h^{k/2 + L} / 2^{k + L} * cbar with L = sum of weights.
double scale_coeff(const Rational& cbar, const MultiIndex& j, const WeightVector& weights,
                   const Interval& iv);

// Nested Gauss-Legendre quadrature of the coefficient over t_1 < ... < t_k.
double coeff_numeric(std::span<const WeightFn> psi, Basis basis, const MultiIndex& j,
                     const Interval& iv, int quad_order);

// psi_l(s) = (t - s)^{l_l}.
std::vector<WeightFn> monomial_weights(const WeightVector& weights, const Interval& iv);

int default_quad_order(Basis basis, const WeightVector& weights, int p);

CoefficientTable coeff_table(const WeightVector& weights, Basis basis, int p, const Interval& iv,
                             const TableOptions& opts = {});

nlohmann::json to_json(const CoefficientTable& table);
CoefficientTable table_from_json(const nlohmann::json& j);
void write_csv(std::ostream& os, const CoefficientTable& table);

}  // namespace stochint
