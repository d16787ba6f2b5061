#include "stochint/coeff.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>

#include "parallel.hpp"
#include "stochint/error.hpp"
#include "stochint/quadrature.hpp"

namespace stochint {

namespace {

std::size_t checked_count(int k, int p, std::size_t budget) {
  std::size_t n = 1;
  for (int l = 0; l < k; ++l) {
    if (n > budget / static_cast<std::size_t>(p + 1)) {
      throw LimitError("table with (p+1)^k = " + std::to_string(p + 1) + "^" + std::to_string(k) +
                       " entries exceeds budget " + std::to_string(budget));
    }
    n *= static_cast<std::size_t>(p + 1);
  }
  return n;
}

void check_weights(const WeightVector& w) {
  if (w.empty()) throw std::invalid_argument("multiplicity k must be at least 1");
  for (int l : w) {
    if (l < 0) throw std::invalid_argument("weight exponents must be nonnegative");
  }
}

void check_index(const MultiIndex& j, std::size_t k) {
  if (j.size() != k) throw std::invalid_argument("multi-index length differs from k");
  for (int v : j) {
    if (v < 0) throw std::invalid_argument("multi-index entries must be nonnegative");
  }
}

// (-(x+1))^l
RationalPoly layer_weight(int l) {
  std::vector<Rational> v(l + 1);
  mpz_class binom = 1;
  for (int d = 0; d <= l; ++d) {
    v[d] = Rational(binom) * ((l % 2) ? -1 : 1);
    binom = binom * (l - d) / (d + 1);
  }
  return RationalPoly(std::move(v));
}

struct ExactBuilder {
  const WeightVector& weights;
  int p;
  std::size_t max_degree;
  std::vector<std::vector<RationalPoly>> factor;  // factor[layer][j] = P_j * w_layer
  std::vector<Rational>& out;

  ExactBuilder(const WeightVector& w, int p_, std::size_t max_deg, std::vector<Rational>& o)
      : weights(w), p(p_), max_degree(max_deg), out(o) {
    std::vector<RationalPoly> legendre;
    for (int j = 0; j <= p; ++j) legendre.push_back(legendre_poly(j, max_degree));
    for (int l : weights) {
      const RationalPoly w_l = layer_weight(l);
      auto& row = factor.emplace_back();
      for (int j = 0; j <= p; ++j) row.push_back(multiply(legendre[j], w_l, max_degree));
    }
  }

  void descend(int layer, int j, const RationalPoly& inner, std::size_t flat, std::size_t stride) {
    const int k = static_cast<int>(weights.size());
    const RationalPoly integrand = multiply(factor[layer][j], inner, max_degree);
    const std::size_t f = flat + static_cast<std::size_t>(j) * stride;
    if (layer == k - 1) {
      out[f] = integrand.integrate(-1, 1);
      return;
    }
    const RationalPoly next = poly_integrate_from(integrand, -1, max_degree);
    const std::size_t next_stride = stride * static_cast<std::size_t>(p + 1);
    for (int jn = 0; jn <= p; ++jn) descend(layer + 1, jn, next, f, next_stride);
  }
};

double nested_quadrature(std::span<const WeightFn> psi, Basis basis, const MultiIndex& j,
                         const Interval& iv, const GaussRule& rule, int layer, double upper) {
  if (layer < 0) return 1.0;
  const double a = iv.t();
  const double half = 0.5 * (upper - a);
  double acc = 0.0;
  for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
    const double s = a + half * (rule.nodes[q] + 1.0);
    const double w = psi[layer](s);
    if (!std::isfinite(w)) throw std::domain_error("weight function returned a non-finite value");
    const double inner = nested_quadrature(psi, basis, j, iv, rule, layer - 1, s);
    acc += rule.weights[q] * w * basis_eval_unchecked(basis, j[layer], s, iv) * inner;
  }
  return half * acc;
}

// G_m(x)[j_1..j_m] = int_t^x psi_m phi_{j_m} G_{m-1}(s) ds for all indices at once, j_1 fastest.
std::vector<double> nested_table(std::span<const WeightFn> psi, Basis basis, int p,
                                 const Interval& iv, const GaussRule& rule, int layer, double upper) {
  if (layer < 0) return {1.0};
  const std::size_t width = static_cast<std::size_t>(p + 1);
  std::size_t inner_size = 1;
  for (int l = 0; l < layer; ++l) inner_size *= width;
  std::vector<double> out(inner_size * width, 0.0);
  std::vector<double> phi(width);
  const double a = iv.t();
  const double half = 0.5 * (upper - a);
  for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
    const double s = a + half * (rule.nodes[q] + 1.0);
    const double w = psi[layer](s);
    if (!std::isfinite(w)) throw std::domain_error("weight function returned a non-finite value");
    const std::vector<double> inner = nested_table(psi, basis, p, iv, rule, layer - 1, s);
    for (int j = 0; j <= p; ++j) phi[j] = half * rule.weights[q] * w * basis_eval_unchecked(basis, j, s, iv);
    for (std::size_t j = 0; j < width; ++j) {
      double* dst = out.data() + j * inner_size;
      for (std::size_t i = 0; i < inner_size; ++i) dst[i] += phi[j] * inner[i];
    }
  }
  return out;
}

}  // namespace

CoefficientTable::CoefficientTable(WeightVector weights, Basis basis, int p, Interval iv,
                                   std::vector<double> c, std::optional<std::vector<Rational>> cbar)
    : weights_(std::move(weights)), basis_(basis), p_(p), iv_(iv), c_(std::move(c)),
      cbar_(std::move(cbar)) {
  check_weights(weights_);
  if (p_ < 0) throw std::invalid_argument("truncation p must be nonnegative");
  const std::size_t n = checked_count(k(), p_, static_cast<std::size_t>(-1));
  if (c_.size() != n || (cbar_ && cbar_->size() != n)) {
    throw std::invalid_argument("coefficient table is incomplete");
  }
}

std::size_t CoefficientTable::flat_index(std::span<const int> j) const {
  if (static_cast<int>(j.size()) != k()) throw std::invalid_argument("multi-index length differs from k");
  std::size_t f = 0;
  for (int l = k() - 1; l >= 0; --l) {
    if (j[l] < 0 || j[l] > p_) throw std::out_of_range("multi-index outside table");
    f = f * static_cast<std::size_t>(p_ + 1) + static_cast<std::size_t>(j[l]);
  }
  return f;
}

MultiIndex CoefficientTable::multi_index(std::size_t flat) const {
  MultiIndex j(k());
  for (int l = 0; l < k(); ++l) {
    j[l] = static_cast<int>(flat % static_cast<std::size_t>(p_ + 1));
    flat /= static_cast<std::size_t>(p_ + 1);
  }
  return j;
}

const Rational& CoefficientTable::cbar(std::span<const int> j) const {
  return cbar_at(flat_index(j));
}

const Rational& CoefficientTable::cbar_at(std::size_t flat) const {
  if (!cbar_) throw std::logic_error("table has no exact coefficients");
  return (*cbar_)[flat];
}

CoefficientTable CoefficientTable::truncated(int p_new) const {
  if (p_new < 0 || p_new > p_) throw std::out_of_range("truncation outside table");
  if (p_new == p_) return *this;
  const std::size_t n = checked_count(k(), p_new, static_cast<std::size_t>(-1));
  std::vector<double> c(n);
  std::optional<std::vector<Rational>> cb;
  if (cbar_) cb.emplace(n);
  for (std::size_t f = 0; f < n; ++f) {
    MultiIndex j(k());
    std::size_t rest = f;
    for (int l = 0; l < k(); ++l) {
      j[l] = static_cast<int>(rest % static_cast<std::size_t>(p_new + 1));
      rest /= static_cast<std::size_t>(p_new + 1);
    }
    const std::size_t src = flat_index(j);
    c[f] = c_[src];
    if (cb) (*cb)[f] = (*cbar_)[src];
  }
  return CoefficientTable(weights_, basis_, p_new, iv_, std::move(c), std::move(cb));
}

CoefficientTable CoefficientTable::with_entry(std::span<const int> j, const Rational& cbar) const {
  if (!cbar_) throw std::logic_error("table has no exact coefficients");
  CoefficientTable out = *this;
  const std::size_t f = flat_index(j);
  (*out.cbar_)[f] = cbar;
  out.c_[f] = scale_coeff(cbar, MultiIndex(j.begin(), j.end()), weights_, iv_);
  return out;
}

Rational simplex_coeff_exact(const WeightVector& weights, const MultiIndex& j,
                             std::size_t max_degree) {
  check_weights(weights);
  check_index(j, weights.size());
  RationalPoly inner = RationalPoly::constant(1);
  const int k = static_cast<int>(weights.size());
  for (int l = 0; l < k; ++l) {
    const RationalPoly factor =
        multiply(legendre_poly(j[l], max_degree), layer_weight(weights[l]), max_degree);
    const RationalPoly integrand = multiply(factor, inner, max_degree);
    if (l == k - 1) return integrand.integrate(-1, 1);
    inner = poly_integrate_from(integrand, -1, max_degree);
  }
  return 0;  // unreachable
}

double scale_coeff(const Rational& cbar, const MultiIndex& j, const WeightVector& weights,
                   const Interval& iv) {
  if (j.size() != weights.size()) throw std::invalid_argument("multi-index length differs from k");
  if (cbar == 0) return 0.0;
  const int k = static_cast<int>(weights.size());
  int lambda = 0;
  for (int l : weights) lambda += l;
  double norm = 1.0;
  for (int v : j) norm *= 2.0 * v + 1.0;
  const double h = iv.length();
  return std::sqrt(norm) * std::pow(h, 0.5 * k + lambda) / std::ldexp(1.0, k + lambda) *
         cbar.get_d();
}

double coeff_numeric(std::span<const WeightFn> psi, Basis basis, const MultiIndex& j,
                     const Interval& iv, int quad_order) {
  if (psi.empty()) throw std::invalid_argument("multiplicity k must be at least 1");
  check_index(j, psi.size());
  const GaussRule& rule = gauss_legendre(quad_order);
  return nested_quadrature(psi, basis, j, iv, rule, static_cast<int>(psi.size()) - 1, iv.T());
}

std::vector<WeightFn> monomial_weights(const WeightVector& weights, const Interval& iv) {
  std::vector<WeightFn> out;
  const double t = iv.t();
  for (int l : weights) {
    if (l == 0) {
      out.emplace_back([](double) { return 1.0; });
    } else {
      out.emplace_back([t, l](double s) { return std::pow(t - s, l); });
    }
  }
  return out;
}

int default_quad_order(Basis basis, const WeightVector& weights, int p) {
  const int k = static_cast<int>(weights.size());
  int lambda = 0;
  for (int l : weights) lambda += l;
  if (basis == Basis::legendre) {
    const int degree = k * p + lambda + k - 1;
    return degree / 2 + 2;
  }
  return 24 + 3 * k * p + 2 * lambda;
}

CoefficientTable coeff_table(const WeightVector& weights, Basis basis, int p, const Interval& iv,
                             const TableOptions& opts) {
  check_weights(weights);
  if (p < 0) throw std::invalid_argument("truncation p must be nonnegative");
  const int k = static_cast<int>(weights.size());
  const std::size_t n = checked_count(k, p, opts.max_entries);

  bool exact = basis == Basis::legendre;
  if (opts.mode == CoeffMode::exact && basis != Basis::legendre) {
    throw std::invalid_argument("exact coefficients require the Legendre basis");
  }
  if (opts.mode == CoeffMode::numeric) exact = false;

  std::vector<double> c(n);
  if (exact) {
    std::vector<Rational> cbar(n);
    ExactBuilder builder(weights, p, opts.max_degree, cbar);
    detail::parallel_for(static_cast<std::size_t>(p + 1), opts.workers, [&](std::size_t j1) {
      builder.descend(0, static_cast<int>(j1), RationalPoly::constant(1), 0, 1);
    });
    const CoefficientTable shape(weights, basis, p, iv, std::vector<double>(n));
    for (std::size_t f = 0; f < n; ++f) c[f] = scale_coeff(cbar[f], shape.multi_index(f), weights, iv);
    return CoefficientTable(weights, basis, p, iv, std::move(c), std::move(cbar));
  }

  const int order = opts.quad_order > 0 ? opts.quad_order : default_quad_order(basis, weights, p);
  const std::vector<WeightFn> psi = monomial_weights(weights, iv);
  c = nested_table(psi, basis, p, iv, gauss_legendre(order), k - 1, iv.T());
  return CoefficientTable(weights, basis, p, iv, std::move(c));
}

nlohmann::json to_json(const CoefficientTable& table) {
  nlohmann::json out;
  out["index_order"] = "innermost-first: j[0] pairs with the innermost integration variable";
  out["k"] = table.k();
  out["weights"] = table.weights();
  out["basis"] = to_string(table.basis());
  out["p"] = table.p();
  out["t"] = table.interval().t();
  out["T"] = table.interval().T();
  auto& entries = out["entries"] = nlohmann::json::array();
  for (std::size_t f = 0; f < table.size(); ++f) {
    nlohmann::json e;
    e["j"] = table.multi_index(f);
    if (table.has_exact()) {
      e["num"] = table.cbar_at(f).get_num().get_str();
      e["den"] = table.cbar_at(f).get_den().get_str();
    }
    e["c"] = table.c_at(f);
    entries.push_back(std::move(e));
  }
  return out;
}

CoefficientTable table_from_json(const nlohmann::json& in) {
  const WeightVector weights = in.at("weights").get<WeightVector>();
  const int p = in.at("p").get<int>();
  const Basis basis = basis_from_string(in.at("basis").get<std::string>());
  const Interval iv(in.at("t").get<double>(), in.at("T").get<double>());
  if (in.contains("k") && in.at("k").get<int>() != static_cast<int>(weights.size())) {
    throw std::invalid_argument("table k does not match weights");
  }
  const std::size_t n = checked_count(static_cast<int>(weights.size()), p, static_cast<std::size_t>(-1));
  const CoefficientTable shape(weights, basis, p, iv, std::vector<double>(n));
  std::vector<double> c(n);
  std::vector<Rational> cbar(n);
  std::vector<bool> seen(n, false);
  bool exact = true;
  for (const auto& e : in.at("entries")) {
    const MultiIndex j = e.at("j").get<MultiIndex>();
    const std::size_t f = shape.flat_index(j);
    seen[f] = true;
    c[f] = e.at("c").get<double>();
    if (e.contains("num") && e.contains("den")) {
      cbar[f] = rational_from_string(e.at("num").get<std::string>() + "/" +
                                     e.at("den").get<std::string>());
    } else {
      exact = false;
    }
  }
  for (bool s : seen) {
    if (!s) throw std::invalid_argument("coefficient table file is incomplete");
  }
  if (!exact) return CoefficientTable(weights, basis, p, iv, std::move(c));
  return CoefficientTable(weights, basis, p, iv, std::move(c), std::move(cbar));
}

void write_csv(std::ostream& os, const CoefficientTable& table) {
  os << "# index order: j_1 pairs with the innermost integration variable\n";
  for (int l = 1; l <= table.k(); ++l) os << "j_" << l << ',';
  os << "num,den,c\n";
  char buf[64];
  for (std::size_t f = 0; f < table.size(); ++f) {
    for (int v : table.multi_index(f)) os << v << ',';
    if (table.has_exact()) {
      os << table.cbar_at(f).get_num().get_str() << ',' << table.cbar_at(f).get_den().get_str();
    } else {
      os << ',';
    }
    std::snprintf(buf, sizeof buf, "%.17g", table.c_at(f));
    os << ',' << buf << '\n';
  }
}

}  // namespace stochint
