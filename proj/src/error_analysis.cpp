#include "stochint/error_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <ostream>
#include <set>
#include <stdexcept>

#include "stochint/kernels.hpp"

namespace stochint {

namespace {

int weight_sum(const WeightVector& w) { return std::accumulate(w.begin(), w.end(), 0); }

MultiIndex permuted(const MultiIndex& j, const std::vector<int>& sigma) {
  MultiIndex out(j.size());
  for (std::size_t l = 0; l < j.size(); ++l) out[l] = j[sigma[l]];
  return out;
}

std::vector<MultiIndex> box_indices(int k, const std::vector<int>& limits) {
  std::vector<MultiIndex> out;
  MultiIndex j(k, 0);
  while (true) {
    out.push_back(j);
    int l = 0;
    while (l < k && j[l] == limits[l]) j[l++] = 0;
    if (l == k) return out;
    ++j[l];
  }
}

long factorial(int k) {
  long f = 1;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

// sum of C_j^2 over j <= p_vector, exact when available.
std::pair<double, std::optional<ScaledRational>> parseval_sum(const CoefficientTable& table,
                                                              const std::vector<int>& p_vector) {
  if (static_cast<int>(p_vector.size()) != table.k()) {
    throw std::invalid_argument("p_vector length differs from k");
  }
  for (int p : p_vector) {
    if (p < 0 || p > table.p()) throw std::out_of_range("p_vector outside table");
  }
  const auto idx = box_indices(table.k(), p_vector);
  const int lambda = weight_sum(table.weights());
  const double h = table.interval().length();
  if (table.has_exact()) {
    Rational acc = 0;
    for (const auto& j : idx) {
      const Rational& cb = table.cbar(j);
      if (cb == 0) continue;
      long w = 1;
      for (int v : j) w *= 2 * v + 1;
      acc += Rational(w) * cb * cb;
    }
    acc /= Rational(mpz_class(1) << (2 * (table.k() + lambda)));
    ScaledRational s{acc, table.k() + 2 * lambda};
    return {s.value(h), s};
  }
  std::vector<double> c;
  c.reserve(idx.size());
  for (const auto& j : idx) c.push_back(table.c(j));
  return {kernels::sum_squares(c), std::nullopt};
}

}  // namespace

IndexPattern IndexPattern::from_labels(const std::vector<int>& labels) {
  IndexPattern out;
  out.k_ = static_cast<int>(labels.size());
  std::map<int, std::size_t> where;
  for (int l = 0; l < out.k_; ++l) {
    if (labels[l] < 1) throw std::invalid_argument("pattern labels must be >= 1");
    auto [it, inserted] = where.try_emplace(labels[l], out.groups_.size());
    if (inserted) out.groups_.emplace_back();
    out.groups_[it->second].push_back(l);
  }
  return out;
}

IndexPattern IndexPattern::distinct(int k) {
  std::vector<int> labels(k);
  std::iota(labels.begin(), labels.end(), 1);
  return from_labels(labels);
}

std::vector<int> IndexPattern::labels() const {
  std::vector<int> out(k_);
  for (std::size_t g = 0; g < groups_.size(); ++g) {
    for (int pos : groups_[g]) out[pos] = static_cast<int>(g) + 1;
  }
  return out;
}

std::vector<std::vector<int>> IndexPattern::permutations() const {
  std::vector<int> base(k_);
  std::iota(base.begin(), base.end(), 0);
  std::vector<std::vector<int>> out{base};
  for (const auto& g : groups_) {
    std::vector<std::vector<int>> next;
    for (const auto& sigma : out) {
      std::vector<int> img = g;  // sorted ascending
      do {
        std::vector<int> s = sigma;
        for (std::size_t r = 0; r < g.size(); ++r) s[g[r]] = img[r];
        next.push_back(std::move(s));
      } while (std::next_permutation(img.begin(), img.end()));
    }
    out = std::move(next);
  }
  return out;
}

double ScaledRational::value(double h) const { return coefficient.get_d() * std::pow(h, power); }

ScaledRational norm_squared_exact(const WeightVector& weights) {
  if (weights.empty()) throw std::invalid_argument("multiplicity k must be at least 1");
  Rational r = 1;
  int s = 0;
  for (int l : weights) {
    if (l < 0) throw std::invalid_argument("weight exponents must be nonnegative");
    s += 2 * l + 1;
    r /= s;
  }
  return {r, s};
}

double norm_squared(const WeightVector& weights, const Interval& iv) {
  return norm_squared_exact(weights).value(iv.length());
}

ErrorReport exact_mse_on_set(const CoefficientTable& table, const IndexPattern& pattern,
                             std::span<const MultiIndex> indices) {
  if (pattern.k() != table.k()) throw std::invalid_argument("pattern size differs from table k");
  const auto perms = pattern.permutations();
  std::set<MultiIndex> members(indices.begin(), indices.end());
  int p = 0;
  for (const auto& j : indices) {
    for (int v : j) p = std::max(p, v);
    for (const auto& sigma : perms) {
      if (!members.count(permuted(j, sigma))) {
        throw std::invalid_argument("index set is not closed under the pattern permutations");
      }
    }
  }
  const ScaledRational norm = norm_squared_exact(table.weights());
  const double h = table.interval().length();
  const int lambda = weight_sum(table.weights());
  ErrorReport r;
  r.p = p;
  r.pattern = pattern;
  r.norm = norm.value(h);
  r.norm_value = norm;
  if (table.has_exact()) {
    Rational acc = 0;
    for (const auto& j : indices) {
      const Rational& cb = table.cbar(j);
      if (cb == 0) continue;
      Rational inner = 0;
      for (const auto& sigma : perms) inner += table.cbar(permuted(j, sigma));
      long w = 1;
      for (int v : j) w *= 2 * v + 1;
      acc += Rational(w) * cb * inner;
    }
    acc /= Rational(mpz_class(1) << (2 * (table.k() + lambda)));
    ScaledRational e{norm.coefficient - acc, norm.power};
    r.exact_value = e;
    r.exact = e.value(h);
  } else {
    std::vector<double> a;
    std::vector<double> b;
    for (const auto& j : indices) {
      a.push_back(table.c(j));
      double inner = 0.0;
      for (const auto& sigma : perms) inner += table.c(permuted(j, sigma));
      b.push_back(inner);
    }
    const double proj = pattern.pairwise_distinct() ? kernels::sum_squares(a) : kernels::dot(a, b);
    r.exact = r.norm - proj;
  }
  return r;
}

ErrorReport exact_mse(const CoefficientTable& table, const IndexPattern& pattern, int p) {
  if (pattern.k() != table.k()) throw std::invalid_argument("pattern size differs from table k");
  if (p < 0 || p > table.p()) throw std::out_of_range("truncation outside table");
  const std::vector<int> limits(table.k(), p);
  const auto idx = box_indices(table.k(), limits);
  ErrorReport r = exact_mse_on_set(table, pattern, idx);
  r.p = p;
  r.bound = mse_upper_bound(table, limits);
  return r;
}

double mse_upper_bound(const CoefficientTable& table, const std::vector<int>& p_vector) {
  const auto [sum, exact] = parseval_sum(table, p_vector);
  const ScaledRational norm = norm_squared_exact(table.weights());
  const long kf = factorial(table.k());
  if (exact) {
    ScaledRational d{Rational(kf) * (norm.coefficient - exact->coefficient), norm.power};
    return d.value(table.interval().length());
  }
  return static_cast<double>(kf) * (norm.value(table.interval().length()) - sum);
}

mpz_class moment_bound_constant(int n, int k) {
  if (n < 1 || k < 1) throw std::invalid_argument("moment bound requires n >= 1 and k >= 1");
  mpz_class kf = 1;
  for (int i = 2; i <= k; ++i) kf *= i;
  mpz_class out;
  mpz_pow_ui(out.get_mpz_t(), kf.get_mpz_t(), 2 * n);
  mpz_class base = n * (2 * n - 1);
  mpz_class pw;
  mpz_pow_ui(pw.get_mpz_t(), base.get_mpz_t(), static_cast<unsigned long>(n) * (k - 1));
  out *= pw;
  for (int i = 2 * n - 1; i > 1; i -= 2) out *= i;
  return out;
}

double moment_bound(int n, const CoefficientTable& table, const std::vector<int>& p_vector) {
  const auto [sum, exact] = parseval_sum(table, p_vector);
  const ScaledRational norm = norm_squared_exact(table.weights());
  const mpz_class cnk = moment_bound_constant(n, table.k());
  const double h = table.interval().length();
  double defect = exact ? ScaledRational{norm.coefficient - exact->coefficient, norm.power}.value(h)
                        : norm.value(h) - sum;
  return cnk.get_d() * std::pow(defect, n);
}

ClosedForm closed_form_from_string(std::string_view name) {
  if (name == "strat_I00_distinct") return ClosedForm::strat_I00_distinct;
  if (name == "strat_I10_distinct") return ClosedForm::strat_I10_distinct;
  if (name == "ito_I10_equal") return ClosedForm::ito_I10_equal;
  throw std::invalid_argument("unknown closed form: " + std::string(name));
}

double closed_form_mse(ClosedForm which, int q, const Interval& iv) {
  if (q < 0) throw std::invalid_argument("q must be nonnegative");
  const double h = iv.length();
  auto sq = [](double x) { return x * x; };
  switch (which) {
    case ClosedForm::strat_I00_distinct: {
      double s = 0.0;
      for (int i = 1; i <= q; ++i) s += 1.0 / (4.0 * i * i - 1.0);
      return h * h / 2.0 * (0.5 - s);
    }
    case ClosedForm::strat_I10_distinct: {
      double s1 = 0.0;
      for (int i = 2; i <= q; ++i) s1 += 1.0 / (4.0 * i * i - 1.0);
      double s2 = 0.0;
      for (int i = 1; i <= q; ++i) s2 += 1.0 / (sq(2.0 * i - 1) * sq(2.0 * i + 3));
      double s3 = 0.0;
      for (int i = 0; i <= q; ++i) {
        s3 += (sq(i + 2.0) + sq(i + 1.0)) / ((2.0 * i + 1) * (2.0 * i + 5) * sq(2.0 * i + 3));
      }
      return std::pow(h, 4) / 16.0 * (5.0 / 9.0 - 2.0 * s1 - s2 - s3);
    }
    case ClosedForm::ito_I10_equal: {
      double s1 = 0.0;
      for (int i = 0; i <= q; ++i) s1 += 1.0 / ((2.0 * i + 1) * (2.0 * i + 5) * sq(2.0 * i + 3));
      double s2 = 0.0;
      for (int i = 1; i <= q; ++i) s2 += 1.0 / (sq(2.0 * i - 1) * sq(2.0 * i + 3));
      return std::pow(h, 4) / 16.0 * (1.0 / 9.0 - s1 - 2.0 * s2);
    }
  }
  return 0.0;
}

Selection select_p(const WeightVector& weights, const IndexPattern& pattern, double eps_rel,
                   const Interval& iv, int p_max, const TableOptions& opts) {
  if (!(eps_rel > 0)) throw std::invalid_argument("eps_rel must be positive");
  if (p_max < 0) throw std::invalid_argument("p_max must be nonnegative");
  const CoefficientTable table = coeff_table(weights, Basis::legendre, p_max, iv, opts);
  Selection best;
  for (int p = 0; p <= p_max; ++p) {
    const ErrorReport r = exact_mse(table, pattern, p);
    const double ratio = r.ratio();
    if (best.best_p < 0 || ratio < best.ratio) {
      best.ratio = ratio;
      best.best_p = p;
    }
    if (ratio <= eps_rel) return {true, p, ratio, p};
  }
  return best;
}

nlohmann::json to_json(const ErrorReport& r) {
  nlohmann::json out = {{"p", r.p},           {"pattern", r.pattern.labels()},
                        {"exact", r.exact},   {"bound", r.bound},
                        {"norm", r.norm},     {"ratio", r.ratio()}};
  if (r.exact_value) {
    out["exact_rational"] = {{"num", r.exact_value->coefficient.get_num().get_str()},
                             {"den", r.exact_value->coefficient.get_den().get_str()},
                             {"power", r.exact_value->power}};
  }
  return out;
}

void write_sweep_csv(std::ostream& os, const std::vector<ErrorReport>& rows) {
  os << "p,exact,bound,ratio\n";
  char buf[128];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g\n", r.p, r.exact, r.bound, r.ratio());
    os << buf;
  }
}

}  // namespace stochint
