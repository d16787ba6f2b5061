#include "stochint/expansion.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <boost/math/special_functions/polygamma.hpp>
#include <boost/math/special_functions/trigamma.hpp>

namespace stochint {

namespace {

using Matching = std::vector<std::pair<int, int>>;

void check_common(const ExpansionSpec& spec, const CoefficientTable& table) {
  if (spec.k() < 1 || spec.k() > 5) throw std::invalid_argument("expansions support k in [1, 5]");
  if (static_cast<int>(spec.i_pattern.size()) != spec.k()) {
    throw std::invalid_argument("index pattern length differs from k");
  }
  for (int i : spec.i_pattern) {
    if (i < 0) throw std::invalid_argument("component labels must be nonnegative");
  }
  if (spec.p < 0) throw std::invalid_argument("truncation p must be nonnegative");
  if (table.weights() != spec.weights || table.basis() != spec.basis ||
      table.interval().t() != spec.interval.t() || table.interval().T() != spec.interval.T()) {
    throw std::invalid_argument("coefficient table does not match the expansion spec");
  }
  if (table.p() < spec.p) throw std::invalid_argument("coefficient table truncation below spec.p");
}

// All nonempty sets of disjoint position pairs, ordered by pair count then lexicographically.
void matchings_rec(int k, int from, std::vector<bool>& used, Matching& cur,
                   std::vector<Matching>& out) {
  for (int a = from; a < k; ++a) {
    if (used[a]) continue;
    for (int b = a + 1; b < k; ++b) {
      if (used[b]) continue;
      used[a] = used[b] = true;
      cur.emplace_back(a, b);
      out.push_back(cur);
      matchings_rec(k, a + 1, used, cur, out);
      cur.pop_back();
      used[a] = used[b] = false;
    }
  }
}

std::vector<Matching> active_matchings(const std::vector<int>& labels) {
  const int k = static_cast<int>(labels.size());
  std::vector<Matching> all;
  std::vector<bool> used(k, false);
  Matching cur;
  matchings_rec(k, 0, used, cur, all);
  std::stable_sort(all.begin(), all.end(),
                   [](const Matching& x, const Matching& y) { return x.size() < y.size(); });
  std::vector<Matching> out;
  for (auto& m : all) {
    bool ok = true;
    for (auto [a, b] : m) ok = ok && labels[a] == labels[b] && labels[a] != 0;
    if (ok) out.push_back(std::move(m));
  }
  return out;
}

template <class Fn>
void for_each_index(int k, int p, Fn&& fn) {
  MultiIndex j(k, 0);
  while (true) {
    fn(j);
    int l = 0;
    while (l < k && j[l] == p) j[l++] = 0;
    if (l == k) return;
    ++j[l];
  }
}

bool all_zero(const WeightVector& w) {
  return std::all_of(w.begin(), w.end(), [](int l) { return l == 0; });
}

}  // namespace

std::string to_string(Kind kind) { return kind == Kind::ito ? "ito" : "stratonovich"; }

double DrawSet::zeta(int i, int j) const {
  auto it = zeta_.find({i, j});
  if (it == zeta_.end()) {
    throw std::out_of_range("missing variate zeta_" + std::to_string(j) + "^(" + std::to_string(i) + ")");
  }
  return it->second;
}

const TailVariates& DrawSet::tail(int i) const {
  auto it = tail_.find(i);
  if (it == tail_.end()) {
    throw std::out_of_range("missing tail variates for component " + std::to_string(i));
  }
  return it->second;
}

Expansion build_ito(const ExpansionSpec& spec, const CoefficientTable& table) {
  if (spec.kind != Kind::ito) throw std::invalid_argument("build_ito requires an Ito spec");
  check_common(spec, table);
  const std::vector<Matching> lattice = active_matchings(spec.i_pattern);
  Expansion e{spec, {}, 0.0, std::nullopt};
  for_each_index(spec.k(), spec.p, [&](const MultiIndex& j) {
    Term term{j, table.c(j), {}};
    for (const auto& m : lattice) {
      bool hit = true;
      for (auto [a, b] : m) hit = hit && j[a] == j[b];
      if (hit) term.corrections.push_back({(m.size() % 2) ? -1 : 1, m});
    }
    e.terms.push_back(std::move(term));
  });
  return e;
}

Expansion build_strat(const ExpansionSpec& spec, const CoefficientTable& table) {
  if (spec.kind != Kind::stratonovich) {
    throw std::invalid_argument("build_strat requires a Stratonovich spec");
  }
  check_common(spec, table);
  const auto& labels = spec.i_pattern;
  const bool has_time = std::find(labels.begin(), labels.end(), 0) != labels.end();
  switch (spec.k()) {
    case 1:
      break;
    case 2:
      if (has_time) {
        throw std::invalid_argument("Stratonovich k=2 expansion requires components >= 1");
      }
      break;
    case 3:
      if (has_time && !all_zero(spec.weights)) {
        throw std::invalid_argument(
            "Stratonovich k=3 expansion with a time component requires unit weights");
      }
      break;
    default:
      if (!all_zero(spec.weights)) {
        throw std::invalid_argument("Stratonovich k=4,5 expansions require unit weights");
      }
  }
  Expansion e{spec, {}, 0.0, std::nullopt};
  for_each_index(spec.k(), spec.p, [&](const MultiIndex& j) { e.terms.push_back({j, table.c(j), {}}); });
  return e;
}

CatalogName parse_catalog_name(std::string_view name) {
  static const std::vector<std::string> known = {"0",   "1",   "2",   "3",    "00",   "01",
                                                 "10",  "02",  "20",  "11",   "000",  "001",
                                                 "010", "100", "0000", "00000"};
  CatalogName out;
  std::string_view rest = name;
  if (rest.starts_with("I*_(")) {
    out.variant = Variant::stratonovich;
    rest.remove_prefix(4);
  } else if (rest.starts_with("I_(")) {
    rest.remove_prefix(3);
  } else {
    throw std::invalid_argument("unknown catalog name: " + std::string(name));
  }
  if (!rest.ends_with(")")) throw std::invalid_argument("unknown catalog name: " + std::string(name));
  rest.remove_suffix(1);
  if (std::find(known.begin(), known.end(), rest) == known.end()) {
    throw std::invalid_argument("unknown catalog name: " + std::string(name));
  }
  for (char ch : rest) out.weights.push_back(ch - '0');
  return out;
}

bool is_catalog_name(std::string_view name) {
  try {
    parse_catalog_name(name);
    return true;
  } catch (const std::invalid_argument&) {
    return false;
  }
}

Expansion catalog(std::string_view name, Variant variant, int q, const std::vector<int>& i_pattern,
                  const Interval& iv) {
  const CatalogName cn = parse_catalog_name(name);
  if (cn.variant == Variant::stratonovich && variant == Variant::ito) {
    throw std::invalid_argument("Stratonovich name requested with the Ito variant");
  }
  if (cn.variant == Variant::stratonovich) variant = Variant::stratonovich;
  const int k = static_cast<int>(cn.weights.size());
  if (static_cast<int>(i_pattern.size()) != k) {
    throw std::invalid_argument("index pattern length differs from k");
  }
  for (int i : i_pattern) {
    if (i < 1) throw std::invalid_argument("catalog components must be >= 1");
  }
  const CoefficientTable table = coeff_table(cn.weights, Basis::legendre, q, iv);
  ExpansionSpec spec{variant == Variant::ito ? Kind::ito : Kind::stratonovich,
                     cn.weights, Basis::legendre, q, i_pattern, iv};
  if (variant == Variant::stratonovich) return build_strat(spec, table);

  Expansion e = build_ito(spec, table);
  if (k == 2 && i_pattern[0] == i_pattern[1]) {
    // The truncated diagonal sum differs from 1/2 int psi_1 psi_2 by its tail; adding the tail
    // makes this equal the Stratonovich expansion minus the exact deterministic offset.
    const int n = cn.weights[0] + cn.weights[1];
    Rational diag = 0;
    for (int j = 0; j <= q; ++j) diag += Rational(2 * j + 1) * table.cbar(std::vector<int>{j, j});
    diag /= Rational(mpz_class(1) << (2 + n));
    const Rational half_integral(n % 2 ? -1 : 1, 2 * (n + 1));
    const Rational tail = diag - half_integral;
    e.offset = tail.get_d() * std::pow(iv.length(), n + 1);
  }
  const bool same = std::all_of(i_pattern.begin(), i_pattern.end(),
                                [&](int i) { return i == i_pattern[0]; });
  if (same && all_zero(cn.weights)) e.closed_form = "hermite";
  return e;
}

double hermite_closed_form(int k, double delta, double Delta, double scale) {
  if (Delta < 0) throw std::invalid_argument("Delta must be nonnegative");
  const double d2 = delta * delta;
  double v = 0.0;
  switch (k) {
    case 1: v = delta; break;
    case 2: v = (d2 - Delta) / 2.0; break;
    case 3: v = (d2 * delta - 3.0 * delta * Delta) / 6.0; break;
    case 4: v = (d2 * d2 - 6.0 * d2 * Delta + 3.0 * Delta * Delta) / 24.0; break;
    case 5: v = (d2 * d2 * delta - 10.0 * d2 * delta * Delta + 15.0 * delta * Delta * Delta) / 120.0; break;
    default: throw std::invalid_argument("hermite_closed_form supports k in [1, 5]");
  }
  return scale * v;
}

TrigIntegral trig_integral_from_string(std::string_view name) {
  if (name == "I_(1)") return TrigIntegral::I1;
  if (name == "I_(2)") return TrigIntegral::I2;
  if (name == "I*_(10)") return TrigIntegral::I10_strat;
  throw std::invalid_argument("unknown trigonometric integral: " + std::string(name));
}

double alpha_q(int q) {
  if (q < 0) throw std::invalid_argument("q must be nonnegative");
  return boost::math::trigamma(static_cast<double>(q + 1));
}

double beta_q(int q) {
  if (q < 0) throw std::invalid_argument("q must be nonnegative");
  return boost::math::polygamma(3, static_cast<double>(q + 1)) / 6.0;
}

kernels::MonomialProgram trig_program(TrigIntegral which, int q, const Interval& iv,
                                      const std::vector<int>& components, SlotTable& slots) {
  using std::numbers::pi;
  if (q < 1) throw std::invalid_argument("trigonometric truncation q must be >= 1");
  const std::size_t need = which == TrigIntegral::I10_strat ? 2 : 1;
  if (components.size() != need) throw std::invalid_argument("wrong number of components");
  for (int i : components) {
    if (i < 1) throw std::invalid_argument("components must be >= 1");
  }
  const double h = iv.length();
  const double sa = std::sqrt(alpha_q(q));
  const double sb = std::sqrt(beta_q(q));
  const double s2 = std::sqrt(2.0);
  const int a = components[0];
  kernels::MonomialProgram prog;
  auto mono1 = [&](double c, int i, int j) {
    const std::uint32_t id[1] = {slots.id(i, j)};
    prog.add(c, id);
  };
  auto mono2 = [&](double c, int i1, int j1, int i2, int j2) {
    const std::uint32_t id[2] = {slots.id(i1, j1), slots.id(i2, j2)};
    prog.add(c, id);
  };

  if (which == TrigIntegral::I1) {
    // -h^{3/2}/2 (zeta_0 - sqrt2/pi (sum zeta_{2r-1}/r + sqrt(alpha) xi))
    const double f = -std::pow(h, 1.5) / 2.0;
    mono1(f, a, 0);
    for (int r = 1; r <= q; ++r) mono1(-f * s2 / pi / r, a, 2 * r - 1);
    mono1(-f * s2 / pi * sa, a, kTailXi);
    return prog;
  }
  if (which == TrigIntegral::I2) {
    // h^{5/2} (zeta_0/3 + (sum zeta_{2r}/r^2 + sqrt(beta) mu)/(sqrt2 pi^2)
    //          - (sum zeta_{2r-1}/r + sqrt(alpha) xi)/(sqrt2 pi))
    const double f = std::pow(h, 2.5);
    mono1(f / 3.0, a, 0);
    for (int r = 1; r <= q; ++r) mono1(f / (s2 * pi * pi) / (double(r) * r), a, 2 * r);
    mono1(f / (s2 * pi * pi) * sb, a, kTailMu);
    for (int r = 1; r <= q; ++r) mono1(-f / (s2 * pi) / r, a, 2 * r - 1);
    mono1(-f / (s2 * pi) * sa, a, kTailXi);
    return prog;
  }

  // Stratonovich double integral with weights (1, 0) from the double trigonometric series.
  const int b = components[1];
  const double f = -h * h;
  mono2(f / 6.0, a, 0, b, 0);
  mono2(-f * sa / (2.0 * s2 * pi), b, kTailXi, a, 0);
  mono2(f * sb / (2.0 * s2 * pi * pi), b, kTailMu, a, 0);
  mono2(-2.0 * f * sb / (2.0 * s2 * pi * pi), a, kTailMu, b, 0);
  for (int r = 1; r <= q; ++r) {
    const double g = f / (2.0 * s2);
    mono2(-g / (pi * r), b, 2 * r - 1, a, 0);
    mono2(g / (pi * pi * r * r), b, 2 * r, a, 0);
    mono2(-2.0 * g / (pi * pi * r * r), a, 2 * r, b, 0);
  }
  for (int r = 1; r <= q; ++r) {
    for (int l = 1; l <= q; ++l) {
      if (r == l) continue;
      const double g = -f / (2.0 * pi * pi) / (double(r) * r - double(l) * l);
      mono2(g, a, 2 * r, b, 2 * l);
      mono2(g * l / r, a, 2 * r - 1, b, 2 * l - 1);
    }
  }
  for (int r = 1; r <= q; ++r) {
    mono2(f / (4.0 * pi * r), a, 2 * r, b, 2 * r - 1);
    mono2(-f / (4.0 * pi * r), a, 2 * r - 1, b, 2 * r);
    mono2(3.0 * f / (8.0 * pi * pi * r * r), a, 2 * r - 1, b, 2 * r - 1);
    mono2(f / (8.0 * pi * pi * r * r), b, 2 * r, a, 2 * r);
  }
  return prog;
}

double trig_milstein(TrigIntegral which, int q, const DrawSet& draws, const Interval& iv,
                     const std::vector<int>& components) {
  SlotTable slots;
  const kernels::MonomialProgram prog = trig_program(which, q, iv, components, slots);
  const std::vector<double> z = gather(slots, draws);
  double out = 0.0;
  kernels::scalar::eval_program(prog, z.data(), 1, 1, &out);
  return out;
}

std::uint32_t SlotTable::id(int i, int j) {
  auto [it, inserted] = index_.try_emplace({i, j}, static_cast<std::uint32_t>(slots_.size()));
  if (inserted) slots_.emplace_back(i, j);
  return it->second;
}

kernels::MonomialProgram compile(const Expansion& e, SlotTable& slots) {
  kernels::MonomialProgram prog;
  const auto& spec = e.spec;
  const int k = spec.k();
  std::vector<std::uint32_t> ids;
  auto emit = [&](double coef, const MultiIndex& j, unsigned paired_mask) {
    ids.clear();
    for (int l = 0; l < k; ++l) {
      if (paired_mask & (1u << l)) continue;
      if (spec.i_pattern[l] == 0) {
        coef *= basis_integral(spec.basis, j[l], spec.interval);
      } else {
        ids.push_back(slots.id(spec.i_pattern[l], j[l]));
      }
    }
    if (coef != 0.0) prog.add(coef, ids);
  };
  for (const Term& term : e.terms) {
    if (term.c == 0.0) continue;
    emit(term.c, term.j, 0u);
    for (const Correction& corr : term.corrections) {
      unsigned mask = 0;
      for (auto [x, y] : corr.pairs) mask |= (1u << x) | (1u << y);
      emit(term.c * corr.sign, term.j, mask);
    }
  }
  prog.constant = e.offset;
  return prog;
}

std::vector<double> gather(const SlotTable& slots, const DrawSet& draws) {
  std::vector<double> z(slots.size());
  for (std::size_t s = 0; s < slots.size(); ++s) {
    const auto [i, j] = slots.slots()[s];
    if (j == kTailXi) {
      z[s] = draws.tail(i).xi;
    } else if (j == kTailMu) {
      z[s] = draws.tail(i).mu;
    } else {
      z[s] = draws.zeta(i, j);
    }
  }
  return z;
}

double evaluate(const Expansion& e, const DrawSet& draws) {
  SlotTable slots;
  const kernels::MonomialProgram prog = compile(e, slots);
  const std::vector<double> z = gather(slots, draws);
  double out = 0.0;
  kernels::scalar::eval_program(prog, z.data(), 1, 1, &out);
  return out;
}

nlohmann::json to_json(const ExpansionSpec& spec) {
  return {{"kind", to_string(spec.kind)},
          {"k", spec.k()},
          {"weights", spec.weights},
          {"basis", to_string(spec.basis)},
          {"p", spec.p},
          {"i_pattern", spec.i_pattern},
          {"t", spec.interval.t()},
          {"T", spec.interval.T()}};
}

nlohmann::json to_json(const Expansion& e) {
  nlohmann::json out;
  out["spec"] = to_json(e.spec);
  out["offset"] = e.offset;
  out["closed_form"] = e.closed_form ? nlohmann::json(*e.closed_form) : nlohmann::json(nullptr);
  auto& terms = out["terms"] = nlohmann::json::array();
  for (const Term& t : e.terms) {
    nlohmann::json corr = nlohmann::json::array();
    for (const Correction& c : t.corrections) {
      nlohmann::json pairs = nlohmann::json::array();
      for (auto [a, b] : c.pairs) pairs.push_back({a + 1, b + 1});
      corr.push_back({{"sign", c.sign}, {"pairs", pairs}});
    }
    terms.push_back({{"j", t.j}, {"c", t.c}, {"corrections", corr}});
  }
  return out;
}

}  // namespace stochint
