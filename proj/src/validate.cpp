#include <algorithm>
#include <numbers>
#include <tuple>
#include <cmath>
#include <sstream>

#include "reference_values.hpp"
#include "stochint/error_analysis.hpp"
#include "stochint/mc.hpp"
#include "stochint/quadrature.hpp"

namespace stochint {

namespace {

class Suite {
 public:
  Suite(const ValidationOptions& opts) : opts_(opts) {
    if (!opts_.table_source) {
      const int workers = opts_.workers;
      opts_.table_source = [workers](const WeightVector& w, int p) {
        TableOptions to;
        to.workers = workers;
        return coeff_table(w, Basis::legendre, p, Interval(0.0, 1.0), to);
      };
    }
  }

  ValidationReport run() {
    report_.level = opts_.level == Level::quick ? "quick" : "full";
    for (const auto& g : validation_groups()) {
      if (opts_.only && *opts_.only != g) continue;
      group_ = g;
      if (g == "tables") tables();
      if (g == "orthonormality") orthonormality();
      if (g == "parseval") parseval();
      if (g == "constants") constants();
      if (g == "telescoping") telescoping();
      if (g == "exact_vs_numeric") exact_vs_numeric();
      if (g == "identities") identities();
      if (g == "mc") monte_carlo();
      if (g == "trig") trig();
    }
    return report_;
  }

 private:
  bool full() const { return opts_.level == Level::full; }
  std::uint64_t mc_samples() const { return full() ? 100000 : 10000; }

  void add(std::string check, double expected, double observed, double tolerance, bool pass,
           std::string detail = {}) {
    report_.checks.push_back(
        {group_, std::move(check), expected, observed, tolerance, pass, std::move(detail)});
  }

  void abs_check(std::string check, double expected, double observed, double tol) {
    add(std::move(check), expected, observed, tol, std::abs(observed - expected) <= tol);
  }

  void rel_check(std::string check, double expected, double observed, double tol) {
    add(std::move(check), expected, observed, tol,
        std::abs(observed - expected) <= tol * std::abs(expected));
  }

  void mc_check(std::string check, double expected, const MomentEstimate& est) {
    const double tol = 3.0 * est.std_error;
    add(std::move(check), expected, est.value(), tol, std::abs(est.value() - expected) <= tol);
  }

  template <std::size_t R, std::size_t C>
  void table_check(const std::string& name, const WeightVector& w, int p,
                   const std::array<std::array<const char*, C>, R>& ref, std::vector<int> fixed) {
    const CoefficientTable table = opts_.table_source(w, p);
    int mismatches = 0;
    std::string first;
    for (std::size_t r = 0; r < R; ++r) {
      for (std::size_t c = 0; c < C; ++c) {
        std::vector<int> j = {static_cast<int>(c), static_cast<int>(r)};
        j.insert(j.end(), fixed.begin(), fixed.end());
        const Rational expected = rational_from_string(ref[r][c]);
        const Rational& got = table.cbar(j);
        if (got != expected) {
          if (mismatches++ == 0) {
            first = "j_1=" + std::to_string(c) + " j_2=" + std::to_string(r) + " expected " +
                    expected.get_str() + " got " + got.get_str();
          }
        }
      }
    }
    add(name + "_mismatches", 0.0, mismatches, 0.0, mismatches == 0, first);
  }

  void tables() {
    table_check("table1", {0, 0, 0}, 6, reference::kTable1, {3});
    table_check("table2", {0, 0, 0, 0}, 2, reference::kTable2, {1, 2});
    table_check("table3", {0, 0, 0, 0, 0}, 1, reference::kTable3, {1, 0, 1});
  }

  void orthonormality() {
    const Interval iv(0.0, 1.0);
    const GaussRule& rule = gauss_legendre(64);
    for (Basis b : {Basis::legendre, Basis::trigonometric}) {
      double worst = 0.0;
      for (int i = 0; i <= 12; ++i) {
        for (int j = 0; j <= 12; ++j) {
          double acc = 0.0;
          for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
            const double s = 0.5 * (rule.nodes[q] + 1.0);
            acc += rule.weights[q] * basis_eval(b, i, s, iv) * basis_eval(b, j, s, iv);
          }
          worst = std::max(worst, std::abs(0.5 * acc - (i == j ? 1.0 : 0.0)));
        }
      }
      add(to_string(b) + "_gram_max_deviation", 0.0, worst, 1e-10, worst <= 1e-10);
    }
  }

  void parseval() {
    const int k_max = full() ? 4 : 3;
    for (int k = 1; k <= k_max; ++k) {
      const WeightVector w(k, 0);
      const CoefficientTable table = opts_.table_source(w, 6);
      const double norm = norm_squared(w, table.interval());
      double prev = -1.0;
      double worst = 0.0;  // largest violation of monotonicity or the norm bound
      for (int p = 0; p <= 6; ++p) {
        const double s = norm - exact_mse(table, IndexPattern::distinct(k), p).exact;
        if (prev >= 0.0) worst = std::max(worst, prev - s);
        worst = std::max(worst, s - norm);
        prev = s;
      }
      add("k" + std::to_string(k) + "_monotone_and_bounded", 0.0, worst, 0.0, worst <= 0.0);
    }
  }

  void constants() {
    for (const auto& c : reference::kErrorConstants) {
      const WeightVector w(c.weights.begin(), c.weights.begin() + c.k);
      const CoefficientTable table = opts_.table_source(w, c.p);
      const ErrorReport r = exact_mse(table, IndexPattern::distinct(c.k), c.p);
      const double frozen = rational_from_string(c.exact).get_d();
      rel_check(std::string(c.name) + "_frozen", frozen, r.exact, 1e-12);
      if (full()) rel_check(std::string(c.name) + "_published", c.published, r.exact, 1e-5);
    }
  }

  void telescoping() {
    const Interval iv(0.0, 1.0);
    double worst = 0.0;
    for (int q = 1; q <= 50; ++q) {
      const double closed = closed_form_mse(ClosedForm::strat_I00_distinct, q, iv);
      worst = std::max(worst, std::abs(closed - 1.0 / (4.0 * (2 * q + 1))));
    }
    add("strat_I00_closed_vs_telescoped_q1_50", 0.0, worst, 1e-12, worst <= 1e-12);
    TableOptions wide;
    wide.max_degree = 128;
    wide.workers = opts_.workers;
    const CoefficientTable table = coeff_table({0, 0}, Basis::legendre, 50, iv, wide);
    worst = 0.0;
    for (int q = 1; q <= 50; ++q) {
      const double closed = closed_form_mse(ClosedForm::strat_I00_distinct, q, iv);
      worst = std::max(worst, std::abs(closed - exact_mse(table, IndexPattern::distinct(2), q).exact));
    }
    add("strat_I00_closed_vs_table_defect_q1_50", 0.0, worst, 1e-12, worst <= 1e-12);
  }

  void exact_vs_numeric() {
    const int k_max = full() ? 4 : 3;
    const int p = full() ? 4 : 3;
    const Interval iv(0.0, 1.0);
    for (int k = 1; k <= k_max; ++k) {
      std::vector<WeightVector> ws{WeightVector(k, 0)};
      for (int l = 0; l < k; ++l) {
        WeightVector w(k, 0);
        w[l] = 1;
        ws.push_back(w);
      }
      double worst = 0.0;
      for (const auto& w : ws) {
        const CoefficientTable exact = opts_.table_source(w, p);
        TableOptions num;
        num.mode = CoeffMode::numeric;
        num.workers = opts_.workers;
        const CoefficientTable numeric = coeff_table(w, Basis::legendre, p, iv, num);
        for (std::size_t f = 0; f < exact.size(); ++f) {
          worst = std::max(worst, std::abs(exact.c_at(f) - numeric.c_at(f)));
        }
      }
      add("k" + std::to_string(k) + "_p" + std::to_string(p) + "_max_abs_diff", 0.0, worst, 1e-10,
          worst <= 1e-10);
    }
  }

  void identities() {
    const Interval iv(0.25, 1.75);
    const double h = iv.length();
    const int n_seeds = 50;
    struct Offset {
      const char* name;
      double strat_minus_ito;
    };
    const Offset offsets[] = {{"I_(10)", -h * h / 4}, {"I_(01)", -h * h / 4},
                              {"I_(02)", h * h * h / 6}, {"I_(20)", h * h * h / 6},
                              {"I_(11)", h * h * h / 6}, {"I_(00)", h / 2}};
    for (int q : {1, 4}) {
      for (const auto& o : offsets) {
        for (bool equal : {true, false}) {
          const std::vector<int> pat = equal ? std::vector<int>{1, 1} : std::vector<int>{1, 2};
          const Expansion ito = catalog(o.name, Variant::ito, q, pat, iv);
          const Expansion strat = catalog(o.name, Variant::stratonovich, q, pat, iv);
          const double expected = equal ? o.strat_minus_ito : 0.0;
          double worst = 0.0;
          for (int s = 0; s < n_seeds; ++s) {
            const DrawSet d = draw_set(s, 2, q);
            worst = std::max(worst, std::abs(evaluate(strat, d) - evaluate(ito, d) - expected));
          }
          add(std::string("offset_") + o.name + (equal ? "_equal" : "_distinct") + "_q" +
                  std::to_string(q),
              0.0, worst, 1e-12, worst <= 1e-12);
        }
      }
    }
    double worst = 0.0;
    for (int q : {0, 1, 3, 8}) {
      const Expansion strat = catalog("I_(00)", Variant::stratonovich, q, {1, 1}, iv);
      const Expansion ito = catalog("I_(00)", Variant::ito, q, {1, 1}, iv);
      for (int s = 0; s < n_seeds; ++s) {
        const DrawSet d = draw_set(s, 1, q);
        const double z0 = d.zeta(1, 0);
        worst = std::max(worst, std::abs(evaluate(strat, d) - h / 2 * z0 * z0));
        worst = std::max(worst, std::abs(evaluate(ito, d) - h / 2 * (z0 * z0 - 1.0)));
      }
    }
    add("I00_equal_truncation_independent", 0.0, worst, 1e-12, worst <= 1e-12);
    for (int k : {2, 3}) {
      worst = 0.0;
      for (int q : {0, 2, 5}) {
        const Expansion e = catalog(k == 2 ? "I_(00)" : "I_(000)", Variant::ito, q,
                                    std::vector<int>(k, 1), iv);
        for (int s = 0; s < n_seeds; ++s) {
          const DrawSet d = draw_set(s, 1, q);
          const double expected = hermite_closed_form(k, std::sqrt(h) * d.zeta(1, 0), h);
          worst = std::max(worst, std::abs(evaluate(e, d) - expected));
        }
      }
      add("hermite_k" + std::to_string(k), 0.0, worst, 1e-12, worst <= 1e-12);
    }
  }

  ExpansionSpec spec(Kind kind, WeightVector w, int p, std::vector<int> pattern,
                     const Interval& iv) {
    return {kind, std::move(w), Basis::legendre, p, std::move(pattern), iv};
  }

  void monte_carlo() {
    const Interval iv(0.0, 1.0);
    StreamConfig cfg{20240601, mc_samples(), opts_.workers};
    struct Case {
      WeightVector w;
      std::vector<int> pattern;
      int p;
    };
    const std::vector<Case> mean_cases = {
        {{0}, {1}, 3},          {{0, 0}, {1, 1}, 4},       {{1, 0}, {1, 1}, 3},
        {{0, 0, 0}, {1, 1, 1}, 3}, {{0, 0, 0}, {1, 2, 1}, 3}, {{0, 0, 0, 0}, {1, 1, 2, 2}, 2},
        {{0, 0, 0, 0}, {1, 1, 1, 1}, 2}};
    for (const auto& c : mean_cases) {
      const CoefficientTable t = opts_.table_source(c.w, c.p);
      const Expansion e = build_ito(spec(Kind::ito, c.w, c.p, c.pattern, iv), t);
      std::ostringstream name;
      name << "mean_zero_k" << c.w.size() << "_w";
      for (int l : c.w) name << l;
      name << "_i";
      for (int i : c.pattern) name << i;
      mc_check(name.str(), 0.0, mc_moment(e, cfg, Statistic::mean));
      ++cfg.seed;
    }

    struct Increment {
      WeightVector w;
      std::vector<int> pattern;
      int p;
      int p2;
    };
    const std::vector<Increment> incs = {{{0, 0, 0}, {1, 2, 3}, 2, 6}, {{1, 0}, {1, 1}, 1, 4}};
    for (const auto& c : incs) {
      const CoefficientTable t = opts_.table_source(c.w, c.p2);
      const IndexPattern pat = IndexPattern::from_labels(c.pattern);
      const Expansion lo = build_ito(spec(Kind::ito, c.w, c.p, c.pattern, iv), t);
      const Expansion hi = build_ito(spec(Kind::ito, c.w, c.p2, c.pattern, iv), t);
      const double expected = exact_mse(t, pat, c.p).exact - exact_mse(t, pat, c.p2).exact;
      std::ostringstream name;
      name << "increment_k" << c.w.size() << "_p" << c.p << "_to_p" << c.p2;
      mc_check(name.str(), expected, mc_moment(hi, lo, cfg, Statistic::second_moment));
      ++cfg.seed;
    }

    {
      const CoefficientTable t = opts_.table_source({0, 0}, 20);
      const Expansion e = build_ito(spec(Kind::ito, {0, 0}, 20, {1, 2}, iv), t);
      const double expected = 0.5 - exact_mse(t, IndexPattern::distinct(2), 20).exact;
      mc_check("I00_distinct_p20_second_moment", expected, mc_moment(e, cfg, Statistic::second_moment));
      ++cfg.seed;
    }
    {
      const Expansion e = catalog("I_(0)", Variant::ito, 0, {1}, iv);
      mc_check("I0_variance", iv.length(), mc_moment(e, cfg, Statistic::second_moment));
      ++cfg.seed;
    }
  }

  void trig() {
    double worst_a = 0.0;
    double worst_b = 0.0;
    const double pi2 = std::numbers::pi * std::numbers::pi;
    for (int q = 0; q <= 100; ++q) {
      double s2 = 0.0;
      double s4 = 0.0;
      for (int r = 1; r <= q; ++r) {
        s2 += 1.0 / (double(r) * r);
        s4 += 1.0 / (double(r) * r * r * r);
      }
      worst_a = std::max(worst_a, std::abs(alpha_q(q) - (pi2 / 6.0 - s2)));
      worst_b = std::max(worst_b, std::abs(beta_q(q) - (pi2 * pi2 / 90.0 - s4)));
    }
    add("alpha_vs_partial_sums_q0_100", 0.0, worst_a, 1e-14, worst_a <= 1e-14);
    add("beta_vs_partial_sums_q0_100", 0.0, worst_b, 1e-14, worst_b <= 1e-14);

    const Interval iv(0.0, 1.0);
    const int q = 3;
    // Single-integral expansions: coefficient of zeta_j equals the numeric trig coefficient.
    for (auto [which, w, label] : {std::tuple{TrigIntegral::I1, 1, "I1"},
                                   std::tuple{TrigIntegral::I2, 2, "I2"}}) {
      TableOptions num;
      num.mode = CoeffMode::numeric;
      const CoefficientTable t = coeff_table({w}, Basis::trigonometric, 2 * q, iv, num);
      double worst = 0.0;
      for (int j = 0; j <= 2 * q; ++j) {
        DrawSet d = unit_draws({1}, 2 * q);
        d.set_zeta(1, j, 1.0);
        const double coef = trig_milstein(which, q, d, iv, {1});
        worst = std::max(worst, std::abs(coef - t.c(std::vector<int>{j})));
      }
      add(std::string("trig_") + label + "_coefficients_q3", 0.0, worst, 1e-12, worst <= 1e-12);
    }
    {
      TableOptions num;
      num.mode = CoeffMode::numeric;
      const CoefficientTable t = coeff_table({1, 0}, Basis::trigonometric, 2 * q, iv, num);
      double worst = 0.0;
      for (int j1 = 0; j1 <= 2 * q; ++j1) {
        for (int j2 = 0; j2 <= 2 * q; ++j2) {
          DrawSet d = unit_draws({1, 2}, 2 * q);
          d.set_zeta(1, j1, 1.0);
          d.set_zeta(2, j2, 1.0);
          const double coef = trig_milstein(TrigIntegral::I10_strat, q, d, iv, {1, 2});
          worst = std::max(worst, std::abs(coef - t.c(std::vector<int>{j1, j2})));
        }
      }
      add("trig_I10_strat_coefficients_q3", 0.0, worst, 1e-12, worst <= 1e-12);
    }

    StreamConfig cfg{77, mc_samples(), opts_.workers};
    const double h = iv.length();
    mc_check("trig_I1_second_moment", h * h * h / 3,
             mc_moment_trig(TrigIntegral::I1, q, iv, {1}, cfg, Statistic::second_moment));
    ++cfg.seed;
    mc_check("trig_I2_second_moment", std::pow(h, 5) / 5,
             mc_moment_trig(TrigIntegral::I2, q, iv, {1}, cfg, Statistic::second_moment));
    ++cfg.seed;
    const Expansion leg = catalog("I_(1)", Variant::ito, 1, {1}, iv);
    mc_check("legendre_I1_second_moment", h * h * h / 3,
             mc_moment(leg, cfg, Statistic::second_moment));
  }

  static DrawSet unit_draws(const std::vector<int>& comps, int max_j) {
    DrawSet d;
    for (int i : comps) {
      for (int j = 0; j <= max_j; ++j) d.set_zeta(i, j, 0.0);
      d.set_tail(i, {0.0, 0.0});
    }
    return d;
  }

  ValidationOptions opts_;
  ValidationReport report_;
  std::string group_;
};

}  // namespace

bool ValidationReport::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

const std::vector<std::string>& validation_groups() {
  static const std::vector<std::string> groups = {
      "tables",           "orthonormality", "parseval", "constants", "telescoping",
      "exact_vs_numeric", "identities",     "mc",       "trig"};
  return groups;
}

ValidationReport validate_suite(const ValidationOptions& opts) {
  if (opts.only) {
    const auto& g = validation_groups();
    if (std::find(g.begin(), g.end(), *opts.only) == g.end()) {
      throw std::invalid_argument("unknown validation group: " + *opts.only);
    }
  }
  return Suite(opts).run();
}

nlohmann::json to_json(const ValidationReport& r) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : r.checks) {
    nlohmann::json j = {{"group", c.group},         {"check", c.check},
                        {"expected", c.expected},   {"observed", c.observed},
                        {"tolerance", c.tolerance}, {"pass", c.pass}};
    if (!c.detail.empty()) j["detail"] = c.detail;
    checks.push_back(std::move(j));
  }
  return {{"level", r.level}, {"pass", r.pass()}, {"checks", checks}};
}

}  // namespace stochint
