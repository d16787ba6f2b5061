// Acceptance suite: one pass/fail line per criterion. Tolerances are fixed here, not configurable.

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "stochint/coeff.hpp"
#include "stochint/error_analysis.hpp"
#include "stochint/expansion.hpp"
#include "stochint/mc.hpp"
#include "stochint/quadrature.hpp"

using namespace stochint;

namespace {

constexpr double kConstantRelTol = 1e-5;
constexpr double kTelescopeTol = 1e-12;
constexpr double kGramTol = 1e-10;
constexpr double kOracleTol = 1e-10;
constexpr double kIdentityTol = 1e-12;
constexpr double kMcStdErrs = 3.0;
constexpr std::uint64_t kMcSamples = 100000;
constexpr double kTailTol = 1e-14;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  std::string failures;
  void fail(const std::string& why) {
    pass = false;
    failures += "\n    - " + why;
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

// 1. Published coefficient tables reproduced exactly.
void table_regression(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  const Interval unit(0, 1);
  int checked = 0, wrong = 0;
  auto compare = [&](const CoefficientTable& t, int rows, int cols, auto&& ref, std::vector<int> fixed) {
    for (int r = 0; r < rows; ++r) {
      for (int c = 0; c < cols; ++c) {
        std::vector<int> j = {c, r};
        j.insert(j.end(), fixed.begin(), fixed.end());
        ++checked;
        if (t.cbar(j) != rational_from_string(ref[r][c])) {
          ++wrong;
          o.fail("entry j_1=" + std::to_string(c) + " j_2=" + std::to_string(r) + " of a " +
                 std::to_string(t.k()) + "-fold table");
        }
      }
    }
  };
  compare(coeff_table({0, 0, 0}, Basis::legendre, 6, unit), 7, 7, fixtures::kTable1, {3});
  compare(coeff_table({0, 0, 0, 0}, Basis::legendre, 2, unit), 3, 3, fixtures::kTable2, {1, 2});
  compare(coeff_table({0, 0, 0, 0, 0}, Basis::legendre, 1, unit), 2, 2, fixtures::kTable3, {1, 0, 1});
  const double secs = seconds_since(t0);
  if (secs >= 5.0) o.fail("runtime " + fmt(secs) + " s");
  o.detail << checked - wrong << "/" << checked << " exact entries, " << fmt(secs) << " s";
}

// 2. Published truncation-error decimals.
void error_constants(Outcome& o) {
  struct Case {
    WeightVector w;
    int p;
    double published;
  };
  const std::vector<Case> cases = {{{0, 0, 0}, 6, 0.01956},     {{0, 0, 0, 0}, 2, 0.0236084},
                                   {{0, 0, 0, 0, 0}, 1, 0.00759105}, {{1, 0, 0}, 2, 0.00815429},
                                   {{0, 1, 0}, 2, 0.0173903},   {{0, 0, 1}, 2, 0.0252801}};
  const auto t0 = std::chrono::steady_clock::now();
  int ok = 0;
  for (const auto& c : cases) {
    const CoefficientTable t = coeff_table(c.w, Basis::legendre, c.p, Interval(0, 1));
    const ErrorReport r = exact_mse(t, IndexPattern::distinct(t.k()), c.p);
    const double rel = std::abs(r.exact - c.published) / c.published;
    std::string w;
    for (int l : c.w) w += std::to_string(l);
    if (rel <= kConstantRelTol) {
      ++ok;
    } else {
      o.fail("w=" + w + " p=" + std::to_string(c.p) + " exact " + r.exact_value->coefficient.get_str() +
             " = " + fmt(r.exact) + " vs " + fmt(c.published) + " rel " + fmt(rel));
    }
  }
  const double secs = seconds_since(t0);
  if (secs >= 30.0) o.fail("runtime " + fmt(secs) + " s");
  o.detail << ok << "/" << cases.size() << " within " << kConstantRelTol << " relative, " << fmt(secs) << " s";
}

// 3. Double-integral closed form telescopes and equals the table defect.
void telescoping(Outcome& o) {
  const Interval iv(0, 1);
  TableOptions opts;
  opts.max_degree = 128;
  const CoefficientTable t = coeff_table({0, 0}, Basis::legendre, 50, iv, opts);
  double worst_formula = 0.0, worst_table = 0.0;
  for (int q = 1; q <= 50; ++q) {
    const double cf = closed_form_mse(ClosedForm::strat_I00_distinct, q, iv);
    worst_formula = std::max(worst_formula, std::abs(cf - 1.0 / (4 * (2 * q + 1))));
    worst_table = std::max(worst_table, std::abs(cf - exact_mse(t, IndexPattern::distinct(2), q).exact));
  }
  if (worst_formula > kTelescopeTol) o.fail("telescoped formula " + fmt(worst_formula));
  if (worst_table > kTelescopeTol) o.fail("table defect " + fmt(worst_table));
  o.detail << "q=1..50 max |closed - h^2/(4(2q+1))| " << fmt(worst_formula) << ", max |closed - defect| "
           << fmt(worst_table);
}

// 4. Orthonormal bases and Parseval partial sums.
void orthonormality_parseval(Outcome& o) {
  const Interval iv(0.5, 2.0);
  const auto& rule = gauss_legendre(64);
  const double half = 0.5 * iv.length();
  double worst = 0.0;
  for (Basis b : {Basis::legendre, Basis::trigonometric}) {
    for (int i = 0; i <= 12; ++i) {
      for (int j = 0; j <= 12; ++j) {
        double g = 0.0;
        for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
          const double s = iv.t() + half * (rule.nodes[q] + 1);
          g += half * rule.weights[q] * basis_eval(b, i, s, iv) * basis_eval(b, j, s, iv);
        }
        worst = std::max(worst, std::abs(g - (i == j ? 1.0 : 0.0)));
      }
    }
  }
  if (worst > kGramTol) o.fail("gram deviation " + fmt(worst));
  int tables = 0;
  for (int k = 1; k <= 4; ++k) {
    for (int lead = 0; lead <= 1; ++lead) {
      WeightVector w(k, 0);
      w[0] = lead;
      const CoefficientTable t = coeff_table(w, Basis::legendre, 6, iv);
      const double norm = norm_squared(w, iv);
      double prev = 0.0;
      for (int p = 0; p <= 6; ++p) {
        const double partial = norm - exact_mse(t, IndexPattern::distinct(k), p).exact;
        if (partial < prev || partial > norm) {
          o.fail("k=" + std::to_string(k) + " p=" + std::to_string(p) + " partial sum " + fmt(partial));
        }
        prev = partial;
      }
      ++tables;
    }
  }
  o.detail << "gram max deviation " << fmt(worst) << " (both bases, i,j<=12); Parseval monotone and bounded on "
           << tables << " tables, p<=6";
}

// 5. Exact rationals versus independent per-entry nested quadrature.
void exact_vs_quadrature(Outcome& o) {
  const Interval iv(0.3, 1.7);
  double worst = 0.0;
  std::size_t entries = 0;
  for (int k = 1; k <= 4; ++k) {
    std::vector<WeightVector> ws = {WeightVector(k, 0)};
    for (int l = 0; l < k; ++l) {
      ws.push_back(WeightVector(k, 0));
      ws.back()[l] = 1;
    }
    for (const auto& w : ws) {
      const CoefficientTable t = coeff_table(w, Basis::legendre, 4, iv);
      const auto psi = monomial_weights(w, iv);
      const int order = default_quad_order(Basis::legendre, w, 4);
      for (std::size_t f = 0; f < t.size(); ++f) {
        const MultiIndex j = t.multi_index(f);
        const double exact = scale_coeff(simplex_coeff_exact(w, j), j, w, iv);
        worst = std::max(worst, std::abs(exact - coeff_numeric(psi, Basis::legendre, j, iv, order)));
        ++entries;
      }
    }
  }
  if (worst > kOracleTol) o.fail("max deviation " + fmt(worst));
  o.detail << entries << " entries (k<=4, p<=4, sum l<=1), max |exact - quadrature| " << fmt(worst);
}

// 6. Exact algebraic identities on shared draws.
void identities(Outcome& o) {
  const Interval iv(0.25, 1.75);
  const double h = iv.length();
  const std::vector<std::pair<const char*, double>> offsets = {
      {"00", h / 2},         {"10", -h * h / 4},    {"01", -h * h / 4},
      {"02", h * h * h / 6}, {"20", h * h * h / 6}, {"11", h * h * h / 6}};
  double worst_offset = 0.0, worst_i00 = 0.0, worst_hermite = 0.0;
  for (int q : {0, 1, 4, 8}) {
    for (const auto& [w, offset] : offsets) {
      for (bool equal : {true, false}) {
        const std::vector<int> labels = equal ? std::vector<int>{1, 1} : std::vector<int>{1, 2};
        const Expansion s = catalog(std::string("I*_(") + w + ")", Variant::stratonovich, q, labels, iv);
        const Expansion i = catalog(std::string("I_(") + w + ")", Variant::ito, q, labels, iv);
        for (std::uint64_t seed = 0; seed < 50; ++seed) {
          const DrawSet d = draw_set(seed, 2, q);
          worst_offset = std::max(worst_offset, std::abs(evaluate(s, d) - evaluate(i, d) - (equal ? offset : 0.0)));
        }
      }
    }
    const Expansion ito00 = catalog("I_(00)", Variant::ito, q, {1, 1}, iv);
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      const DrawSet d = draw_set(seed, 1, q);
      const double z = d.zeta(1, 0);
      worst_i00 = std::max(worst_i00, std::abs(evaluate(ito00, d) - h / 2 * (z * z - 1)));
    }
  }
  for (int k : {2, 3}) {
    for (int q : {0, 2, 5}) {
      const Expansion e = catalog(k == 2 ? "I_(00)" : "I_(000)", Variant::ito, q, std::vector<int>(k, 1), iv);
      for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const DrawSet d = draw_set(seed, 1, q);
        const double expect = hermite_closed_form(k, std::sqrt(h) * d.zeta(1, 0), h);
        worst_hermite = std::max(worst_hermite, std::abs(evaluate(e, d) - expect));
      }
    }
  }
  if (worst_offset > kIdentityTol) o.fail("offsets " + fmt(worst_offset));
  if (worst_i00 > kIdentityTol) o.fail("I_(00) truncation independence " + fmt(worst_i00));
  if (worst_hermite > kIdentityTol) o.fail("Hermite " + fmt(worst_hermite));
  o.detail << "max residual offsets " << fmt(worst_offset) << ", I_(00) " << fmt(worst_i00) << ", Hermite k=2,3 "
           << fmt(worst_hermite) << " (50 seeds each)";
}

void mc_expect(Outcome& o, const std::string& name, const MomentEstimate& m, double expected, int& count) {
  ++count;
  const double z = std::abs(m.value() - expected) / m.std_error;
  if (!(z <= kMcStdErrs)) {
    o.fail(name + " " + fmt(m.value()) + " vs " + fmt(expected) + " (" + fmt(z) + " stderr)");
  }
}

Expansion ito_expansion(const CoefficientTable& t, int p, const std::vector<int>& labels) {
  return build_ito(ExpansionSpec{Kind::ito, t.weights(), Basis::legendre, p, labels, t.interval()}, t);
}

// 7. Seeded Monte Carlo against analytic moments.
void monte_carlo(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  const Interval iv(0, 1);
  StreamConfig cfg{77001, kMcSamples, 4};
  int count = 0;
  const std::vector<std::pair<WeightVector, std::vector<int>>> centered = {
      {{0}, {1}},
      {{0, 0}, {1, 1}},
      {{1, 0}, {1, 1}},
      {{0, 0, 0}, {1, 1, 1}},
      {{0, 0, 0}, {1, 2, 1}},
      {{0, 1, 0}, {2, 2, 1}},
      {{0, 0, 0, 0}, {1, 1, 1, 1}},
      {{0, 0, 0, 0}, {1, 2, 2, 1}}};
  for (const auto& [w, labels] : centered) {
    const int p = w.size() == 4 ? 2 : 3;
    const CoefficientTable t = coeff_table(w, Basis::legendre, p, iv);
    mc_expect(o, "mean k=" + std::to_string(w.size()), mc_moment(ito_expansion(t, p, labels), cfg, Statistic::mean),
              0.0, count);
    ++cfg.seed;
  }
  struct Increment {
    WeightVector w;
    std::vector<int> labels;
    int p, p2;
  };
  for (const Increment& c : {Increment{{0, 0, 0}, {1, 2, 3}, 2, 6}, Increment{{1, 0}, {1, 1}, 1, 4}}) {
    const CoefficientTable t = coeff_table(c.w, Basis::legendre, c.p2, iv);
    const IndexPattern pat = IndexPattern::from_labels(c.labels);
    const double expected = exact_mse(t, pat, c.p).exact - exact_mse(t, pat, c.p2).exact;
    const MomentEstimate m = mc_moment(ito_expansion(t, c.p2, c.labels), ito_expansion(t, c.p, c.labels), cfg,
                                       Statistic::second_moment);
    mc_expect(o, "increment k=" + std::to_string(c.w.size()), m, expected, count);
    ++cfg.seed;
  }
  {
    const CoefficientTable t = coeff_table({0, 0}, Basis::legendre, 20, iv);
    const double expected = 0.5 - exact_mse(t, IndexPattern::distinct(2), 20).exact;
    mc_expect(o, "I_(00) p=20", mc_moment(ito_expansion(t, 20, {1, 2}), cfg, Statistic::second_moment), expected,
              count);
  }
  const double secs = seconds_since(t0);
  if (secs >= 300.0) o.fail("runtime " + fmt(secs) + " s");
  o.detail << count << " estimates at " << kMcSamples << " samples within " << kMcStdErrs << " stderr, "
           << fmt(secs) << " s";
}

// 8. Trigonometric tail constants and single-integral second moments.
void trigonometric(Outcome& o) {
  const double pi2 = std::numbers::pi * std::numbers::pi;
  double worst = 0.0, s2 = 0.0, s4 = 0.0;
  for (int q = 0; q <= 100; ++q) {
    if (q > 0) {
      s2 += 1.0 / (double(q) * q);
      s4 += 1.0 / (double(q) * q * q * q);
    }
    worst = std::max(worst, std::abs(alpha_q(q) - (pi2 / 6 - s2)));
    worst = std::max(worst, std::abs(beta_q(q) - (pi2 * pi2 / 90 - s4)));
  }
  if (worst > kTailTol) o.fail("tail constants " + fmt(worst));
  const Interval iv(0, 1.3);
  const double expected = std::pow(iv.length(), 3) / 3;
  int count = 0;
  const MomentEstimate trig =
      mc_moment_trig(TrigIntegral::I1, 5, iv, {1}, {88001, kMcSamples, 4}, Statistic::second_moment);
  mc_expect(o, "trig I_(1)", trig, expected, count);
  const MomentEstimate leg =
      mc_moment(catalog("I_(1)", Variant::ito, 1, {1}, iv), {88002, kMcSamples, 4}, Statistic::second_moment);
  mc_expect(o, "Legendre I_(1)", leg, expected, count);
  o.detail << "alpha/beta max deviation " << fmt(worst) << " (q<=100); second moments " << fmt(trig.value())
           << " and " << fmt(leg.value()) << " vs " << fmt(expected);
}

struct Criterion {
  const char* title;
  std::function<void(Outcome&)> run;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  int only = 0;
  app.add_option("--criterion", only, "run a single criterion (1-8)")->check(CLI::Range(1, 8));
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> criteria = {
      {"table regression", table_regression},
      {"error constants", error_constants},
      {"closed-form telescoping", telescoping},
      {"orthonormality and Parseval", orthonormality_parseval},
      {"exact vs quadrature", exact_vs_quadrature},
      {"algebraic identities", identities},
      {"Monte Carlo moments", monte_carlo},
      {"trigonometric block", trigonometric},
  };
  bool all = true;
  for (std::size_t n = 0; n < criteria.size(); ++n) {
    if (only != 0 && static_cast<std::size_t>(only) != n + 1) continue;
    Outcome o;
    try {
      criteria[n].run(o);
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    all = all && o.pass;
    std::printf("[%s] C%zu %s: %s%s\n", o.pass ? "PASS" : "FAIL", n + 1, criteria[n].title,
                o.detail.str().c_str(), o.failures.c_str());
  }
  return all ? 0 : 1;
}
