#include "stochint/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <numeric>
#include <sstream>

#include "CLI11.hpp"
#include "stochint/coeff.hpp"
#include "stochint/error.hpp"
#include "stochint/error_analysis.hpp"
#include "stochint/expansion.hpp"
#include "stochint/mc.hpp"

namespace stochint::cli {

namespace {

struct Config {
  int k = 0;
  std::vector<int> weights;
  std::string basis = "legendre";
  int p = 0;
  int q = 6;
  std::vector<int> pattern;
  double t = 0.0;
  double T = 1.0;
  std::uint64_t seed = 0;
  std::uint64_t n_samples = 1000;
  std::string output;
  std::string format = "json";
  int workers = 1;
  std::string mode = "auto";
  bool sweep = false;
  double eps = 0.0;
  int p_max = 12;
  bool quick = false;
  bool full = false;
  std::string only;
  std::vector<std::string> names;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void emit(const Config& cfg, const std::string& text, std::ostream& out) {
  if (cfg.output.empty()) {
    out << text;
    return;
  }
  std::ofstream f(cfg.output, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open output file: " + cfg.output);
  f << text;
}

// Resolves k and weights from -k / -w.
void resolve_weights(Config& cfg, bool k_given, bool w_given) {
  if (w_given && k_given && static_cast<int>(cfg.weights.size()) != cfg.k) {
    throw UsageError("--weights: length " + std::to_string(cfg.weights.size()) +
                     " does not match -k " + std::to_string(cfg.k));
  }
  if (w_given) cfg.k = static_cast<int>(cfg.weights.size());
  if (cfg.k < 1) throw UsageError("-k: multiplicity must be given and at least 1");
  if (!w_given) cfg.weights.assign(cfg.k, 0);
  for (int l : cfg.weights) {
    if (l < 0) throw UsageError("--weights: exponents must be nonnegative");
  }
}

IndexPattern resolve_pattern(const Config& cfg, bool given) {
  if (!given) return IndexPattern::distinct(cfg.k);
  if (static_cast<int>(cfg.pattern.size()) != cfg.k) {
    throw UsageError("--pattern: expected " + std::to_string(cfg.k) + " labels");
  }
  for (int l : cfg.pattern) {
    if (l < 1) throw UsageError("--pattern: labels must be >= 1");
  }
  return IndexPattern::from_labels(cfg.pattern);
}

Interval resolve_interval(const Config& cfg) {
  if (!(cfg.T > cfg.t)) throw UsageError("-T: end time must exceed -t");
  return Interval(cfg.t, cfg.T);
}

void check_format(const Config& cfg) {
  if (cfg.format != "json" && cfg.format != "csv") {
    throw UsageError("--format: expected json or csv");
  }
}

int cmd_coeffs(Config& cfg, bool k_given, bool w_given, std::ostream& out, std::ostream& err) {
  resolve_weights(cfg, k_given, w_given);
  check_format(cfg);
  const Interval iv = resolve_interval(cfg);
  if (cfg.p < 0) throw UsageError("-p: truncation must be nonnegative");
  TableOptions opts;
  opts.workers = cfg.workers;
  if (cfg.mode == "exact") {
    opts.mode = CoeffMode::exact;
  } else if (cfg.mode == "numeric") {
    opts.mode = CoeffMode::numeric;
  } else if (cfg.mode != "auto") {
    throw UsageError("--mode: expected auto, exact or numeric");
  }
  Basis basis;
  try {
    basis = basis_from_string(cfg.basis);
  } catch (const std::invalid_argument&) {
    throw UsageError("--basis: expected legendre or trigonometric");
  }
  const CoefficientTable table = coeff_table(cfg.weights, basis, cfg.p, iv, opts);
  std::ostringstream body;
  if (cfg.format == "csv") {
    write_csv(body, table);
  } else {
    body << to_json(table).dump(1) << '\n';
  }
  emit(cfg, body.str(), out);
  const double norm = norm_squared(cfg.weights, iv);
  const double defect = exact_mse(table, IndexPattern::distinct(cfg.k), cfg.p).exact;
  std::ostream& summary = cfg.output.empty() ? err : out;
  summary << "entries " << table.size() << "  parseval_sum " << fmt17(norm - defect) << "  norm "
          << fmt17(norm) << '\n';
  return 0;
}

int cmd_error(Config& cfg, bool k_given, bool w_given, bool pattern_given, std::ostream& out) {
  resolve_weights(cfg, k_given, w_given);
  check_format(cfg);
  const IndexPattern pattern = resolve_pattern(cfg, pattern_given);
  const Interval iv = resolve_interval(cfg);
  if (cfg.p < 0) throw UsageError("-p: truncation must be nonnegative");
  TableOptions opts;
  opts.workers = cfg.workers;
  const CoefficientTable table = coeff_table(cfg.weights, Basis::legendre, cfg.p, iv, opts);
  std::ostringstream body;
  if (cfg.sweep || cfg.format == "csv") {
    std::vector<ErrorReport> rows;
    for (int p = 0; p <= cfg.p; ++p) rows.push_back(exact_mse(table, pattern, p));
    if (cfg.format == "csv") {
      write_sweep_csv(body, rows);
    } else {
      nlohmann::json arr = nlohmann::json::array();
      for (const auto& r : rows) arr.push_back(to_json(r));
      body << arr.dump(1) << '\n';
    }
  } else {
    body << to_json(exact_mse(table, pattern, cfg.p)).dump(1) << '\n';
  }
  emit(cfg, body.str(), out);
  return 0;
}

int cmd_select(Config& cfg, bool k_given, bool w_given, bool pattern_given, std::ostream& out) {
  resolve_weights(cfg, k_given, w_given);
  const IndexPattern pattern = resolve_pattern(cfg, pattern_given);
  const Interval iv = resolve_interval(cfg);
  if (!(cfg.eps > 0)) throw UsageError("--eps: relative tolerance must be positive");
  TableOptions opts;
  opts.workers = cfg.workers;
  const Selection s = select_p(cfg.weights, pattern, cfg.eps, iv, cfg.p_max, opts);
  nlohmann::json j = {{"found", s.found}, {"ratio", s.ratio}, {"best_p", s.best_p},
                      {"p_max", cfg.p_max}, {"eps_rel", cfg.eps}};
  j["p"] = s.found ? nlohmann::json(s.p) : nlohmann::json(nullptr);
  emit(cfg, j.dump(1) + "\n", out);
  return s.found ? 0 : 1;
}

int cmd_sample(Config& cfg, bool pattern_given, std::ostream& out) {
  check_format(cfg);
  const Interval iv = resolve_interval(cfg);
  if (cfg.names.empty()) throw UsageError("sample: at least one integral name is required");
  if (cfg.q < 0) throw UsageError("-q: truncation must be nonnegative");
  if (cfg.n_samples < 1) throw UsageError("-n: sample count must be positive");
  std::map<int, int> component;  // symbolic label -> component id
  for (int l : cfg.pattern) {
    if (l < 1) throw UsageError("--pattern: labels must be >= 1");
    component.try_emplace(l, static_cast<int>(component.size()) + 1);
  }
  std::vector<Expansion> exps;
  for (const auto& name : cfg.names) {
    CatalogName cn;
    try {
      cn = parse_catalog_name(name);
    } catch (const std::invalid_argument& e) {
      throw UsageError(std::string("sample: ") + e.what());
    }
    const int k = static_cast<int>(cn.weights.size());
    std::vector<int> comps(k);
    if (pattern_given) {
      if (static_cast<int>(cfg.pattern.size()) < k) {
        throw UsageError("--pattern: " + name + " needs " + std::to_string(k) + " labels");
      }
      for (int l = 0; l < k; ++l) comps[l] = component.at(cfg.pattern[l]);
    } else {
      std::iota(comps.begin(), comps.end(), 1);
    }
    exps.push_back(catalog(name, cn.variant, cfg.q, comps, iv));
  }
  const auto rows = realize(exps, {cfg.seed, cfg.n_samples, cfg.workers});
  std::ostringstream body;
  if (cfg.format == "csv") {
    for (std::size_t c = 0; c < cfg.names.size(); ++c) body << (c ? "," : "") << cfg.names[c];
    body << '\n';
    for (const auto& row : rows) {
      for (std::size_t c = 0; c < row.size(); ++c) body << (c ? "," : "") << fmt17(row[c]);
      body << '\n';
    }
  } else {
    nlohmann::json j = {{"names", cfg.names}, {"seed", cfg.seed}, {"q", cfg.q}, {"rows", rows}};
    body << j.dump() << '\n';
  }
  emit(cfg, body.str(), out);
  return 0;
}

int cmd_verify(Config& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.quick && cfg.full) throw UsageError("--full: cannot be combined with --quick");
  ValidationOptions opts;
  opts.level = cfg.full ? Level::full : Level::quick;
  opts.workers = cfg.workers;
  if (!cfg.only.empty()) {
    const auto& g = validation_groups();
    if (std::find(g.begin(), g.end(), cfg.only) == g.end()) {
      throw UsageError("--only: unknown group '" + cfg.only + "'");
    }
    opts.only = cfg.only;
  }
  const ValidationReport report = validate_suite(opts);
  emit(cfg, to_json(report).dump(1) + "\n", out);
  std::size_t failed = 0;
  for (const auto& c : report.checks) {
    if (!c.pass) {
      ++failed;
      err << "FAIL " << c.group << '/' << c.check << " expected " << fmt17(c.expected)
          << " observed " << fmt17(c.observed) << " tolerance " << fmt17(c.tolerance) << '\n';
    }
  }
  err << report.checks.size() - failed << '/' << report.checks.size() << " checks passed\n";
  return report.pass() ? 0 : 1;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fourier-Legendre expansions of iterated stochastic integrals", "stochint"};
  app.require_subcommand(1);
  Config cfg;
  if (const char* env = std::getenv("STOCHINT_WORKERS")) {
    try {
      cfg.workers = std::max(1, std::stoi(env));
    } catch (...) {
      err << "error: STOCHINT_WORKERS must be an integer\n";
      return 2;
    }
  }

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("-t", cfg.t, "start time")->capture_default_str();
    sub->add_option("-T", cfg.T, "end time")->capture_default_str();
    sub->add_option("-o,--output", cfg.output, "output path (default stdout)");
    sub->add_option("--workers", cfg.workers, "worker threads (default $STOCHINT_WORKERS or 1)")
        ->check(CLI::PositiveNumber);
  };
  auto add_kw = [&](CLI::App* sub) {
    auto* k = sub->add_option("-k", cfg.k, "multiplicity")->check(CLI::Range(1, 64));
    auto* w = sub->add_option("-w,--weights", cfg.weights, "weight exponents l_1,...,l_k")
                  ->delimiter(',');
    return std::pair{k, w};
  };

  CLI::App* coeffs = app.add_subcommand("coeffs", "write a coefficient table");
  auto [ck, cw] = add_kw(coeffs);
  coeffs->add_option("--basis", cfg.basis, "legendre or trigonometric")->capture_default_str();
  coeffs->add_option("-p", cfg.p, "truncation order")->capture_default_str();
  coeffs->add_option("--format", cfg.format, "json or csv")->capture_default_str();
  coeffs->add_option("--mode", cfg.mode, "auto, exact or numeric")->capture_default_str();
  add_common(coeffs);

  CLI::App* error = app.add_subcommand("error", "exact mean-square truncation error");
  auto [ek, ew] = add_kw(error);
  error->add_option("-p", cfg.p, "truncation order")->capture_default_str();
  auto* epat = error->add_option("--pattern", cfg.pattern, "component labels, e.g. 1,1,2")
                   ->delimiter(',');
  error->add_flag("--sweep", cfg.sweep, "report every p from 0 to -p");
  error->add_option("--format", cfg.format, "json or csv")->capture_default_str();
  add_common(error);

  CLI::App* select = app.add_subcommand("select", "smallest p meeting a relative error");
  auto [sk, sw] = add_kw(select);
  auto* spat = select->add_option("--pattern", cfg.pattern, "component labels")->delimiter(',');
  select->add_option("--eps", cfg.eps, "relative tolerance exact/norm")->required();
  select->add_option("--p-max", cfg.p_max, "largest p tried")->capture_default_str();
  add_common(select);

  CLI::App* sample = app.add_subcommand("sample", "realizations of catalog integrals");
  sample->add_option("names", cfg.names, "names such as I_(00) or I*_(10)")->required();
  sample->add_option("-q", cfg.q, "truncation order")->capture_default_str();
  auto* smpat = sample->add_option("--pattern", cfg.pattern, "component labels")->delimiter(',');
  sample->add_option("-n", cfg.n_samples, "number of samples")->capture_default_str();
  sample->add_option("--seed", cfg.seed, "stream seed")->capture_default_str();
  sample->add_option("--format", cfg.format, "json or csv")->capture_default_str();
  add_common(sample);

  CLI::App* verify = app.add_subcommand("verify", "run the validation suite");
  verify->add_flag("--quick", cfg.quick, "quick level (default)");
  verify->add_flag("--full", cfg.full, "full level");
  verify->add_option("--only", cfg.only, "run one group");
  add_common(verify);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    if (coeffs->parsed()) return cmd_coeffs(cfg, ck->count() > 0, cw->count() > 0, out, err);
    if (error->parsed()) return cmd_error(cfg, ek->count() > 0, ew->count() > 0, epat->count() > 0, out);
    if (select->parsed()) return cmd_select(cfg, sk->count() > 0, sw->count() > 0, spat->count() > 0, out);
    if (sample->parsed()) return cmd_sample(cfg, smpat->count() > 0, out);
    if (verify->parsed()) return cmd_verify(cfg, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const LimitError& e) {
    err << "error: limit exceeded: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace stochint::cli
