#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "stochint/coeff.hpp"
#include "stochint/kernels.hpp"

namespace stochint {

enum class Kind { ito, stratonovich };

std::string to_string(Kind kind);

struct ExpansionSpec {
  Kind kind = Kind::ito;
  WeightVector weights;  // k = weights.size()
  Basis basis = Basis::legendre;
  int p = 0;
  std::vector<int> i_pattern;  // component labels; 0 is the time "component"
  Interval interval{0.0, 1.0};

  int k() const { return static_cast<int>(weights.size()); }
};

// Signed indicator term: sign * prod over pairs of 1{j_a = j_b}, times the product of the
// remaining zeta factors. Positions are 0-based.
struct Correction {
  int sign = -1;
  std::vector<std::pair<int, int>> pairs;
};

struct Term {
  MultiIndex j;
  double c = 0.0;
  std::vector<Correction> corrections;
};

struct Expansion {
  ExpansionSpec spec;
  std::vector<Term> terms;
  double offset = 0.0;  // deterministic additive constant
  std::optional<std::string> closed_form;
};

struct TailVariates {
  double xi = 0.0;
  double mu = 0.0;
  friend bool operator==(const TailVariates&, const TailVariates&) = default;
};

// Standard Gaussian variates zeta_j^{(i)} for i >= 1 and optional trigonometric tails.
class DrawSet {
 public:
  explicit DrawSet(std::uint64_t seed = 0) : seed_(seed) {}

  std::uint64_t seed() const { return seed_; }
  void set_zeta(int i, int j, double v) { zeta_[{i, j}] = v; }
  bool has_zeta(int i, int j) const { return zeta_.count({i, j}) != 0; }
  double zeta(int i, int j) const;
  void set_tail(int i, TailVariates tv) { tail_[i] = tv; }
  bool has_tail(int i) const { return tail_.count(i) != 0; }
  const TailVariates& tail(int i) const;

  friend bool operator==(const DrawSet&, const DrawSet&) = default;

 private:
  std::uint64_t seed_;
  std::map<std::pair<int, int>, double> zeta_;
  std::map<int, TailVariates> tail_;
};

Expansion build_ito(const ExpansionSpec& spec, const CoefficientTable& table);
Expansion build_strat(const ExpansionSpec& spec, const CoefficientTable& table);

enum class Variant { ito, stratonovich };

struct CatalogName {
  WeightVector weights;
  Variant variant = Variant::ito;
};

// Accepts "I_(10)" (Ito) or "I*_(10)" (Stratonovich); digits are l_1 l_2 ..., innermost first.
CatalogName parse_catalog_name(std::string_view name);
bool is_catalog_name(std::string_view name);

Expansion catalog(std::string_view name, Variant variant, int q, const std::vector<int>& i_pattern,
                  const Interval& iv);

// Coinciding-index closed form in terms of delta ~ N(0, Delta): Hermite polynomial / k!,
// multiplied by scale.
double hermite_closed_form(int k, double delta, double Delta, double scale = 1.0);

enum class TrigIntegral { I1, I2, I10_strat };

TrigIntegral trig_integral_from_string(std::string_view name);

// pi^2/6 - sum_{r<=q} 1/r^2 and pi^4/90 - sum_{r<=q} 1/r^4.
double alpha_q(int q);
double beta_q(int q);

// Slot index codes for the trigonometric tail variates xi_q and mu_q.
inline constexpr int kTailXi = -1;
inline constexpr int kTailMu = -2;

// Maps (component, index) pairs to dense slot ids for the monomial kernels.
// Index kTailXi / kTailMu refer to the tail variates of that component.
class SlotTable {
 public:
  std::uint32_t id(int i, int j);
  const std::vector<std::pair<int, int>>& slots() const { return slots_; }
  std::size_t size() const { return slots_.size(); }

 private:
  std::map<std::pair<int, int>, std::uint32_t> index_;
  std::vector<std::pair<int, int>> slots_;
};

// Flattens an expansion into monomials over slots; i = 0 factors are folded into coefficients
// as the deterministic integral of phi_j. Zero-coefficient monomials are skipped.
kernels::MonomialProgram compile(const Expansion& e, SlotTable& slots);

double evaluate(const Expansion& e, const DrawSet& draws);

// Value of every slot taken from a DrawSet (zeta or tail variates).
std::vector<double> gather(const SlotTable& slots, const DrawSet& draws);

// Truncated trigonometric expansions with tail compensation. components = {i_1} or {i_1, i_2}.
kernels::MonomialProgram trig_program(TrigIntegral which, int q, const Interval& iv,
                                      const std::vector<int>& components, SlotTable& slots);
double trig_milstein(TrigIntegral which, int q, const DrawSet& draws, const Interval& iv,
                     const std::vector<int>& components);

nlohmann::json to_json(const ExpansionSpec& spec);
nlohmann::json to_json(const Expansion& e);

}  // namespace stochint
