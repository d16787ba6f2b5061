#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "stochint/coeff.hpp"

namespace stochint {

// Partition of positions 0..k-1 into classes of equal component labels.
class IndexPattern {
 public:
  // Labels must be >= 1; only their equality structure is kept.
  static IndexPattern from_labels(const std::vector<int>& labels);
  static IndexPattern distinct(int k);

  int k() const { return k_; }
  const std::vector<std::vector<int>>& groups() const { return groups_; }
  // Canonical labels 1, 2, ... in order of first appearance.
  std::vector<int> labels() const;
  bool pairwise_distinct() const { return static_cast<int>(groups_.size()) == k_; }
  // Position permutations that only move positions within a class; identity first.
  std::vector<std::vector<int>> permutations() const;

 private:
  int k_ = 0;
  std::vector<std::vector<int>> groups_;
};

// coefficient * h^power with h = T - t.
struct ScaledRational {
  Rational coefficient;
  int power = 0;
  double value(double h) const;
};

struct ErrorReport {
  double exact = 0.0;
  double bound = 0.0;
  double norm = 0.0;
  int p = 0;
  IndexPattern pattern;
  std::optional<ScaledRational> exact_value;
  std::optional<ScaledRational> norm_value;

  double ratio() const { return exact / norm; }
};

// I_k = ||K||^2 = h^{sum(2l+1)} / prod_m (sum_{r<=m} (2 l_r + 1)).
ScaledRational norm_squared_exact(const WeightVector& weights);
double norm_squared(const WeightVector& weights, const Interval& iv);

// E = I_k - sum_{j<=p} C_j sum_{sigma} C_{sigma(j)}, sigma ranging over pattern.permutations().
ErrorReport exact_mse(const CoefficientTable& table, const IndexPattern& pattern, int p);

// Same quantity with the sum restricted to an index set closed under the pattern permutations.
ErrorReport exact_mse_on_set(const CoefficientTable& table, const IndexPattern& pattern,
                             std::span<const MultiIndex> indices);

// k! (I_k - sum_{j <= p_vector} C^2)
double mse_upper_bound(const CoefficientTable& table, const std::vector<int>& p_vector);

// (k!)^{2n} (n(2n-1))^{n(k-1)} (2n-1)!!
mpz_class moment_bound_constant(int n, int k);
double moment_bound(int n, const CoefficientTable& table, const std::vector<int>& p_vector);

enum class ClosedForm { strat_I00_distinct, strat_I10_distinct, ito_I10_equal };

ClosedForm closed_form_from_string(std::string_view name);
double closed_form_mse(ClosedForm which, int q, const Interval& iv);

struct Selection {
  bool found = false;
  int p = -1;          // smallest p meeting the threshold when found
  double ratio = 0.0;  // exact / norm at p, or the best ratio reached when not found
  int best_p = -1;
};

Selection select_p(const WeightVector& weights, const IndexPattern& pattern, double eps_rel,
                   const Interval& iv, int p_max, const TableOptions& opts = {});

nlohmann::json to_json(const ErrorReport& r);
// Columns p, exact, bound, ratio.
void write_sweep_csv(std::ostream& os, const std::vector<ErrorReport>& rows);

}  // namespace stochint
