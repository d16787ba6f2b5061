#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "stochint/coeff.hpp"
#include "stochint/expansion.hpp"

namespace stochint {

// Philox4x32 with 10 rounds (Salmon et al. counter-based generator).
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> ctr,
                                           std::array<std::uint32_t, 2> key);

// Variates are a pure function of (seed, sample, component, index):
//   key = seed, counter = (sample lo, sample hi, component, block).
//   Box-Muller on the four output words: u1 = (top 53 bits of w0:w1 + 1) 2^-53 in (0, 1],
//   u2 = (top 53 bits of w2:w3) 2^-53, r = sqrt(-2 ln u1), theta = 2 pi u2.
//   zeta_j uses block j >> 1 and takes r cos(theta) for even j, r sin(theta) for odd j.
//   Tail variates use block kTailBlock: xi = r cos(theta), mu = r sin(theta).
inline constexpr std::uint32_t kTailBlock = 0x80000000u;

std::array<double, 2> gaussian_pair(std::uint64_t seed, std::uint64_t sample, int component,
                                    std::uint32_t block);
double zeta_variate(std::uint64_t seed, std::uint64_t sample, int component, int j);
TailVariates tail_variates(std::uint64_t seed, std::uint64_t sample, int component);

// Variates zeta_j^{(i)} for i in 1..components, j in 0..max_j, plus tails when tail_q is set.
// This is sample `sample` of stream `seed`.
DrawSet draw_set(std::uint64_t seed, int components, int max_j,
                 std::optional<int> tail_q = std::nullopt, std::uint64_t sample = 0);

struct StreamConfig {
  std::uint64_t seed = 0;
  std::uint64_t n_samples = 100000;
  int workers = 1;
};

enum class Statistic { mean, second_moment };

struct MomentEstimate {
  double mean = 0.0;
  double second_moment = 0.0;
  double std_error = 0.0;  // standard error of the requested statistic
  std::uint64_t n = 0;
  Statistic statistic = Statistic::mean;

  double value() const { return statistic == Statistic::mean ? mean : second_moment; }
};

MomentEstimate mc_moment(const Expansion& e, const StreamConfig& cfg, Statistic statistic);
// Statistic of evaluate(a) - evaluate(b) on shared draws.
MomentEstimate mc_moment(const Expansion& a, const Expansion& b, const StreamConfig& cfg,
                         Statistic statistic);
MomentEstimate mc_moment_trig(TrigIntegral which, int q, const Interval& iv,
                              const std::vector<int>& components, const StreamConfig& cfg,
                              Statistic statistic);

// Realizations of several expansions on shared draws; result[sample][column].
std::vector<std::vector<double>> realize(const std::vector<Expansion>& expansions,
                                         const StreamConfig& cfg);

enum class Level { quick, full };

struct CheckResult {
  std::string group;
  std::string check;
  double expected = 0.0;
  double observed = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string detail;
};

struct ValidationReport {
  std::string level;
  std::vector<CheckResult> checks;
  bool pass() const;
};

using TableSource = std::function<CoefficientTable(const WeightVector&, int p)>;

struct ValidationOptions {
  Level level = Level::quick;
  std::optional<std::string> only;  // restrict to one group
  int workers = 1;
  TableSource table_source;  // Legendre tables on [0, 1]; defaults to coeff_table
};

const std::vector<std::string>& validation_groups();
ValidationReport validate_suite(const ValidationOptions& opts);
nlohmann::json to_json(const ValidationReport& r);

}  // namespace stochint
