#include "stochint/mc.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

#include "parallel.hpp"
#include "stochint/kernels.hpp"

namespace stochint {

namespace {

constexpr std::uint32_t kM0 = 0xD2511F53u;
constexpr std::uint32_t kM1 = 0xCD9E8D57u;
constexpr std::uint32_t kW0 = 0x9E3779B9u;
constexpr std::uint32_t kW1 = 0xBB67AE85u;
constexpr std::size_t kBlock = 4096;

std::array<double, 2> box_muller(const std::array<std::uint32_t, 4>& w) {
  const std::uint64_t a = ((std::uint64_t{w[0]} << 32) | w[1]) >> 11;
  const std::uint64_t b = ((std::uint64_t{w[2]} << 32) | w[3]) >> 11;
  const double u1 = static_cast<double>(a + 1) * 0x1.0p-53;
  const double u2 = static_cast<double>(b) * 0x1.0p-53;
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  return {r * std::cos(theta), r * std::sin(theta)};
}

// Generates slot values for a block of samples, one Philox call per (component, block) pair.
class VariateSource {
 public:
  VariateSource(const SlotTable& slots, std::uint64_t seed) : seed_(seed) {
    std::map<std::pair<int, std::uint32_t>, std::size_t> where;
    for (std::size_t s = 0; s < slots.size(); ++s) {
      const auto [i, j] = slots.slots()[s];
      if (i < 1) throw std::invalid_argument("sampled components must be >= 1");
      std::uint32_t block;
      int part;
      if (j == kTailXi || j == kTailMu) {
        block = kTailBlock;
        part = j == kTailXi ? 0 : 1;
      } else {
        block = static_cast<std::uint32_t>(j) >> 1;
        part = j & 1;
      }
      auto [it, inserted] = where.try_emplace({i, block}, groups_.size());
      if (inserted) groups_.push_back({i, block, {-1, -1}});
      groups_[it->second].slot[part] = static_cast<long>(s);
    }
  }

  // z[s * stride + r] for samples first .. first + count - 1.
  void fill(std::uint64_t first, std::size_t count, std::size_t stride, double* z) const {
    for (std::size_t r = 0; r < count; ++r) {
      const std::uint64_t sample = first + r;
      for (const Group& g : groups_) {
        const auto pair = gaussian_pair(seed_, sample, g.component, g.block);
        if (g.slot[0] >= 0) z[static_cast<std::size_t>(g.slot[0]) * stride + r] = pair[0];
        if (g.slot[1] >= 0) z[static_cast<std::size_t>(g.slot[1]) * stride + r] = pair[1];
      }
    }
  }

 private:
  struct Group {
    int component;
    std::uint32_t block;
    long slot[2];
  };
  std::uint64_t seed_;
  std::vector<Group> groups_;
};

struct Accum {
  double n = 0.0;
  double mean = 0.0;
  double m2 = 0.0;  // sum of squared deviations

  void merge(const Accum& o) {
    if (o.n == 0.0) return;
    if (n == 0.0) {
      *this = o;
      return;
    }
    const double tot = n + o.n;
    const double d = o.mean - mean;
    mean += d * o.n / tot;
    m2 += o.m2 + d * d * n * o.n / tot;
    n = tot;
  }
};

Accum block_accum(const double* v, std::size_t count, bool square) {
  Accum a;
  a.n = static_cast<double>(count);
  double s = 0.0;
  for (std::size_t i = 0; i < count; ++i) s += square ? v[i] * v[i] : v[i];
  a.mean = s / a.n;
  double m2 = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    const double d = (square ? v[i] * v[i] : v[i]) - a.mean;
    m2 += d * d;
  }
  a.m2 = m2;
  return a;
}

// Runs the programs over all samples; `combine` maps per-program values to the statistic input.
MomentEstimate run_moment(const SlotTable& slots, const std::vector<kernels::MonomialProgram>& progs,
                          const StreamConfig& cfg, Statistic statistic) {
  if (cfg.n_samples < 2) throw std::invalid_argument("Monte Carlo needs at least two samples");
  const VariateSource source(slots, cfg.seed);
  const std::size_t n_blocks = static_cast<std::size_t>((cfg.n_samples + kBlock - 1) / kBlock);
  std::vector<Accum> first(n_blocks);
  std::vector<Accum> second(n_blocks);
  detail::parallel_for(n_blocks, cfg.workers, [&](std::size_t b) {
    const std::uint64_t start = static_cast<std::uint64_t>(b) * kBlock;
    const std::size_t count = static_cast<std::size_t>(std::min<std::uint64_t>(kBlock, cfg.n_samples - start));
    std::vector<double> z(std::max<std::size_t>(slots.size(), 1) * kBlock);
    source.fill(start, count, kBlock, z.data());
    std::vector<double> out(kBlock);
    kernels::eval_program(progs[0], z.data(), kBlock, count, out.data());
    if (progs.size() == 2) {
      std::vector<double> other(kBlock);
      kernels::eval_program(progs[1], z.data(), kBlock, count, other.data());
      for (std::size_t i = 0; i < count; ++i) out[i] -= other[i];
    }
    first[b] = block_accum(out.data(), count, false);
    second[b] = block_accum(out.data(), count, true);
  });
  Accum f;
  Accum s;
  for (std::size_t b = 0; b < n_blocks; ++b) {
    f.merge(first[b]);
    s.merge(second[b]);
  }
  MomentEstimate est;
  est.n = cfg.n_samples;
  est.statistic = statistic;
  est.mean = f.mean;
  est.second_moment = s.mean;
  const Accum& sel = statistic == Statistic::mean ? f : s;
  est.std_error = std::sqrt(sel.m2 / (sel.n - 1.0) / sel.n);
  return est;
}

void check_compatible(const Expansion& a, const Expansion& b) {
  if (a.spec.interval.t() != b.spec.interval.t() || a.spec.interval.T() != b.spec.interval.T() ||
      a.spec.i_pattern != b.spec.i_pattern) {
    throw std::invalid_argument("expansions must share the interval and index pattern");
  }
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> ctr,
                                           std::array<std::uint32_t, 2> key) {
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = std::uint64_t{kM0} * ctr[0];
    const std::uint64_t p1 = std::uint64_t{kM1} * ctr[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const auto lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const auto lo1 = static_cast<std::uint32_t>(p1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kW0;
    key[1] += kW1;
  }
  return ctr;
}

std::array<double, 2> gaussian_pair(std::uint64_t seed, std::uint64_t sample, int component,
                                    std::uint32_t block) {
  const std::array<std::uint32_t, 4> ctr = {static_cast<std::uint32_t>(sample),
                                            static_cast<std::uint32_t>(sample >> 32),
                                            static_cast<std::uint32_t>(component), block};
  const std::array<std::uint32_t, 2> key = {static_cast<std::uint32_t>(seed),
                                            static_cast<std::uint32_t>(seed >> 32)};
  return box_muller(philox4x32_10(ctr, key));
}

double zeta_variate(std::uint64_t seed, std::uint64_t sample, int component, int j) {
  if (j < 0) throw std::invalid_argument("zeta index must be nonnegative");
  return gaussian_pair(seed, sample, component, static_cast<std::uint32_t>(j) >> 1)[j & 1];
}

TailVariates tail_variates(std::uint64_t seed, std::uint64_t sample, int component) {
  const auto pr = gaussian_pair(seed, sample, component, kTailBlock);
  return {pr[0], pr[1]};
}

DrawSet draw_set(std::uint64_t seed, int components, int max_j, std::optional<int> tail_q,
                 std::uint64_t sample) {
  if (max_j < 0) throw std::invalid_argument("max_j must be nonnegative");
  if (components < 0) throw std::invalid_argument("components must be nonnegative");
  DrawSet d(seed);
  for (int i = 1; i <= components; ++i) {
    for (int j = 0; j <= max_j; ++j) d.set_zeta(i, j, zeta_variate(seed, sample, i, j));
    if (tail_q) d.set_tail(i, tail_variates(seed, sample, i));
  }
  return d;
}

MomentEstimate mc_moment(const Expansion& e, const StreamConfig& cfg, Statistic statistic) {
  SlotTable slots;
  std::vector<kernels::MonomialProgram> progs{compile(e, slots)};
  return run_moment(slots, progs, cfg, statistic);
}

MomentEstimate mc_moment(const Expansion& a, const Expansion& b, const StreamConfig& cfg,
                         Statistic statistic) {
  check_compatible(a, b);
  SlotTable slots;
  std::vector<kernels::MonomialProgram> progs{compile(a, slots), compile(b, slots)};
  return run_moment(slots, progs, cfg, statistic);
}

MomentEstimate mc_moment_trig(TrigIntegral which, int q, const Interval& iv,
                              const std::vector<int>& components, const StreamConfig& cfg,
                              Statistic statistic) {
  SlotTable slots;
  std::vector<kernels::MonomialProgram> progs{trig_program(which, q, iv, components, slots)};
  return run_moment(slots, progs, cfg, statistic);
}

std::vector<std::vector<double>> realize(const std::vector<Expansion>& expansions,
                                         const StreamConfig& cfg) {
  SlotTable slots;
  std::vector<kernels::MonomialProgram> progs;
  for (const auto& e : expansions) progs.push_back(compile(e, slots));
  const VariateSource source(slots, cfg.seed);
  const std::size_t n = static_cast<std::size_t>(cfg.n_samples);
  std::vector<std::vector<double>> rows(n, std::vector<double>(expansions.size()));
  const std::size_t n_blocks = (n + kBlock - 1) / kBlock;
  detail::parallel_for(n_blocks, cfg.workers, [&](std::size_t b) {
    const std::size_t start = b * kBlock;
    const std::size_t count = std::min(kBlock, n - start);
    std::vector<double> z(std::max<std::size_t>(slots.size(), 1) * kBlock);
    source.fill(start, count, kBlock, z.data());
    std::vector<double> out(kBlock);
    for (std::size_t c = 0; c < progs.size(); ++c) {
      kernels::eval_program(progs[c], z.data(), kBlock, count, out.data());
      for (std::size_t r = 0; r < count; ++r) rows[start + r][c] = out[r];
    }
  });
  return rows;
}

}  // namespace stochint
