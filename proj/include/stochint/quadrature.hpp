#pragma once

#include <vector>

namespace stochint {

struct GaussRule {
  std::vector<double> nodes;    // on [-1, 1], ascending
  std::vector<double> weights;
};

// n-point Gauss-Legendre rule; nodes by Newton iteration on P_n.
// Rules are cached, so repeated calls are cheap and thread-safe.
const GaussRule& gauss_legendre(int n);

}  // namespace stochint
