#include "stochint/kernels.hpp"

namespace stochint::kernels::scalar {

void eval_program(const MonomialProgram& prog, const double* z, std::size_t stride, std::size_t n,
                  double* out) {
  const std::size_t m_count = prog.coef.size();
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t m = 0; m < m_count; ++m) {
      double prod = prog.coef[m];
      for (std::uint32_t s = prog.start[m]; s < prog.start[m + 1]; ++s) {
        prod *= z[prog.slots[s] * stride + i];
      }
      acc += prod;
    }
    out[i] = acc + prog.constant;
  }
}

double dot(const double* a, const double* b, std::size_t n) {
  double s[4] = {0.0, 0.0, 0.0, 0.0};
  const std::size_t body = n & ~std::size_t{3};
  for (std::size_t i = 0; i < body; i += 4) {
    for (int l = 0; l < 4; ++l) s[l] += a[i + l] * b[i + l];
  }
  double r = (s[0] + s[1]) + (s[2] + s[3]);
  for (std::size_t i = body; i < n; ++i) r += a[i] * b[i];
  return r;
}

double sum_squares(const double* a, std::size_t n) { return dot(a, a, n); }

}  // namespace stochint::kernels::scalar
