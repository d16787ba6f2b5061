#include <immintrin.h>

#include "stochint/kernels.hpp"

namespace stochint::kernels::avx2 {

void eval_program(const MonomialProgram& prog, const double* z, std::size_t stride, std::size_t n,
                  double* out) {
  const std::size_t m_count = prog.coef.size();
  const std::size_t body = n & ~std::size_t{3};
  const __m256d constant = _mm256_set1_pd(prog.constant);
  for (std::size_t i = 0; i < body; i += 4) {
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t m = 0; m < m_count; ++m) {
      __m256d prod = _mm256_set1_pd(prog.coef[m]);
      for (std::uint32_t s = prog.start[m]; s < prog.start[m + 1]; ++s) {
        prod = _mm256_mul_pd(prod, _mm256_loadu_pd(z + prog.slots[s] * stride + i));
      }
      acc = _mm256_add_pd(acc, prod);
    }
    _mm256_storeu_pd(out + i, _mm256_add_pd(acc, constant));
  }
  if (body < n) {
    scalar::eval_program(prog, z + body, stride, n - body, out + body);
  }
}

double dot(const double* a, const double* b, std::size_t n) {
  const std::size_t body = n & ~std::size_t{3};
  __m256d acc = _mm256_setzero_pd();
  for (std::size_t i = 0; i < body; i += 4) {
    acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  }
  alignas(32) double s[4];
  _mm256_store_pd(s, acc);
  double r = (s[0] + s[1]) + (s[2] + s[3]);
  for (std::size_t i = body; i < n; ++i) r += a[i] * b[i];
  return r;
}

double sum_squares(const double* a, std::size_t n) { return dot(a, a, n); }

}  // namespace stochint::kernels::avx2
