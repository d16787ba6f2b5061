#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace stochint::kernels {

// A sum of monomials over slot variates:
//   value = sum_m coef[m] * prod_{s in slots[start[m]..start[m+1])} z[s]  + constant
// Monomials are accumulated left to right; each product starts from coef[m].
struct MonomialProgram {
  std::vector<double> coef;
  std::vector<std::uint32_t> start{0};
  std::vector<std::uint32_t> slots;
  double constant = 0.0;

  std::size_t size() const { return coef.size(); }
  void add(double c, std::span<const std::uint32_t> s);
};

enum class Isa { scalar, avx2 };

bool avx2_available();
// AVX2 when the CPU supports it, unless STOCHINT_ISA=scalar is set.
Isa active_isa();
const char* isa_name(Isa isa);

// Evaluates the program for n samples. Slot s of sample i is z[s * stride + i].
void eval_program(const MonomialProgram& prog, const double* z, std::size_t stride, std::size_t n,
                  double* out, Isa isa = active_isa());

// Reductions use four interleaved partial sums combined as (s0 + s1) + (s2 + s3),
// then the remainder in order; the scalar and AVX2 paths give identical bits.
double dot(std::span<const double> a, std::span<const double> b, Isa isa = active_isa());
double sum_squares(std::span<const double> a, Isa isa = active_isa());

namespace scalar {
void eval_program(const MonomialProgram& prog, const double* z, std::size_t stride, std::size_t n,
                  double* out);
double dot(const double* a, const double* b, std::size_t n);
double sum_squares(const double* a, std::size_t n);
}  // namespace scalar

namespace avx2 {
void eval_program(const MonomialProgram& prog, const double* z, std::size_t stride, std::size_t n,
                  double* out);
double dot(const double* a, const double* b, std::size_t n);
double sum_squares(const double* a, std::size_t n);
}  // namespace avx2

}  // namespace stochint::kernels
