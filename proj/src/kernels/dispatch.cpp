#include <cstdlib>
#include <cstring>
#include <stdexcept>

#include "stochint/kernels.hpp"

namespace stochint::kernels {

void MonomialProgram::add(double c, std::span<const std::uint32_t> s) {
  coef.push_back(c);
  slots.insert(slots.end(), s.begin(), s.end());
  start.push_back(static_cast<std::uint32_t>(slots.size()));
}

bool avx2_available() {
#if defined(__x86_64__) || defined(__i386__)
  static const bool ok = __builtin_cpu_supports("avx2");
  return ok;
#else
  return false;
#endif
}

Isa active_isa() {
  static const Isa isa = [] {
    const char* env = std::getenv("STOCHINT_ISA");
    if (env && std::strcmp(env, "scalar") == 0) return Isa::scalar;
    return avx2_available() ? Isa::avx2 : Isa::scalar;
  }();
  return isa;
}

const char* isa_name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

namespace {
void require(Isa isa) {
  if (isa == Isa::avx2 && !avx2_available()) throw std::runtime_error("AVX2 not supported by this CPU");
}
}  // namespace

void eval_program(const MonomialProgram& prog, const double* z, std::size_t stride, std::size_t n,
                  double* out, Isa isa) {
  require(isa);
  if (isa == Isa::avx2) {
    avx2::eval_program(prog, z, stride, n, out);
  } else {
    scalar::eval_program(prog, z, stride, n, out);
  }
}

double dot(std::span<const double> a, std::span<const double> b, Isa isa) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: length mismatch");
  require(isa);
  return isa == Isa::avx2 ? avx2::dot(a.data(), b.data(), a.size())
                          : scalar::dot(a.data(), b.data(), a.size());
}

double sum_squares(std::span<const double> a, Isa isa) {
  require(isa);
  return isa == Isa::avx2 ? avx2::sum_squares(a.data(), a.size())
                          : scalar::sum_squares(a.data(), a.size());
}

}  // namespace stochint::kernels
