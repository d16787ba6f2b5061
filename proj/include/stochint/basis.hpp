#pragma once

#include <string>
#include <string_view>

namespace stochint {

enum class Basis { legendre, trigonometric };

std::string to_string(Basis b);
Basis basis_from_string(std::string_view s);

class Interval {
 public:
  Interval(double t, double T);
  double t() const { return t_; }
  double T() const { return T_; }
  double length() const { return T_ - t_; }

 private:
  double t_;
  double T_;
};

// P_n(x) in double precision by the three-term recurrence.
double legendre_value(int n, double x);

// Orthonormal basis function phi_j on [t, T].
//   legendre:       sqrt((2j+1)/h) P_j(2(s - mid)/h)
//   trigonometric:  phi_0 = 1/sqrt(h), phi_{2r-1} = sqrt(2/h) sin(2 pi r (s-t)/h),
//                   phi_{2r} = sqrt(2/h) cos(2 pi r (s-t)/h)
double basis_eval(Basis basis, int j, double s, const Interval& iv);

// Unchecked variant used inside quadrature loops.
double basis_eval_unchecked(Basis basis, int j, double s, const Interval& iv);

// Integral of phi_j over [t, T]: sqrt(h) for j = 0 and 0 otherwise, in both bases.
double basis_integral(Basis basis, int j, const Interval& iv);

}  // namespace stochint
