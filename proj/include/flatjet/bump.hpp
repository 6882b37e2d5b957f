#pragma once

#include "flatjet/jet.hpp"

namespace flatjet {

// m-th derivative of the model bump g(t) = exp(1 - 1/(1-t^2)) on (-1,1), 0
// outside. g^(m) = q_m * g with q_m = p_m(t)/(1-t^2)^(2m); the integer
// polynomials p_m are built once from the recurrence
//   p_{m+1} = p_m' * u^2 + 4m t p_m u - 2 t p_m,   u = 1 - t^2.
// Values are clamped to 0 for |t| >= 1 - 1e-12.
double bump_g(double t, int m);

// m-th derivative of the plateau cutoff: identically 1 on [-1/2,1/2],
// identically 0 outside (-1,1), smooth monotone shoulders built from the
// smoothstep a(t)/(a(t)+a(1-t)) with a(t) = exp(-1/t).
double plateau(double t, int m);

// Tensor bumps on R^n with support [-1,1]^n: partial derivative d^alpha at x.
double phi0(const Point& x, const MultiIndex& alpha);

// Full jet of a tensor bump rescaled to the cube center+[-radius,radius]^n,
// i.e. of x -> phi0((x-center)/radius), at the point x.
// plateau_variant selects the plateau cutoff instead of the model bump.
Jet scaled_bump_jet(const Point& center, double radius, const Point& x, int degree, bool plateau_variant = false);

inline double scaled_bump_value(const Point& center, double radius, const Point& x, bool plateau_variant = false) {
  double v = 1.0;
  for (int j = 0; j < x.dim(); ++j) {
    double t = (x[j] - center[j]) / radius;
    v *= plateau_variant ? plateau(t, 0) : bump_g(t, 0);
    if (v == 0.0) return 0.0;
  }
  return v;
}

}  // namespace flatjet
