#include "flatjet/bump.hpp"

#include <cmath>

namespace flatjet {

namespace {

using Poly = std::vector<long long>;  // coefficients by ascending power

Poly poly_derivative(const Poly& p) {
  Poly d;
  for (std::size_t k = 1; k < p.size(); ++k) d.push_back(static_cast<long long>(k) * p[k]);
  return d;
}

Poly poly_mul(const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  return r;
}

Poly poly_add(Poly a, const Poly& b) {
  if (b.size() > a.size()) a.resize(b.size(), 0);
  for (std::size_t i = 0; i < b.size(); ++i) a[i] += b[i];
  return a;
}

double poly_eval(const Poly& p, double t) {
  double r = 0.0;
  for (std::size_t k = p.size(); k-- > 0;) r = r * t + static_cast<double>(p[k]);
  return r;
}

// p_m tables for g; p_m / (1-t^2)^(2m) = q_m. Coefficients stay well below
// 2^53 for m <= 8 (checked in tests against finite differences).
const std::vector<Poly>& g_tables() {
  static const std::vector<Poly> tables = [] {
    std::vector<Poly> t;
    t.push_back({1});
    const Poly u = {1, 0, -1};      // 1 - t^2
    const Poly uu = poly_mul(u, u);
    for (int m = 0; m < kMaxOrder; ++m) {
      Poly next = poly_mul(poly_derivative(t[m]), uu);
      next = poly_add(next, poly_mul(poly_mul({0, 4LL * m}, t[m]), u));
      next = poly_add(next, poly_mul({0, -2}, t[m]));
      t.push_back(next);
    }
    return t;
  }();
  return tables;
}

// rho_m tables for a(t) = exp(-1/t): a^(m) = rho_m(1/t) * a, with
// rho_{m+1}(v) = v^2 (rho_m(v) - rho_m'(v)).
const std::vector<Poly>& a_tables() {
  static const std::vector<Poly> tables = [] {
    std::vector<Poly> t;
    t.push_back({1});
    for (int m = 0; m < kMaxOrder; ++m) {
      Poly d = poly_derivative(t[m]);
      Poly body = t[m];
      for (std::size_t k = 0; k < d.size(); ++k) body[k] -= d[k];
      t.push_back(poly_mul({0, 0, 1}, body));
    }
    return t;
  }();
  return tables;
}

// Derivatives 0..deg of a(t) = exp(-1/t) at t (t > 0), zeros for t <= 0 or
// when a underflows past double range.
void a_derivs(double t, int deg, double* out) {
  if (t <= 0.0 || 1.0 / t > 700.0) {
    for (int m = 0; m <= deg; ++m) out[m] = 0.0;
    return;
  }
  double v = 1.0 / t;
  double a = std::exp(-v);
  for (int m = 0; m <= deg; ++m) out[m] = poly_eval(a_tables()[m], v) * a;
}

// Derivatives 0..deg of the smoothstep sigma = a(t)/(a(t)+a(1-t)) at t.
// Scalar jet arithmetic: Leibniz for the product, recursive reciprocal.
void smoothstep_derivs(double t, int deg, double* out) {
  if (t <= 0.0) {
    for (int m = 0; m <= deg; ++m) out[m] = 0.0;
    return;
  }
  if (t >= 1.0) {
    out[0] = 1.0;
    for (int m = 1; m <= deg; ++m) out[m] = 0.0;
    return;
  }
  double a[kMaxOrder + 1], b[kMaxOrder + 1], den[kMaxOrder + 1], rec[kMaxOrder + 1];
  a_derivs(t, deg, a);
  a_derivs(1.0 - t, deg, b);
  for (int m = 0; m <= deg; ++m) den[m] = a[m] + (m % 2 ? -b[m] : b[m]);
  // den[0] >= exp(-2) on (0,1) since max(a(t), a(1-t)) >= a(1/2)
  rec[0] = 1.0 / den[0];
  for (int m = 1; m <= deg; ++m) {
    double s = 0.0;
    for (int j = 1; j <= m; ++j) s += static_cast<double>(binomial(m, j)) * den[j] * rec[m - j];
    rec[m] = -s / den[0];
  }
  for (int m = 0; m <= deg; ++m) {
    double s = 0.0;
    for (int j = 0; j <= m; ++j) s += static_cast<double>(binomial(m, j)) * a[j] * rec[m - j];
    out[m] = s;
  }
}

}  // namespace

double bump_g(double t, int m) {
  if (m < 0 || m > kMaxOrder) throw std::invalid_argument("bump_g: order out of range");
  if (std::abs(t) >= 1.0 - 1e-12) return 0.0;
  double u = 1.0 - t * t;
  // p_m(t) * exp(1 - 1/u) / u^(2m), combined in the exponent so neither
  // factor overflows on its own near the support boundary.
  return poly_eval(g_tables()[m], t) * std::exp(1.0 - 1.0 / u - 2.0 * m * std::log(u));
}

double plateau(double t, int m) {
  if (m < 0 || m > kMaxOrder) throw std::invalid_argument("plateau: order out of range");
  double at = std::abs(t);
  if (at >= 1.0) return 0.0;
  if (at <= 0.5) return m == 0 ? 1.0 : 0.0;
  // shoulder: plateau(t) = sigma(2 - 2|t|); chain rule brings (-2 sign(t))^m
  double d[kMaxOrder + 1];
  smoothstep_derivs(2.0 - 2.0 * at, m, d);
  double chain = 1.0;
  for (int k = 0; k < m; ++k) chain *= (t > 0.0 ? -2.0 : 2.0);
  return chain * d[m];
}

double phi0(const Point& x, const MultiIndex& alpha) {
  if (alpha.dim() != x.dim()) throw std::invalid_argument("phi0: dim mismatch");
  double v = 1.0;
  for (int j = 0; j < x.dim(); ++j) {
    v *= bump_g(x[j], alpha[j]);
    if (v == 0.0) return 0.0;
  }
  return v;
}

Jet scaled_bump_jet(const Point& center, double radius, const Point& x, int degree, bool plateau_variant) {
  if (!(radius > 0.0)) throw std::invalid_argument("scaled_bump_jet: radius must be positive");
  int n = x.dim();
  // per-axis derivative stacks, already including the 1/radius chain factors
  double d[kMaxDim][kMaxOrder + 1];
  for (int j = 0; j < n; ++j) {
    double t = (x[j] - center[j]) / radius;
    double f = 1.0;
    for (int m = 0; m <= degree; ++m) {
      d[j][m] = (plateau_variant ? plateau(t, m) : bump_g(t, m)) * f;
      f /= radius;
    }
  }
  JetBuilder b(x, degree);
  for (const MultiIndex& a : enumerate_multiindices(n, degree)) {
    double v = 1.0;
    for (int j = 0; j < n; ++j) v *= d[j][a[j]];
    if (v != 0.0) b.set(a, v);
  }
  return b.build();
}

}  // namespace flatjet
