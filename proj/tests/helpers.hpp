#pragma once

// Test-side reference implementations, kept deliberately independent of the
// library's algorithms: dense polynomial algebra over a monomial map, tensor
// central differences, and classical combinatorial sequences via DP.

#include <cmath>
#include <functional>
#include <map>
#include <random>
#include <vector>

#include "flatjet/jet.hpp"

namespace testref {

using flatjet::GrlexLess;
using flatjet::Jet;
using flatjet::MultiIndex;
using flatjet::Point;

struct Rng {
  std::mt19937_64 g;
  explicit Rng(std::uint64_t seed) : g(seed) {}
  double u01() { return static_cast<double>(g() >> 11) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * u01(); }
  int index(int n) { return static_cast<int>(g() % static_cast<std::uint64_t>(n)); }
};

// dense polynomial: monomial exponent -> coefficient (monomial basis, not
// Taylor: p(x) = sum c_a x^a)
using Poly = std::map<MultiIndex, double, GrlexLess>;

inline Poly poly_from_jet(const Jet& J) {
  // Taylor polynomial around the basepoint, re-expanded in powers of x
  Poly shifted;  // powers of (x - x0)
  for (const auto& [a, c] : J.coeffs)
    if (c != 0.0) shifted[a] += c / flatjet::mi_factorial(a);
  // expand each (x - x0)^a by the binomial theorem, axis by axis
  Poly out;
  for (const auto& [a, c] : shifted) {
    Poly term;
    term[MultiIndex(J.dim())] = c;
    for (int j = 0; j < J.dim(); ++j) {
      Poly next;
      for (int k = 0; k <= a[j]; ++k) {
        double bin = flatjet::binomial(a[j], k) * std::pow(-J.basepoint[j], a[j] - k);
        for (const auto& [b, cb] : term) {
          MultiIndex nb = b;
          nb.e[j] = static_cast<std::int8_t>(k);
          next[nb] += cb * bin;
        }
      }
      term = std::move(next);
    }
    for (const auto& [b, cb] : term) out[b] += cb;
  }
  return out;
}

inline Poly poly_mul(const Poly& p, const Poly& q) {
  Poly out;
  for (const auto& [a, ca] : p)
    for (const auto& [b, cb] : q) {
      MultiIndex s = a;
      for (int j = 0; j < a.dim(); ++j) s.e[j] = static_cast<std::int8_t>(a[j] + b[j]);
      out[s] += ca * cb;
    }
  return out;
}

inline double poly_eval(const Poly& p, const Point& x) {
  double acc = 0.0;
  for (const auto& [a, c] : p) {
    double t = c;
    for (int j = 0; j < x.dim(); ++j)
      for (int k = 0; k < a[j]; ++k) t *= x[j];
    acc += t;
  }
  return acc;
}

// d^alpha p evaluated at x (falling factorials on exponents)
inline double poly_derivative_at(const Poly& p, const MultiIndex& alpha, const Point& x) {
  double acc = 0.0;
  for (const auto& [a, c] : p) {
    double t = c;
    bool dead = false;
    for (int j = 0; j < x.dim() && !dead; ++j) {
      if (a[j] < alpha[j]) dead = true;
      for (int k = 0; k < alpha[j]; ++k) t *= (a[j] - k);
    }
    if (dead) continue;
    for (int j = 0; j < x.dim(); ++j)
      for (int k = 0; k < a[j] - alpha[j]; ++k) t *= x[j];
    acc += t;
  }
  return acc;
}

// jet of the polynomial at a basepoint, up to degree
inline Jet jet_of_poly(const Poly& p, const Point& bp, int degree) {
  flatjet::JetBuilder b(bp, degree);
  for (const MultiIndex& a : flatjet::enumerate_multiindices(bp.dim(), degree)) {
    double v = poly_derivative_at(p, a, bp);
    if (v != 0.0) b.set(a, v);
  }
  return b.build();
}

// tensor central difference for one mixed partial of a scalar map
inline double fd_mixed(const std::function<double(const Point&)>& f, const Point& x, const MultiIndex& a, double h) {
  int n = x.dim();
  std::vector<int> idx(static_cast<std::size_t>(n), 0);
  double acc = 0.0;
  bool done = false;
  while (!done) {
    double coeff = 1.0;
    Point y = x;
    for (int j = 0; j < n; ++j) {
      int aj = a[j], ij = idx[static_cast<std::size_t>(j)];
      coeff *= ((aj - ij) % 2 ? -1.0 : 1.0) * flatjet::binomial(aj, ij);
      y[j] += (ij - 0.5 * aj) * h;
    }
    acc += coeff * f(y);
    done = true;
    for (int j = 0; j < n; ++j) {
      if (++idx[static_cast<std::size_t>(j)] <= a[j]) {
        done = false;
        break;
      }
      idx[static_cast<std::size_t>(j)] = 0;
    }
  }
  return acc / std::pow(h, a.order());
}

// Richardson pair of central differences: the symmetric stencil has an even
// error series, so (4 D(h/2) - D(h)) / 3 removes the h^2 term exactly.
inline double fd_rich(const std::function<double(const Point&)>& f, const Point& x, const MultiIndex& a, double h) {
  return (4.0 * fd_mixed(f, x, a, 0.5 * h) - fd_mixed(f, x, a, h)) / 3.0;
}

// classical sequences by DP, for cross-checking the combinatorics
inline long long integer_partitions(int m) {
  std::vector<std::vector<long long>> p(static_cast<std::size_t>(m) + 1,
                                        std::vector<long long>(static_cast<std::size_t>(m) + 1, 0));
  for (int k = 0; k <= m; ++k) p[0][static_cast<std::size_t>(k)] = 1;
  for (int v = 1; v <= m; ++v)
    for (int k = 1; k <= m; ++k) {
      p[static_cast<std::size_t>(v)][static_cast<std::size_t>(k)] =
          p[static_cast<std::size_t>(v)][static_cast<std::size_t>(k - 1)] +
          (v >= k ? p[static_cast<std::size_t>(v - k)][static_cast<std::size_t>(k)] : 0);
    }
  return p[static_cast<std::size_t>(m)][static_cast<std::size_t>(m)];
}

inline long long stirling2(int m, int k) {
  if (k < 0 || k > m) return 0;
  std::vector<std::vector<long long>> s(static_cast<std::size_t>(m) + 1,
                                        std::vector<long long>(static_cast<std::size_t>(m) + 1, 0));
  s[0][0] = 1;
  for (int i = 1; i <= m; ++i)
    for (int j = 1; j <= i; ++j)
      s[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          s[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)] +
          j * s[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j)];
  return s[static_cast<std::size_t>(m)][static_cast<std::size_t>(k)];
}

inline long long bell(int m) {
  long long acc = 0;
  for (int k = 0; k <= m; ++k) acc += stirling2(m, k);
  return acc;
}

// random sparse jet with coefficients in [-mag, mag]
inline Jet random_jet(Rng& rng, const Point& bp, int degree, double mag, double keep = 0.8) {
  flatjet::JetBuilder b(bp, degree);
  for (const MultiIndex& a : flatjet::enumerate_multiindices(bp.dim(), degree))
    if (rng.u01() < keep) b.set(a, rng.uniform(-mag, mag));
  return b.build();
}

}  // namespace testref
