#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "flatjet/multiindex.hpp"

namespace flatjet {

// Point in R^n, n <= 4. Register-sized so jet construction stays cheap in the
// grid-evaluation hot path.
struct Point {
  std::array<double, kMaxDim> x{0, 0, 0, 0};
  int n = 0;

  Point() = default;
  Point(std::initializer_list<double> v) : n(static_cast<int>(v.size())) {
    if (n < 1 || n > kMaxDim) throw std::invalid_argument("Point: dim out of range");
    int j = 0;
    for (double t : v) x[j++] = t;
  }
  explicit Point(const std::vector<double>& v) : n(static_cast<int>(v.size())) {
    if (n < 1 || n > kMaxDim) throw std::invalid_argument("Point: dim out of range");
    for (int j = 0; j < n; ++j) x[j] = v[j];
  }
  static Point zero(int dim) {
    Point p;
    p.n = dim;
    return p;
  }

  int dim() const { return n; }
  double operator[](int j) const { return x[j]; }
  double& operator[](int j) { return x[j]; }

  std::vector<double> to_vector() const { return std::vector<double>(x.begin(), x.begin() + n); }

  bool operator==(const Point& b) const {
    if (n != b.n) return false;
    for (int j = 0; j < n; ++j)
      if (x[j] != b.x[j]) return false;
    return true;
  }
};

inline Point sub(const Point& a, const Point& b) {
  Point r = a;
  for (int j = 0; j < a.n; ++j) r.x[j] = a.x[j] - b.x[j];
  return r;
}

inline double dist(const Point& a, const Point& b) {
  double s = 0;
  for (int j = 0; j < a.n; ++j) {
    double d = a.x[j] - b.x[j];
    s += d * d;
  }
  return std::sqrt(s);
}

inline double mi_pow(const Point& dx, const MultiIndex& a) {
  double r = 1.0;
  for (int j = 0; j < a.n; ++j)
    for (int k = 0; k < a.e[j]; ++k) r *= dx.x[j];
  return r;
}

// Taylor-coefficient jet: coeffs[alpha] stores the |alpha|-th partial
// derivative at the basepoint. Sparse, kept sorted in canonical order, missing
// keys are zero. Treat as immutable after construction; every operation below
// returns a fresh jet.
struct Jet {
  Point basepoint;
  int degree = 0;
  std::vector<std::pair<MultiIndex, double>> coeffs;  // sorted by grlex_less

  int dim() const { return basepoint.dim(); }

  double coeff(const MultiIndex& a) const {
    auto it = std::lower_bound(coeffs.begin(), coeffs.end(), a,
                               [](const auto& p, const MultiIndex& k) { return grlex_less(p.first, k); });
    if (it != coeffs.end() && it->first == a) return it->second;
    return 0.0;
  }

  double value() const { return coeffs.empty() || !coeffs.front().first.is_zero() ? 0.0 : coeffs.front().second; }

  bool all_zero() const {
    for (const auto& [a, c] : coeffs)
      if (c != 0.0) return false;
    return true;
  }
};

class JetBuilder {
 public:
  JetBuilder(Point basepoint, int degree) {
    if (degree < 0 || degree > kMaxOrder) throw std::invalid_argument("Jet: degree out of range");
    jet_.basepoint = basepoint;
    jet_.degree = degree;
  }

  JetBuilder& set(const MultiIndex& a, double c) {
    if (a.dim() != jet_.dim()) throw std::invalid_argument("Jet: multi-index dim mismatch");
    if (a.order() > jet_.degree) throw std::invalid_argument("Jet: coefficient order exceeds degree");
    entries_.emplace_back(a, c);
    return *this;
  }

  JetBuilder& add(const MultiIndex& a, double c) {
    // merged additively in build()
    return set(a, c);
  }

  Jet build() {
    std::sort(entries_.begin(), entries_.end(),
              [](const auto& p, const auto& q) { return grlex_less(p.first, q.first); });
    jet_.coeffs.clear();
    for (const auto& [a, c] : entries_) {
      if (!jet_.coeffs.empty() && jet_.coeffs.back().first == a)
        jet_.coeffs.back().second += c;
      else
        jet_.coeffs.emplace_back(a, c);
    }
    return std::move(jet_);
  }

 private:
  Jet jet_;
  std::vector<std::pair<MultiIndex, double>> entries_;
};

inline Jet zero_jet(Point basepoint, int degree) { return JetBuilder(basepoint, degree).build(); }

inline Jet constant_jet(Point basepoint, int degree, double c) {
  return JetBuilder(basepoint, degree).set(MultiIndex(basepoint.dim()), c).build();
}

// Polynomial evaluation: sum of coeff * (x-x0)^alpha / alpha!.
double jet_eval(const Jet& P, const Point& x);

// Jet of the derivative d^beta P, degree drops by |beta|.
Jet jet_derivative(const Jet& P, const MultiIndex& beta);

// Same polynomial re-expanded around a new basepoint. Exact.
Jet jet_recenter(const Jet& P, const Point& y);

// Euclidean norm of the order-m coefficient block at the basepoint.
double grad_norm(const Jet& P, int m);

// Product of the two polynomials truncated to min of the degrees, as a jet at
// the shared basepoint (Leibniz rule).
Jet jet_multiply(const Jet& P, const Jet& Q);

Jet jet_add(const Jet& P, const Jet& Q);
Jet jet_scale(const Jet& P, double c);

// Same data viewed at another degree: truncates, or zero-pads (valid when the
// source is an exact polynomial jet, whose higher derivatives vanish).
Jet jet_with_degree(const Jet& P, int degree);

// Whitney field: one jet per point of a finite set, all of equal dimension
// and degree, points pairwise distinct.
struct WhitneyField {
  std::vector<std::pair<Point, Jet>> entries;

  int dim() const { return entries.empty() ? 0 : entries.front().first.dim(); }
  int degree() const { return entries.empty() ? 0 : entries.front().second.degree; }
  std::size_t size() const { return entries.size(); }
};

WhitneyField make_field(std::vector<std::pair<Point, Jet>> entries);

}  // namespace flatjet
