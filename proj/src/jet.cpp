#include "flatjet/jet.hpp"

namespace flatjet {

double jet_eval(const Jet& P, const Point& x) {
  Point dx = sub(x, P.basepoint);
  double s = 0.0;
  for (const auto& [a, c] : P.coeffs) s += c * mi_pow(dx, a) / mi_factorial(a);
  return s;
}

Jet jet_derivative(const Jet& P, const MultiIndex& beta) {
  if (beta.dim() != P.dim()) throw std::invalid_argument("jet_derivative: dim mismatch");
  if (beta.order() > P.degree) throw std::invalid_argument("jet_derivative: order exceeds jet degree");
  JetBuilder b(P.basepoint, P.degree - beta.order());
  MultiIndex rest;
  for (const auto& [a, c] : P.coeffs)
    if (a.minus(beta, rest)) b.set(rest, c);
  return b.build();
}

Jet jet_recenter(const Jet& P, const Point& y) {
  if (y.dim() != P.dim()) throw std::invalid_argument("jet_recenter: dim mismatch");
  Point dy = sub(y, P.basepoint);
  JetBuilder b(y, P.degree);
  // d^beta P(y) = sum_gamma coeff(beta+gamma) * dy^gamma / gamma!
  for (const MultiIndex& beta : enumerate_multiindices(P.dim(), P.degree)) {
    double v = 0.0;
    MultiIndex gamma;
    for (const auto& [a, c] : P.coeffs)
      if (a.minus(beta, gamma)) v += c * mi_pow(dy, gamma) / mi_factorial(gamma);
    if (v != 0.0) b.set(beta, v);
  }
  return b.build();
}

double grad_norm(const Jet& P, int m) {
  if (m < 0 || m > P.degree) throw std::invalid_argument("grad_norm: order out of range");
  double s = 0.0;
  for (const auto& [a, c] : P.coeffs)
    if (a.order() == m) s += c * c;
  return std::sqrt(s);
}

Jet jet_multiply(const Jet& P, const Jet& Q) {
  if (!(P.basepoint == Q.basepoint)) throw std::invalid_argument("jet_multiply: basepoint mismatch");
  int deg = std::min(P.degree, Q.degree);
  JetBuilder b(P.basepoint, deg);
  MultiIndex rest;
  for (const auto& [ap, cp] : P.coeffs) {
    if (cp == 0.0) continue;
    for (const auto& [aq, cq] : Q.coeffs) {
      if (cq == 0.0) continue;
      if (ap.order() + aq.order() > deg) continue;
      MultiIndex a = ap.plus(aq);
      // Leibniz: C(a, ap) * d^ap P * d^aq Q contributes to d^a (PQ).
      b.add(a, mi_binomial(a, ap) * cp * cq);
    }
  }
  return b.build();
}

Jet jet_add(const Jet& P, const Jet& Q) {
  if (!(P.basepoint == Q.basepoint) || P.degree != Q.degree) throw std::invalid_argument("jet_add: shape mismatch");
  JetBuilder b(P.basepoint, P.degree);
  for (const auto& [a, c] : P.coeffs) b.add(a, c);
  for (const auto& [a, c] : Q.coeffs) b.add(a, c);
  return b.build();
}

Jet jet_scale(const Jet& P, double c) {
  JetBuilder b(P.basepoint, P.degree);
  for (const auto& [a, v] : P.coeffs) b.set(a, c * v);
  return b.build();
}

Jet jet_with_degree(const Jet& P, int degree) {
  if (degree == P.degree) return P;
  JetBuilder b(P.basepoint, degree);
  for (const auto& [a, v] : P.coeffs)
    if (a.order() <= degree) b.set(a, v);
  return b.build();
}

WhitneyField make_field(std::vector<std::pair<Point, Jet>> entries) {
  WhitneyField f;
  f.entries = std::move(entries);
  for (std::size_t i = 0; i < f.entries.size(); ++i) {
    const auto& [p, jet] = f.entries[i];
    if (!(jet.basepoint == p)) throw std::invalid_argument("WhitneyField: jet basepoint differs from its point");
    if (p.dim() != f.dim() || jet.degree != f.degree())
      throw std::invalid_argument("WhitneyField: inconsistent dimension or degree");
    for (std::size_t k = 0; k < i; ++k)
      if (f.entries[k].first == p) throw std::invalid_argument("WhitneyField: duplicate point");
  }
  return f;
}

}  // namespace flatjet
