#pragma once

#include <cstdint>

#include "flatjet/jet.hpp"
#include "flatjet/oracle.hpp"
#include "flatjet/parallel.hpp"
#include "flatjet/smoothness.hpp"

namespace flatjet {

// Uniform sample grid: counts[j] points per axis, endpoints included
// (a single point sits at the box center). Row-major with axis 0 fastest.
struct GridSpec {
  Box box;
  std::vector<int> counts;

  int dim() const { return box.dim(); }
  std::int64_t total() const;
  Point point(std::int64_t i) const;

  static GridSpec uniform(const Box& box, int per_axis);
};

// Sampled lower-bound estimates of the smoothness quantities of one function:
//   sup_derivs  max over grid x and orders 0..floor_s of |grad^m F(x)|
//   holder      max over sampled pairs of |grad^fl F(x)-grad^fl F(y)| / |x-y|^sigma
//   flat        max over grid x and orders 1..floor_s of the flatness ratio
//               (|grad^m F(x)|^s / F(x)^(s-m))^(1/m), 0/0 = 0, pos/0 = inf
//   cs = sup_derivs + holder, fs = cs + flat.
struct NormReport {
  double sup_derivs = 0;
  double holder = 0;
  double flat = 0;
  double cs = 0;
  double fs = 0;
  std::int64_t samples = 0;
  std::int64_t pairs = 0;
};

inline constexpr std::int64_t kPairCap = 100000;

NormReport sampled_norms(const JetOracle& F, const GridSpec& grid, const Smoothness& sm,
                         Exec exec = Exec::parallel, std::int64_t pair_cap = kPairCap);

// Smallest sampled value (nonnegativity scans).
double sampled_min_value(const JetOracle& F, const GridSpec& grid, Exec exec = Exec::parallel);

// Deterministic pair sample: all pairs when they fit the cap, otherwise
// axis-adjacent pairs plus two strided long-range families, thinned to budget.
std::vector<std::pair<std::int64_t, std::int64_t>> sample_pairs(const GridSpec& grid, std::int64_t cap);

// Exact jet-level norms of a finite Whitney field.
// cs: max of |grad^m P_x(x)| over x and m < s, plus the pair seminorm
//     max over x != y, m < s of |grad^m (P_x - P_y)(y)| / |x-y|^(s-m).
double whitney_field_cs_norm(const WhitneyField& field, const Smoothness& sm);

// flat: max over x, 1 <= m < s of (|grad^m P_x(x)|^s / P_x(x)^(s-m))^(1/m);
// 0 when s <= 1; negative values are a domain error; pos/0 = inf.
double whitney_field_flat_norm(const WhitneyField& field, const Smoothness& sm);

inline double whitney_field_fs_norm(const WhitneyField& field, const Smoothness& sm) {
  return whitney_field_cs_norm(field, sm) + whitney_field_flat_norm(field, sm);
}

// Nonnegative-cone membership data: basepoint and bound.
struct GammaSpec {
  Point x0;
  double M;
};

// max over 0 <= m <= floor_s of |grad^m P(x0)|.
double gamma_sup_part(const Jet& P, const Smoothness& sm);

// max over 1 <= m <= floor_s of the flatness ratio at the basepoint.
// P(x0) < 0 is a domain error.
double gamma_flat_part(const Jet& P, const Smoothness& sm);

// P(x0) >= 0, both parts <= M. P must be based at spec.x0.
bool gamma_member(const Jet& P, const GammaSpec& spec, const Smoothness& sm);

// Bound constant for the local-constancy estimate: the largest c <= 1 with
//   monomial_count(n, floor_s) * sum_{k=1..floor_s} n^(k/2) c^k / k!  <=  eps,
// found by bisection.
double c0_constant(int n, const Smoothness& sm, double eps);

// Radius within which a nonnegative flat jet moves by at most eps relative to
// its basepoint value: c0 * (P(x0)/M_flat)^(1/s) with M_flat the flat part.
// 0 at zero value, +inf for jets with vanishing flat part (constants).
double flat_lengthscale(const Jet& P, const Smoothness& sm, double eps);

// Sampled two-sided check of the flatness-vs-Holder bound for 1 < s <= 2:
// returns {measured flat seminorm, (2^s / s) * sampled Holder seminorm}.
std::pair<double, double> prop_c2_bound_check(const JetOracle& F, const GridSpec& grid, const Smoothness& sm,
                                              Exec exec = Exec::parallel);

}  // namespace flatjet
