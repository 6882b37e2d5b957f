#pragma once

#include <cstdint>
#include <optional>

#include "flatjet/norms.hpp"
#include "flatjet/smoothness.hpp"

namespace flatjet {

// gamma_member with the value pinned to f(x0) (tolerance 1e-12 relative).
bool gamma_f_member(const Jet& P, const GammaSpec& spec, double f_value, const Smoothness& sm);

// ---- minimal-level interpolation (the surrogate norm) ----

// Smallest level M certified by an explicit jet field P with P_x(x) = f(x):
// the level of a field is the max over
//   values f(x); block norms |grad^m P_x(x)|; flatness ratios at each point;
//   pair ratios |grad^m (P_x - P_y)(y)| / |x-y|^(s-m)  (all m <= floor_s).
// Found by bisection on M over convex feasibility subproblems solved by
// cyclic projection; the returned value is the exact level of the best
// feasible field found, an upper bound on the true minimum.
struct SurrogateOptions {
  int max_bisect = 40;
  double rel_tol = 1e-3;
  int sweeps = 500;
  double feas_tol = 1e-9;
};

struct SurrogateResult {
  double value = 0.0;
  WhitneyField field;  // certificate attaining `value`
};

SurrogateResult surrogate_local_norm(const std::vector<Point>& S, const std::vector<double>& f,
                                     const Smoothness& sm, const SurrogateOptions& opts = {},
                                     const WhitneyField* warm_start = nullptr);

// Exact level of a given candidate field under the constraint catalog above.
double field_level(const WhitneyField& field, const std::vector<double>& f, const Smoothness& sm);

// ---- finiteness scan ----

struct FinitenessReport {
  int k = 0;        // subset size bound used
  int dim_p = 0;    // polynomial space dimension C(n+floor_s, n)
  std::int64_t subsets = 0;
  double local_max = 0.0;
  double global = 0.0;
  double ratio = 1.0;
  double c_cap = 0.0;
  bool violation = false;
};

// Compares the full-set surrogate against the max over subsets of size <= k
// (default k = 2^dim_p). The global certificate restricts to every subset, so
// local_max <= global holds by construction; ratio = global / local_max.
FinitenessReport finiteness_scan(const std::vector<Point>& E, const std::vector<double>& f, const Smoothness& sm,
                                 int k = 0, double c_cap = 100.0, const SurrogateOptions& opts = {},
                                 Exec exec = Exec::parallel);

// ---- convexity fuzzer ----

// Random verified witnesses of the blending inequality: P1, P2 in the cone at
// level M with |grad^m (P1-P2)(x0)| <= M delta^(s-m), Q1^2 + Q2^2 with unit
// jet and |grad^m Q_j(x0)| <= delta^-m; measures the smallest C with
// Q1^2 P1 + Q2^2 P2 in the cone at level C*M.
struct ConvexityWitness {
  double f = 0, M = 0, delta = 0;
  Jet P1, P2, Q1, Q2, P;
  double measured_C = 0;
};

struct ConvexityReport {
  int n = 0;
  double s = 0;
  std::uint64_t seed = 0;
  int trials = 0;
  std::int64_t rejections = 0;
  double max_C = 0.0;
  ConvexityWitness worst;  // witness attaining max_C
};

ConvexityReport fuzz_whitney_convexity(int n, const Smoothness& sm, int trials, std::uint64_t seed);

// Re-check every hypothesis and the measured conclusion of a witness from
// scratch; the fuzzer only emits witnesses for which this holds.
bool verify_convexity_witness(const ConvexityWitness& w, const Smoothness& sm, double tol = 1e-9);

}  // namespace flatjet
