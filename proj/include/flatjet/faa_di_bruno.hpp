#pragma once

#include <functional>

#include "flatjet/jet.hpp"
#include "flatjet/oracle.hpp"

namespace flatjet {

// One partition of a multi-index: nonzero parts, non-increasing in the
// canonical order (so each multiset appears exactly once).
using Partition = std::vector<MultiIndex>;

// All multiset partitions of alpha into nonzero multi-indices. For n=1 the
// count is the integer partition number of alpha[0].
std::vector<Partition> enumerate_partitions(const MultiIndex& alpha);

// Number of set partitions of |alpha| labeled slots that collapse to the
// multiset pi: alpha! / (prod_beta beta! * prod multiplicities!). Exact (the
// counts stay far below 2^53 for orders <= 8).
double partition_weight(const MultiIndex& alpha, const Partition& pi);

struct WeightedPartition {
  Partition parts;
  double weight = 1.0;
};

// Cached partitions+weights for every multi-index of enumerate_multiindices
// (n, degree), in that order. Built once per (n, degree).
const std::vector<std::vector<WeightedPartition>>& partition_table(int n, int degree);

// k -> h^(k)(F(x)) for the outer function, k = 0..|alpha|.
using OuterDerivs = std::function<double(int)>;

// d^alpha (h o F)(x) from the jet of F at x:
//   sum over partitions pi of alpha of
//     weight(pi) * h^(|pi|)(F(x)) * prod_{beta in pi} d^beta F(x).
// alpha = 0 returns h(F(x)).
double faa_di_bruno(const Jet& F_at_x, const OuterDerivs& h, const MultiIndex& alpha);

double faa_di_bruno(const JetOracle& F, const OuterDerivs& h, const Point& x, const MultiIndex& alpha);

// Jet of h o F at the basepoint of F_at_x, same degree.
Jet compose_jet(const Jet& F_at_x, const OuterDerivs& h);

// Jet of F^r. Outer derivatives h^(k)(v) = r(r-1)...(r-k+1) v^(r-k); terms are
// assembled in log-magnitude form when v is tiny so flat data near zeros does
// not overflow. Values below 1e-300 count as zero: the zero jet maps to the
// zero jet, and a zero value with nonvanishing higher coefficients is an error
// (the power has no jet there).
Jet power_jet(const Jet& F_at_x, double r);

// Jet of 1/S; S must have nonzero value.
Jet reciprocal_jet(const Jet& S_at_x);

}  // namespace flatjet
