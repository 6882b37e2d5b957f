#include "flatjet/faa_di_bruno.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>

namespace flatjet {

namespace {

// Parts are chosen non-increasing in the canonical order; `bound` is the
// largest part still allowed.
void recurse(const MultiIndex& remaining, const MultiIndex& bound, Partition& acc, std::vector<Partition>& out) {
  if (remaining.is_zero()) {
    out.push_back(acc);
    return;
  }
  // candidate parts: nonzero, componentwise <= remaining, canonically <= bound
  int n = remaining.dim();
  MultiIndex part(n);
  // iterate componentwise counters in descending canonical order by
  // enumerating all candidates and sorting is wasteful; a plain product scan
  // suffices at these sizes (<= 9^4 candidates, degree <= 8).
  std::vector<MultiIndex> candidates;
  std::vector<int> ctr(n, 0);
  while (true) {
    for (int j = 0; j < n; ++j) part.e[j] = static_cast<std::int8_t>(ctr[j]);
    if (!part.is_zero() && !grlex_less(bound, part)) candidates.push_back(part);
    int j = n - 1;
    while (j >= 0 && ctr[j] == remaining[j]) ctr[j--] = 0;
    if (j < 0) break;
    ++ctr[j];
  }
  for (const MultiIndex& c : candidates) {
    MultiIndex rest;
    remaining.minus(c, rest);
    acc.push_back(c);
    recurse(rest, c, acc, out);
    acc.pop_back();
  }
}

double falling_factorial(double r, int k) {
  double f = 1.0;
  for (int j = 0; j < k; ++j) f *= (r - j);
  return f;
}

}  // namespace

std::vector<Partition> enumerate_partitions(const MultiIndex& alpha) {
  std::vector<Partition> out;
  if (alpha.is_zero()) {
    out.push_back({});
    return out;
  }
  Partition acc;
  recurse(alpha, alpha, acc, out);
  return out;
}

double partition_weight(const MultiIndex& alpha, const Partition& pi) {
  double w = mi_factorial(alpha);
  for (const MultiIndex& beta : pi) w /= mi_factorial(beta);
  // parts are sorted, identical ones are adjacent
  std::size_t i = 0;
  while (i < pi.size()) {
    std::size_t j = i;
    while (j < pi.size() && pi[j] == pi[i]) ++j;
    w /= factorial(static_cast<int>(j - i));
    i = j;
  }
  return w;
}

double faa_di_bruno(const Jet& F_at_x, const OuterDerivs& h, const MultiIndex& alpha) {
  if (alpha.dim() != F_at_x.dim()) throw std::invalid_argument("faa_di_bruno: dim mismatch");
  if (alpha.order() > F_at_x.degree) throw std::invalid_argument("faa_di_bruno: jet degree too low");
  if (alpha.is_zero()) return h(0);
  double total = 0.0;
  for (const Partition& pi : enumerate_partitions(alpha)) {
    double term = partition_weight(alpha, pi) * h(static_cast<int>(pi.size()));
    for (const MultiIndex& beta : pi) {
      if (term == 0.0) break;
      term *= F_at_x.coeff(beta);
    }
    total += term;
  }
  return total;
}

double faa_di_bruno(const JetOracle& F, const OuterDerivs& h, const Point& x, const MultiIndex& alpha) {
  return faa_di_bruno(F.jet_at(x, alpha.order()), h, alpha);
}

const std::vector<std::vector<WeightedPartition>>& partition_table(int n, int degree) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::unique_ptr<std::vector<std::vector<WeightedPartition>>>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{n, degree}];
  if (!slot) {
    auto table = std::make_unique<std::vector<std::vector<WeightedPartition>>>();
    for (const MultiIndex& a : enumerate_multiindices(n, degree)) {
      std::vector<WeightedPartition> row;
      for (Partition& pi : enumerate_partitions(a)) {
        double w = partition_weight(a, pi);
        row.push_back(WeightedPartition{std::move(pi), w});
      }
      table->push_back(std::move(row));
    }
    slot = std::move(table);
  }
  return *slot;
}

Jet compose_jet(const Jet& F_at_x, const OuterDerivs& h) {
  const auto& table = partition_table(F_at_x.dim(), F_at_x.degree);
  auto mis = enumerate_multiindices(F_at_x.dim(), F_at_x.degree);
  JetBuilder b(F_at_x.basepoint, F_at_x.degree);
  for (std::size_t i = 0; i < mis.size(); ++i) {
    double total = 0.0;
    for (const WeightedPartition& wp : table[i]) {
      double term = wp.weight * h(static_cast<int>(wp.parts.size()));
      for (const MultiIndex& beta : wp.parts) {
        if (term == 0.0) break;
        term *= F_at_x.coeff(beta);
      }
      total += term;
    }
    if (total != 0.0) b.set(mis[i], total);
  }
  return b.build();
}

Jet power_jet(const Jet& F_at_x, double r) {
  double v = F_at_x.value();
  if (v < 0.0) throw std::domain_error("power_jet: negative value");
  if (v < 1e-300) {
    if (!F_at_x.all_zero()) throw std::domain_error("power_jet: zero value with nonzero jet");
    return zero_jet(F_at_x.basepoint, F_at_x.degree);
  }
  double logv = std::log(v);
  const auto& table = partition_table(F_at_x.dim(), F_at_x.degree);
  auto mis = enumerate_multiindices(F_at_x.dim(), F_at_x.degree);
  JetBuilder b(F_at_x.basepoint, F_at_x.degree);
  for (std::size_t i = 0; i < mis.size(); ++i) {
    const MultiIndex& a = mis[i];
    double total;
    if (a.is_zero()) {
      total = std::pow(v, r);
    } else {
      total = 0.0;
      for (const WeightedPartition& wp : table[i]) {
        int k = static_cast<int>(wp.parts.size());
        double ff = falling_factorial(r, k) * wp.weight;
        if (ff == 0.0) continue;
        double outer_exp = (r - k) * logv;
        if (std::abs(outer_exp) < 600.0) {
          double term = ff * std::exp(outer_exp);
          for (const MultiIndex& beta : wp.parts) term *= F_at_x.coeff(beta);
          total += term;
        } else {
          // log-magnitude route for flat data near zeros: v^(r-k) alone can
          // overflow even when the full product is moderate
          double sign = ff > 0 ? 1.0 : -1.0;
          double logmag = std::log(std::abs(ff)) + outer_exp;
          bool zero = false;
          for (const MultiIndex& beta : wp.parts) {
            double c = F_at_x.coeff(beta);
            if (c == 0.0) {
              zero = true;
              break;
            }
            if (c < 0.0) sign = -sign;
            logmag += std::log(std::abs(c));
          }
          if (!zero) total += sign * std::exp(logmag);
        }
      }
    }
    if (total != 0.0) b.set(a, total);
  }
  return b.build();
}

Jet reciprocal_jet(const Jet& S_at_x) {
  double v = S_at_x.value();
  if (v == 0.0) throw std::domain_error("reciprocal_jet: zero value");
  double inv = 1.0 / v;
  return compose_jet(S_at_x, [inv](int k) {
    // (1/t)^(k) = (-1)^k k! t^-(k+1)
    double d = inv;
    for (int j = 1; j <= k; ++j) d *= -j * inv;
    return d;
  });
}

}  // namespace flatjet
