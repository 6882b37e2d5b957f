#include "flatjet/norms.hpp"

#include <cmath>
#include <limits>

namespace flatjet {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Flatness ratio (gm^s / value^(s-m))^(1/m) with the 0/0 = 0, pos/0 = inf
// conventions, in log form so extreme but consistent magnitudes cancel.
double flat_ratio_exact(double value, double gm, double s, int m) {
  if (gm == 0.0) return 0.0;
  if (value == 0.0) return kInf;
  return std::exp((s * std::log(gm) - (s - m) * std::log(value)) / m);
}

// Sampled variant with an underflow floor: gradient magnitudes this far below
// any meaningful scale come from cutoff tails rounding through denormals, and
// must not be read as non-flat zeros.
double flat_ratio_sampled(double value, double gm, double s, int m) {
  if (gm < 1e-150) return 0.0;
  if (value <= 0.0) return kInf;
  return std::exp((s * std::log(gm) - (s - m) * std::log(value)) / m);
}

}  // namespace

std::int64_t GridSpec::total() const {
  std::int64_t t = 1;
  for (int c : counts) t *= c;
  return t;
}

Point GridSpec::point(std::int64_t i) const {
  Point p = Point::zero(dim());
  for (int j = 0; j < dim(); ++j) {
    int g = counts[j];
    std::int64_t k = i % g;
    i /= g;
    p[j] = g == 1 ? 0.5 * (box.lo[j] + box.hi[j]) : box.lo[j] + (box.hi[j] - box.lo[j]) * static_cast<double>(k) / (g - 1);
  }
  return p;
}

GridSpec GridSpec::uniform(const Box& box, int per_axis) {
  if (per_axis < 1) throw std::invalid_argument("GridSpec: need at least one point per axis");
  return GridSpec{box, std::vector<int>(static_cast<std::size_t>(box.dim()), per_axis)};
}

std::vector<std::pair<std::int64_t, std::int64_t>> sample_pairs(const GridSpec& grid, std::int64_t cap) {
  std::vector<std::pair<std::int64_t, std::int64_t>> pairs;
  std::int64_t n = grid.total();
  if (n < 2) return pairs;
  if (n * (n - 1) / 2 <= cap) {
    pairs.reserve(static_cast<std::size_t>(n * (n - 1) / 2));
    for (std::int64_t i = 0; i < n; ++i)
      for (std::int64_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
    return pairs;
  }
  // One stratum per (axis, dyadic offset): pairs separated by 1, 2, 4, ...
  // grid steps along a single axis. Every dyadic physical scale between the
  // step and the axis extent is represented at every refinement, which is
  // what makes Holder estimates comparable across grids; index-based offsets
  // would alias to arbitrary scales as the point count changes.
  std::int64_t unit = 1;
  std::vector<std::int64_t> units(grid.counts.size());
  std::int64_t strata = 0;
  for (std::size_t a = 0; a < grid.counts.size(); ++a) {
    units[a] = unit;
    unit *= grid.counts[a];
    for (std::int64_t d = 1; d < grid.counts[a]; d *= 2) ++strata;
  }
  std::int64_t budget = std::max<std::int64_t>(1, cap / std::max<std::int64_t>(1, strata));
  for (std::size_t a = 0; a < grid.counts.size(); ++a) {
    for (std::int64_t d = 1; d < grid.counts[a]; d *= 2) {
      std::int64_t valid = n / grid.counts[a] * (grid.counts[a] - d);
      std::int64_t stride = std::max<std::int64_t>(1, (valid + budget - 1) / budget);
      std::int64_t seen = 0;
      for (std::int64_t i = 0; i < n; ++i) {
        std::int64_t coord = (i / units[a]) % grid.counts[a];
        if (coord + d >= grid.counts[a]) continue;
        if (seen++ % stride == 0) pairs.emplace_back(i, i + d * units[a]);
      }
    }
  }
  return pairs;
}

NormReport sampled_norms(const JetOracle& F, const GridSpec& grid, const Smoothness& sm, Exec exec,
                         std::int64_t pair_cap) {
  const int n = grid.dim();
  if (F.dim() != n) throw std::invalid_argument("sampled_norms: dim mismatch");
  const int d = sm.floor_s;
  const std::int64_t total = grid.total();

  // order-(floor_s) coefficient block layout, for the pair pass
  std::vector<MultiIndex> top;
  for (const MultiIndex& a : enumerate_multiindices(n, d))
    if (a.order() == d) top.push_back(a);
  const std::size_t bs = top.size();

  std::vector<double> blocks(static_cast<std::size_t>(total) * bs);
  std::vector<double> point_max(static_cast<std::size_t>(total));
  std::vector<double> point_flat(static_cast<std::size_t>(total));

  auto eval_point = [&](std::int64_t i) {
    Point x = grid.point(i);
    Jet J = F.jet_at(x, d);
    double v = J.value();
    double sup = 0.0, flat = 0.0;
    for (int m = 0; m <= d; ++m) {
      double gm = grad_norm(J, m);
      sup = std::max(sup, gm);
      if (m >= 1) flat = std::max(flat, flat_ratio_sampled(v, gm, sm.s, m));
    }
    point_max[static_cast<std::size_t>(i)] = sup;
    point_flat[static_cast<std::size_t>(i)] = flat;
    for (std::size_t b = 0; b < bs; ++b) blocks[static_cast<std::size_t>(i) * bs + b] = J.coeff(top[b]);
    return 0.0;
  };
  max_over(total, exec, eval_point);

  NormReport rep;
  rep.samples = total;
  rep.sup_derivs = max_over(total, exec, [&](std::int64_t i) { return point_max[static_cast<std::size_t>(i)]; });
  rep.flat = max_over(total, exec, [&](std::int64_t i) { return point_flat[static_cast<std::size_t>(i)]; });

  auto pairs = sample_pairs(grid, pair_cap);
  rep.pairs = static_cast<std::int64_t>(pairs.size());
  rep.holder = pairs.empty() ? 0.0 : std::max(0.0, max_over(static_cast<std::int64_t>(pairs.size()), exec, [&](std::int64_t k) {
    auto [i, j] = pairs[static_cast<std::size_t>(k)];
    double d2 = 0.0;
    for (std::size_t b = 0; b < bs; ++b) {
      double diff = blocks[static_cast<std::size_t>(i) * bs + b] - blocks[static_cast<std::size_t>(j) * bs + b];
      d2 += diff * diff;
    }
    double r = dist(grid.point(i), grid.point(j));
    return r == 0.0 ? 0.0 : std::sqrt(d2) / std::pow(r, sm.sigma);
  }));

  rep.cs = rep.sup_derivs + rep.holder;
  rep.fs = rep.cs + rep.flat;
  return rep;
}

double sampled_min_value(const JetOracle& F, const GridSpec& grid, Exec exec) {
  return min_over(grid.total(), exec, [&](std::int64_t i) { return F.value_at(grid.point(i)); });
}

double whitney_field_cs_norm(const WhitneyField& field, const Smoothness& sm) {
  if (field.entries.empty()) throw std::invalid_argument("whitney_field_cs_norm: empty field");
  if (field.degree() > sm.floor_s) throw std::invalid_argument("whitney_field_cs_norm: jet degree exceeds floor(s)");
  double sup = 0.0;
  for (const auto& [x, P] : field.entries)
    for (int m = 0; m <= P.degree; ++m) sup = std::max(sup, grad_norm(P, m));
  double pair = 0.0;
  for (const auto& [x, Px] : field.entries) {
    for (const auto& [y, Py] : field.entries) {
      if (x == y) continue;
      Jet D = jet_add(jet_recenter(Px, y), jet_scale(Py, -1.0));
      double r = dist(x, y);
      for (int m = 0; m <= D.degree; ++m) pair = std::max(pair, grad_norm(D, m) / std::pow(r, sm.s - m));
    }
  }
  return sup + pair;
}

double whitney_field_flat_norm(const WhitneyField& field, const Smoothness& sm) {
  if (field.entries.empty()) throw std::invalid_argument("whitney_field_flat_norm: empty field");
  if (sm.s <= 1.0) return 0.0;
  double flat = 0.0;
  for (const auto& [x, P] : field.entries) flat = std::max(flat, gamma_flat_part(P, sm));
  return flat;
}

double gamma_sup_part(const Jet& P, const Smoothness& sm) {
  if (P.degree > sm.floor_s) throw std::invalid_argument("gamma_sup_part: jet degree exceeds floor(s)");
  double sup = 0.0;
  for (int m = 0; m <= P.degree; ++m) sup = std::max(sup, grad_norm(P, m));
  return sup;
}

double gamma_flat_part(const Jet& P, const Smoothness& sm) {
  if (P.degree > sm.floor_s) throw std::invalid_argument("gamma_flat_part: jet degree exceeds floor(s)");
  double v = P.value();
  if (v < 0.0) throw std::domain_error("gamma_flat_part: negative value");
  double flat = 0.0;
  for (int m = 1; m <= P.degree; ++m) flat = std::max(flat, flat_ratio_exact(v, grad_norm(P, m), sm.s, m));
  return flat;
}

bool gamma_member(const Jet& P, const GammaSpec& spec, const Smoothness& sm) {
  if (!(P.basepoint == spec.x0)) throw std::invalid_argument("gamma_member: jet not based at spec.x0");
  if (P.value() < 0.0) return false;
  return gamma_sup_part(P, sm) <= spec.M && gamma_flat_part(P, sm) <= spec.M;
}

double c0_constant(int n, const Smoothness& sm, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("c0_constant: eps must be positive");
  int d = sm.floor_s;
  if (d == 0) return 1.0;
  double comb = static_cast<double>(monomial_count(n, d));
  auto lhs = [&](double c) {
    double sum = 0.0, ck = 1.0;
    for (int k = 1; k <= d; ++k) {
      ck *= c;
      sum += std::pow(static_cast<double>(n), 0.5 * k) * ck / factorial(k);
    }
    return comb * sum;
  };
  if (lhs(1.0) <= eps) return 1.0;
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 80; ++it) {
    double mid = 0.5 * (lo + hi);
    (lhs(mid) <= eps ? lo : hi) = mid;
  }
  return lo;
}

double flat_lengthscale(const Jet& P, const Smoothness& sm, double eps) {
  double v = P.value();
  if (v < 0.0) throw std::domain_error("flat_lengthscale: negative value");
  if (v == 0.0) return 0.0;
  double mflat = gamma_flat_part(P, sm);
  if (mflat == 0.0) return kInf;
  return c0_constant(P.dim(), sm, eps) * std::pow(v / mflat, 1.0 / sm.s);
}

std::pair<double, double> prop_c2_bound_check(const JetOracle& F, const GridSpec& grid, const Smoothness& sm,
                                              Exec exec) {
  if (!(sm.s > 1.0 && sm.s <= 2.0)) throw std::invalid_argument("prop_c2_bound_check: requires 1 < s <= 2");
  NormReport rep = sampled_norms(F, grid, sm, exec);
  return {rep.flat, std::pow(2.0, sm.s) / sm.s * rep.holder};
}

}  // namespace flatjet
