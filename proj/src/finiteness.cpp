#include "flatjet/finiteness.hpp"

#include <cmath>
#include <limits>
#include <random>

#include "flatjet/faa_di_bruno.hpp"

namespace flatjet {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double u01(std::mt19937_64& rng) {
  // fixed 53-bit mantissa mapping, independent of library distributions
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double flat_ratio(double value, double gm, double s, int m) {
  if (gm == 0.0) return 0.0;
  if (value == 0.0) return kInf;
  return std::exp((s * std::log(gm) - (s - m) * std::log(value)) / m);
}

// ---- small dense SPD solver ----

struct SmallChol {
  int D = 0;
  std::vector<double> L;  // row-major lower factor

  void factor(const std::vector<double>& M, int dim) {
    D = dim;
    L.assign(static_cast<std::size_t>(D) * D, 0.0);
    for (int i = 0; i < D; ++i) {
      for (int j = 0; j <= i; ++j) {
        double s = M[static_cast<std::size_t>(i) * D + j];
        for (int k = 0; k < j; ++k) s -= L[static_cast<std::size_t>(i) * D + k] * L[static_cast<std::size_t>(j) * D + k];
        if (i == j) {
          if (s <= 0.0) throw std::domain_error("surrogate: projection system not positive definite");
          L[static_cast<std::size_t>(i) * D + j] = std::sqrt(s);
        } else {
          L[static_cast<std::size_t>(i) * D + j] = s / L[static_cast<std::size_t>(j) * D + j];
        }
      }
    }
  }

  void solve(std::vector<double>& x) const {
    for (int i = 0; i < D; ++i) {
      double s = x[static_cast<std::size_t>(i)];
      for (int k = 0; k < i; ++k) s -= L[static_cast<std::size_t>(i) * D + k] * x[static_cast<std::size_t>(k)];
      x[static_cast<std::size_t>(i)] = s / L[static_cast<std::size_t>(i) * D + i];
    }
    for (int i = D - 1; i >= 0; --i) {
      double s = x[static_cast<std::size_t>(i)];
      for (int k = i + 1; k < D; ++k) s -= L[static_cast<std::size_t>(k) * D + i] * x[static_cast<std::size_t>(k)];
      x[static_cast<std::size_t>(i)] = s / L[static_cast<std::size_t>(i) * D + i];
    }
  }
};

// ---- constraint system over jet coefficient vectors ----

struct System {
  int n = 0, d = 0, D = 0, q = 0;
  double s = 0;
  std::vector<Point> pts;
  std::vector<double> f;
  std::vector<MultiIndex> mis;       // slot -> multi-index
  std::vector<int> order_of;         // slot -> order
  std::vector<std::vector<int>> blocks;  // order -> slots

  struct PairData {
    int i = 0, j = 0;
    double dist = 0;
    std::vector<double> R;  // D x D recenter matrix, row = target slot at y
    SmallChol chol;         // factor of R_f R_f^T + diag(free mask)
  };
  std::vector<PairData> pairs;

  System(const std::vector<Point>& S, const std::vector<double>& fv, const Smoothness& sm) {
    q = static_cast<int>(S.size());
    if (q == 0) throw std::invalid_argument("surrogate: empty point set");
    if (static_cast<int>(fv.size()) != q) throw std::invalid_argument("surrogate: point/value count mismatch");
    n = S.front().dim();
    d = sm.floor_s;
    s = sm.s;
    pts = S;
    f = fv;
    for (double v : f)
      if (!(v >= 0.0) || !std::isfinite(v)) throw std::invalid_argument("surrogate: values must be nonnegative");
    for (int i = 0; i < q; ++i)
      for (int k = 0; k < i; ++k)
        if (pts[static_cast<std::size_t>(i)] == pts[static_cast<std::size_t>(k)])
          throw std::invalid_argument("surrogate: duplicate point");
    mis = enumerate_multiindices(n, d);
    D = static_cast<int>(mis.size());
    blocks.assign(static_cast<std::size_t>(d) + 1, {});
    for (int a = 0; a < D; ++a) {
      order_of.push_back(mis[static_cast<std::size_t>(a)].order());
      blocks[static_cast<std::size_t>(order_of.back())].push_back(a);
    }
    for (int i = 0; i < q; ++i)
      for (int j = 0; j < q; ++j) {
        if (i == j) continue;
        PairData pd;
        pd.i = i;
        pd.j = j;
        pd.dist = flatjet::dist(pts[static_cast<std::size_t>(i)], pts[static_cast<std::size_t>(j)]);
        Point dy = sub(pts[static_cast<std::size_t>(j)], pts[static_cast<std::size_t>(i)]);
        pd.R.assign(static_cast<std::size_t>(D) * D, 0.0);
        for (int row = 0; row < D; ++row) {
          MultiIndex gamma;
          for (int col = 0; col < D; ++col)
            if (mis[static_cast<std::size_t>(col)].minus(mis[static_cast<std::size_t>(row)], gamma))
              pd.R[static_cast<std::size_t>(row) * D + col] = mi_pow(dy, gamma) / mi_factorial(gamma);
        }
        // G G^T with G = [R columns of free u-slots | -I columns of free w-slots]
        std::vector<double> M(static_cast<std::size_t>(D) * D, 0.0);
        for (int r1 = 0; r1 < D; ++r1)
          for (int r2 = 0; r2 < D; ++r2) {
            double acc = 0.0;
            for (int c = 0; c < D; ++c)
              if (order_of[static_cast<std::size_t>(c)] >= 1)
                acc += pd.R[static_cast<std::size_t>(r1) * D + c] * pd.R[static_cast<std::size_t>(r2) * D + c];
            if (r1 == r2 && order_of[static_cast<std::size_t>(r1)] >= 1) acc += 1.0;
            M[static_cast<std::size_t>(r1) * D + r2] = acc;
          }
        pd.chol.factor(M, D);
        pairs.push_back(std::move(pd));
      }
  }

  double point_bound(int i, int m, double M) const {
    double fv = f[static_cast<std::size_t>(i)];
    if (fv == 0.0) return 0.0;
    if (M == 0.0) return 0.0;
    double flat_cap = std::exp((m / s) * std::log(M) + ((s - m) / s) * std::log(fv));
    return std::min(M, flat_cap);
  }

  double block_norm(const std::vector<double>& c, int m) const {
    double acc = 0.0;
    for (int a : blocks[static_cast<std::size_t>(m)]) acc += c[static_cast<std::size_t>(a)] * c[static_cast<std::size_t>(a)];
    return std::sqrt(acc);
  }

  // exact level of a coefficient assignment (see header)
  double level(const std::vector<std::vector<double>>& C) const {
    double L = 0.0;
    for (int i = 0; i < q; ++i) {
      L = std::max(L, f[static_cast<std::size_t>(i)]);
      for (int m = 1; m <= d; ++m) {
        double nb = block_norm(C[static_cast<std::size_t>(i)], m);
        L = std::max(L, nb);
        L = std::max(L, flat_ratio(f[static_cast<std::size_t>(i)], nb, s, m));
      }
    }
    std::vector<double> dvec(static_cast<std::size_t>(D));
    for (const PairData& pd : pairs) {
      diff(pd, C[static_cast<std::size_t>(pd.i)], C[static_cast<std::size_t>(pd.j)], dvec);
      for (int m = 0; m <= d; ++m) {
        double nb = 0.0;
        for (int a : blocks[static_cast<std::size_t>(m)]) nb += dvec[static_cast<std::size_t>(a)] * dvec[static_cast<std::size_t>(a)];
        L = std::max(L, std::sqrt(nb) / std::pow(pd.dist, s - m));
      }
    }
    return L;
  }

  void diff(const PairData& pd, const std::vector<double>& u, const std::vector<double>& w,
            std::vector<double>& out) const {
    for (int row = 0; row < D; ++row) {
      double acc = -w[static_cast<std::size_t>(row)];
      for (int col = 0; col < D; ++col) acc += pd.R[static_cast<std::size_t>(row) * D + col] * u[static_cast<std::size_t>(col)];
      out[static_cast<std::size_t>(row)] = acc;
    }
  }

  void project_point(std::vector<double>& c, int i, double M) const {
    for (int m = 1; m <= d; ++m) {
      double bound = point_bound(i, m, M);
      double nb = block_norm(c, m);
      if (nb > bound) {
        double scale = bound == 0.0 ? 0.0 : bound / nb;
        for (int a : blocks[static_cast<std::size_t>(m)]) c[static_cast<std::size_t>(a)] *= scale;
      }
    }
  }

  void project_pair(const PairData& pd, std::vector<double>& u, std::vector<double>& w, double M,
                    std::vector<double>& dvec, std::vector<double>& e) const {
    diff(pd, u, w, dvec);
    bool any = false;
    for (int m = 0; m <= d; ++m) {
      double nb = 0.0;
      for (int a : blocks[static_cast<std::size_t>(m)]) nb += dvec[static_cast<std::size_t>(a)] * dvec[static_cast<std::size_t>(a)];
      nb = std::sqrt(nb);
      double bound = M * std::pow(pd.dist, s - m);
      double shrink = (nb > bound) ? bound / nb - 1.0 : 0.0;
      for (int a : blocks[static_cast<std::size_t>(m)]) e[static_cast<std::size_t>(a)] = shrink * dvec[static_cast<std::size_t>(a)];
      if (shrink != 0.0) any = true;
    }
    if (!any) return;
    pd.chol.solve(e);  // e becomes k
    for (int col = 0; col < D; ++col) {
      if (order_of[static_cast<std::size_t>(col)] < 1) continue;
      double acc = 0.0;
      for (int row = 0; row < D; ++row) acc += pd.R[static_cast<std::size_t>(row) * D + col] * e[static_cast<std::size_t>(row)];
      u[static_cast<std::size_t>(col)] += acc;
    }
    for (int row = 0; row < D; ++row)
      if (order_of[static_cast<std::size_t>(row)] >= 1) w[static_cast<std::size_t>(row)] -= e[static_cast<std::size_t>(row)];
  }

  bool feasible_at(std::vector<std::vector<double>>& C, double M, const SurrogateOptions& opts) const {
    for (double v : f)
      if (v > M * (1.0 + 1e-12)) return false;
    double tol = opts.feas_tol * std::max(1.0, M);
    std::vector<double> dvec(static_cast<std::size_t>(D)), e(static_cast<std::size_t>(D));
    for (int sweep = 0; sweep < opts.sweeps; ++sweep) {
      for (int i = 0; i < q; ++i) project_point(C[static_cast<std::size_t>(i)], i, M);
      for (const PairData& pd : pairs)
        project_pair(pd, C[static_cast<std::size_t>(pd.i)], C[static_cast<std::size_t>(pd.j)], M, dvec, e);
      if (level(C) <= M + tol) return true;
    }
    return level(C) <= M + tol;
  }

  WhitneyField to_field(const std::vector<std::vector<double>>& C) const {
    std::vector<std::pair<Point, Jet>> entries;
    for (int i = 0; i < q; ++i) {
      JetBuilder b(pts[static_cast<std::size_t>(i)], d);
      for (int a = 0; a < D; ++a)
        if (C[static_cast<std::size_t>(i)][static_cast<std::size_t>(a)] != 0.0)
          b.set(mis[static_cast<std::size_t>(a)], C[static_cast<std::size_t>(i)][static_cast<std::size_t>(a)]);
      entries.emplace_back(pts[static_cast<std::size_t>(i)], b.build());
    }
    return make_field(std::move(entries));
  }

  std::vector<std::vector<double>> from_field(const WhitneyField& field) const {
    if (static_cast<int>(field.entries.size()) != q) throw std::invalid_argument("surrogate: warm start size mismatch");
    std::vector<std::vector<double>> C(static_cast<std::size_t>(q), std::vector<double>(static_cast<std::size_t>(D), 0.0));
    for (int i = 0; i < q; ++i) {
      const auto& [p, J] = field.entries[static_cast<std::size_t>(i)];
      if (!(p == pts[static_cast<std::size_t>(i)])) throw std::invalid_argument("surrogate: warm start points mismatch");
      for (int a = 0; a < D; ++a) C[static_cast<std::size_t>(i)][static_cast<std::size_t>(a)] = J.coeff(mis[static_cast<std::size_t>(a)]);
      C[static_cast<std::size_t>(i)][0] = f[static_cast<std::size_t>(i)];  // value stays pinned
    }
    return C;
  }

  std::vector<std::vector<double>> zero_field() const {
    std::vector<std::vector<double>> C(static_cast<std::size_t>(q), std::vector<double>(static_cast<std::size_t>(D), 0.0));
    for (int i = 0; i < q; ++i) C[static_cast<std::size_t>(i)][0] = f[static_cast<std::size_t>(i)];
    return C;
  }
};

}  // namespace

bool gamma_f_member(const Jet& P, const GammaSpec& spec, double f_value, const Smoothness& sm) {
  if (std::abs(P.value() - f_value) > 1e-12 * std::max(1.0, std::abs(f_value))) return false;
  return gamma_member(P, spec, sm);
}

double field_level(const WhitneyField& field, const std::vector<double>& f, const Smoothness& sm) {
  std::vector<Point> pts;
  for (const auto& [p, J] : field.entries) pts.push_back(p);
  System sys(pts, f, sm);
  return sys.level(sys.from_field(field));
}

SurrogateResult surrogate_local_norm(const std::vector<Point>& S, const std::vector<double>& f,
                                     const Smoothness& sm, const SurrogateOptions& opts,
                                     const WhitneyField* warm_start) {
  if (S.size() > 14) throw std::invalid_argument("surrogate: point sets beyond 14 are unsupported");
  System sys(S, f, sm);

  std::vector<std::vector<double>> best = sys.zero_field();
  double best_level = sys.level(best);
  if (warm_start) {
    auto w = sys.from_field(*warm_start);
    double wl = sys.level(w);
    if (wl < best_level) {
      best = std::move(w);
      best_level = wl;
    }
  }

  double lo = 0.0;
  for (double v : f) lo = std::max(lo, v);

  for (int it = 0; it < opts.max_bisect; ++it) {
    if (best_level <= lo * (1.0 + opts.rel_tol) || best_level == 0.0) break;
    double mid = 0.5 * (lo + best_level);
    auto cand = best;
    if (sys.feasible_at(cand, mid, opts)) {
      double L = sys.level(cand);
      if (L < best_level) {
        best = std::move(cand);
        best_level = L;
      } else {
        break;  // no further progress
      }
    } else {
      lo = mid;
    }
  }
  return SurrogateResult{best_level, sys.to_field(best)};
}

FinitenessReport finiteness_scan(const std::vector<Point>& E, const std::vector<double>& f, const Smoothness& sm,
                                 int k, double c_cap, const SurrogateOptions& opts, Exec exec) {
  if (E.empty()) throw std::invalid_argument("finiteness_scan: empty point set");
  if (E.size() > 14) throw std::invalid_argument("finiteness_scan: point sets beyond 14 are unsupported");
  FinitenessReport rep;
  rep.dim_p = static_cast<int>(monomial_count(E.front().dim(), sm.floor_s));
  int q = static_cast<int>(E.size());
  int k_used = k;
  if (k_used <= 0) k_used = rep.dim_p >= 20 ? q : static_cast<int>(std::min<long long>(1LL << rep.dim_p, q));
  k_used = std::min(k_used, q);
  rep.k = k_used;
  rep.c_cap = c_cap;

  SurrogateResult global = surrogate_local_norm(E, f, sm, opts);
  rep.global = global.value;

  // all index subsets of size 1..k_used, ascending indices
  std::vector<std::vector<int>> subsets;
  std::vector<int> stack;
  auto rec = [&](auto&& self, int start) -> void {
    for (int i = start; i < q; ++i) {
      stack.push_back(i);
      if (static_cast<int>(stack.size()) <= k_used) {
        subsets.push_back(stack);
        self(self, i + 1);
      }
      stack.pop_back();
    }
  };
  rec(rec, 0);
  rep.subsets = static_cast<std::int64_t>(subsets.size());

  std::vector<double> local(subsets.size());
  auto run_subset = [&](std::int64_t idx) {
    const std::vector<int>& sel = subsets[static_cast<std::size_t>(idx)];
    std::vector<Point> pts;
    std::vector<double> fv;
    std::vector<std::pair<Point, Jet>> entries;
    for (int i : sel) {
      pts.push_back(E[static_cast<std::size_t>(i)]);
      fv.push_back(f[static_cast<std::size_t>(i)]);
      entries.push_back(global.field.entries[static_cast<std::size_t>(i)]);
    }
    WhitneyField warm = make_field(std::move(entries));
    local[static_cast<std::size_t>(idx)] = surrogate_local_norm(pts, fv, sm, opts, &warm).value;
    return 0.0;
  };
  max_over(static_cast<std::int64_t>(subsets.size()), exec, run_subset);

  rep.local_max = 0.0;
  for (double v : local) rep.local_max = std::max(rep.local_max, v);
  rep.ratio = rep.local_max > 0.0 ? rep.global / rep.local_max : 1.0;
  rep.violation = rep.global > c_cap * rep.local_max && rep.local_max > 0.0;
  return rep;
}

namespace {

double block_norm_of(const Jet& J, int m) { return grad_norm(J, m); }

bool blocks_within(const Jet& J, double delta, int d) {
  for (int m = 0; m <= d; ++m) {
    double cap = std::pow(delta, -m);
    if (block_norm_of(J, m) > cap) return false;
  }
  return true;
}

}  // namespace

bool verify_convexity_witness(const ConvexityWitness& w, const Smoothness& sm, double tol) {
  int d = sm.floor_s;
  GammaSpec spec{w.P1.basepoint, w.M};
  if (!gamma_f_member(w.P1, spec, w.f, sm)) return false;
  if (!gamma_f_member(w.P2, spec, w.f, sm)) return false;
  Jet diffj = jet_add(w.P1, jet_scale(w.P2, -1.0));
  for (int m = 0; m <= d; ++m)
    if (grad_norm(diffj, m) > w.M * std::pow(w.delta, sm.s - m) * (1.0 + tol)) return false;
  if (!blocks_within(w.Q1, w.delta, d) || !blocks_within(w.Q2, w.delta, d)) return false;
  Jet q1sq = jet_multiply(w.Q1, w.Q1);
  Jet q2sq = jet_multiply(w.Q2, w.Q2);
  double mag = 1.0;  // cancellation scale for the partition-of-unity identity
  for (const auto& [a, c] : q1sq.coeffs) mag = std::max(mag, std::abs(c));
  for (const auto& [a, c] : q2sq.coeffs) mag = std::max(mag, std::abs(c));
  Jet unit = jet_add(q1sq, q2sq);
  for (const auto& [a, c] : unit.coeffs) {
    double target = a.is_zero() ? 1.0 : 0.0;
    if (std::abs(c - target) > 1e-9 * mag) return false;
  }
  Jet blended = jet_add(jet_multiply(q1sq, w.P1), jet_multiply(q2sq, w.P2));
  for (const auto& [a, c] : blended.coeffs)
    if (std::abs(c - w.P.coeff(a)) > tol * std::max(1.0, std::abs(c))) return false;
  if (std::abs(w.P.value() - w.f) > 1e-12 * std::max(1.0, w.f)) return false;
  double C = std::max(gamma_sup_part(w.P, sm), gamma_flat_part(w.P, sm)) / w.M;
  return std::abs(C - w.measured_C) <= tol * std::max(1.0, w.measured_C);
}

ConvexityReport fuzz_whitney_convexity(int n, const Smoothness& sm, int trials, std::uint64_t seed) {
  if (n < 1 || n > kMaxDim) throw std::invalid_argument("fuzz_whitney_convexity: dim out of range");
  std::mt19937_64 rng(seed);
  int d = sm.floor_s;
  Point x0 = Point::zero(n);
  auto mis = enumerate_multiindices(n, d);

  ConvexityReport rep;
  rep.n = n;
  rep.s = sm.s;
  rep.seed = seed;
  rep.trials = trials;

  const std::int64_t rejection_cap = 100000;
  int accepted = 0;
  while (accepted < trials) {
    if (rep.rejections > rejection_cap) throw std::domain_error("fuzz_whitney_convexity: rejection cap exceeded");
    double f = std::exp(std::log(1e-2) + u01(rng) * (std::log(10.0) - std::log(1e-2)));
    double M = f * std::exp(u01(rng) * std::log(100.0));
    double delta = 0.05 + 0.95 * u01(rng);

    auto draw_in_cone = [&](double frac) {
      JetBuilder b(x0, d);
      b.set(MultiIndex(n), f);
      for (const MultiIndex& a : mis) {
        int m = a.order();
        if (m == 0) continue;
        int bs = 0;
        for (const MultiIndex& c : mis)
          if (c.order() == m) ++bs;
        double bound = std::min(M, std::pow(M, static_cast<double>(m) / sm.s) * std::pow(f, (sm.s - m) / sm.s));
        b.set(a, (2.0 * u01(rng) - 1.0) * frac * bound / std::sqrt(static_cast<double>(bs)));
      }
      return b.build();
    };

    Jet P1 = draw_in_cone(0.9);
    JetBuilder db(x0, d);
    for (const MultiIndex& a : mis) {
      int m = a.order();
      if (m == 0) continue;
      int bs = 0;
      for (const MultiIndex& c : mis)
        if (c.order() == m) ++bs;
      double bound = M * std::pow(delta, sm.s - m);
      db.set(a, (2.0 * u01(rng) - 1.0) * 0.45 * bound / std::sqrt(static_cast<double>(bs)));
    }
    Jet P2 = jet_add(P1, db.build());

    GammaSpec spec{x0, M};
    if (!gamma_f_member(P2, spec, f, sm)) {
      ++rep.rejections;
      continue;
    }

    JetBuilder qb(x0, d);
    for (const MultiIndex& a : mis)
      qb.set(a, (2.0 * u01(rng) - 1.0) * 0.5 * std::pow(delta, -a.order()));
    Jet Q2 = qb.build();
    if (!blocks_within(Q2, delta, d)) {
      ++rep.rejections;
      continue;
    }
    Jet one_minus = jet_add(constant_jet(x0, d, 1.0), jet_scale(jet_multiply(Q2, Q2), -1.0));
    Jet Q1 = power_jet(one_minus, 0.5);
    if (!blocks_within(Q1, delta, d)) {
      ++rep.rejections;
      continue;
    }

    Jet P = jet_add(jet_multiply(jet_multiply(Q1, Q1), P1), jet_multiply(jet_multiply(Q2, Q2), P2));
    ConvexityWitness w;
    w.f = f;
    w.M = M;
    w.delta = delta;
    w.P1 = P1;
    w.P2 = P2;
    w.Q1 = Q1;
    w.Q2 = Q2;
    w.P = P;
    w.measured_C = std::max(gamma_sup_part(P, sm), gamma_flat_part(P, sm)) / M;
    if (!verify_convexity_witness(w, sm)) {
      ++rep.rejections;
      continue;
    }
    ++accepted;
    if (w.measured_C > rep.max_C) {
      rep.max_C = w.measured_C;
      rep.worst = w;
    }
  }
  return rep;
}

}  // namespace flatjet
