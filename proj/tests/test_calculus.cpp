#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "flatjet/bump.hpp"
#include "flatjet/faa_di_bruno.hpp"
#include "flatjet/oracle.hpp"
#include "helpers.hpp"

using namespace flatjet;
using testref::Rng;

TEST_CASE("model bump pointwise values") {
  CHECK(bump_g(0.0, 0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(bump_g(0.5, 0) == doctest::Approx(std::exp(-1.0 / 3.0)).epsilon(1e-15));
  CHECK(bump_g(1.0, 0) == 0.0);
  CHECK(bump_g(-1.0, 0) == 0.0);
  CHECK(bump_g(1.7, 0) == 0.0);
  CHECK(bump_g(1.7, 3) == 0.0);
  // even function
  for (double t : {0.2, 0.55, 0.9}) CHECK(bump_g(t, 0) == doctest::Approx(bump_g(-t, 0)).epsilon(1e-15));
}

TEST_CASE("model bump second derivative at 0 is -2") {
  CHECK(bump_g(0.0, 1) == doctest::Approx(0.0));
  CHECK(bump_g(0.0, 2) == doctest::Approx(-2.0).epsilon(1e-12));
}

TEST_CASE("model bump derivatives against finite differences") {
  for (double t : {-0.8, -0.35, 0.0, 0.15, 0.5, 0.77}) {
    for (int m = 1; m <= 3; ++m) {
      double fd = testref::fd_rich([](const Point& p) { return bump_g(p[0], 0); }, Point{t},
                                   MultiIndex(std::vector<int>{m}), 2e-3);
      CHECK(bump_g(t, m) == doctest::Approx(fd).epsilon(2e-5));
    }
  }
}

TEST_CASE("derivatives decay to zero at the support boundary") {
  for (int m = 0; m <= 4; ++m) {
    CHECK(std::abs(bump_g(0.999999, m)) < 1e-100);
    CHECK(std::isfinite(bump_g(1.0 - 1e-13, m)));
  }
}

TEST_CASE("plateau cutoff: flat top, compact support, smooth shoulder") {
  for (double t : {-0.5, -0.2, 0.0, 0.31, 0.5}) {
    CHECK(plateau(t, 0) == 1.0);
    for (int m = 1; m <= 4; ++m) CHECK(plateau(t, m) == 0.0);
  }
  for (double t : {-1.0, 1.0, 1.4}) {
    for (int m = 0; m <= 4; ++m) CHECK(plateau(t, m) == 0.0);
  }
  for (double t : {0.55, 0.7, 0.85, 0.97}) {
    CHECK(plateau(t, 0) > 0.0);
    CHECK(plateau(t, 0) < 1.0);
    CHECK(plateau(t, 0) == doctest::Approx(plateau(-t, 0)).epsilon(1e-14));
    for (int m = 1; m <= 3; ++m) {
      // the shoulder has structure at scale ~1/140 near t = 0.97, so the
      // Richardson step has to sit well below it
      double fd = testref::fd_rich([](const Point& p) { return plateau(p[0], 0); }, Point{t},
                                   MultiIndex(std::vector<int>{m}), 1e-3);
      CHECK(plateau(t, m) == doctest::Approx(fd).epsilon(3e-5));
    }
  }
  // monotone on the shoulder
  double prev = plateau(0.5, 0);
  for (double t = 0.52; t < 1.0; t += 0.02) {
    double cur = plateau(t, 0);
    CHECK(cur <= prev + 1e-15);
    prev = cur;
  }
}

TEST_CASE("tensor bump matches the product of axis bumps") {
  Rng rng(21);
  for (int trial = 0; trial < 50; ++trial) {
    int n = 1 + rng.index(3);
    Point x = Point::zero(n);
    for (int j = 0; j < n; ++j) x[j] = rng.uniform(-0.95, 0.95);
    double ref = 1.0;
    for (int j = 0; j < n; ++j) ref *= bump_g(x[j], 0);
    CHECK(phi0(x, MultiIndex(n)) == doctest::Approx(ref).epsilon(1e-13));
    // one mixed derivative per draw
    std::vector<int> e(static_cast<std::size_t>(n), 0);
    e[static_cast<std::size_t>(rng.index(n))] = 1 + rng.index(2);
    MultiIndex a(e);
    double want = 1.0;
    for (int j = 0; j < n; ++j) want *= bump_g(x[j], a[j]);
    CHECK(phi0(x, a) == doctest::Approx(want).epsilon(1e-13));
  }
}

TEST_CASE("scaled bump jet equals finite differences of the scaled bump") {
  Point c{0.3, -0.2};
  double radius = 0.7;
  Point x{0.5, 0.1};
  Jet J = scaled_bump_jet(c, radius, x, 3);
  auto value = [&](const Point& p) {
    double acc = 1.0;
    for (int j = 0; j < 2; ++j) acc *= bump_g((p[j] - c[j]) / radius, 0);
    return acc;
  };
  CHECK(J.value() == doctest::Approx(value(x)).epsilon(1e-12));
  for (const MultiIndex& a : enumerate_multiindices(2, 2)) {
    if (a.is_zero()) continue;
    double fd = testref::fd_rich(value, x, a, 4e-3);
    CHECK(J.coeff(a) == doctest::Approx(fd).epsilon(2e-5));
  }
}

TEST_CASE("plateau variant reproduces an exact 1 at the center region") {
  Point c{0.0};
  Jet J = scaled_bump_jet(c, 1.0, Point{0.2}, 4, true);
  CHECK(J.value() == 1.0);
  for (const auto& [a, v] : J.coeffs)
    if (!a.is_zero()) CHECK(v == 0.0);
}

TEST_CASE("composition with exp against a Leibniz recurrence") {
  // independent oracle: derivatives of e(x) = exp(F(x)) in one variable from
  // e' = F' e, via the product rule on derivative stacks
  Rng rng(22);
  for (int trial = 0; trial < 100; ++trial) {
    int deg = 1 + rng.index(5);
    Jet F = testref::random_jet(rng, Point{rng.uniform(-1, 1)}, deg, 1.5, 1.0);
    std::vector<double> fd(static_cast<std::size_t>(deg) + 1, 0.0);
    for (int m = 0; m <= deg; ++m) fd[static_cast<std::size_t>(m)] = F.coeff(MultiIndex(std::vector<int>{m}));
    std::vector<double> e(static_cast<std::size_t>(deg) + 1, 0.0);
    e[0] = std::exp(fd[0]);
    for (int m = 0; m < deg; ++m) {
      double acc = 0.0;
      for (int k = 0; k <= m; ++k) acc += binomial(m, k) * fd[static_cast<std::size_t>(k + 1)] * e[static_cast<std::size_t>(m - k)];
      e[static_cast<std::size_t>(m + 1)] = acc;
    }
    Jet C = compose_jet(F, [&](int k) {
      (void)k;
      return std::exp(F.value());
    });
    for (int m = 0; m <= deg; ++m)
      CHECK(C.coeff(MultiIndex(std::vector<int>{m})) ==
            doctest::Approx(e[static_cast<std::size_t>(m)]).epsilon(1e-10));
  }
}

TEST_CASE("composition with t^3 against repeated jet products") {
  Rng rng(23);
  for (int trial = 0; trial < 60; ++trial) {
    int n = 1 + rng.index(2);
    Jet F = testref::random_jet(rng, Point::zero(n), 4, 1.0, 1.0);
    double v = F.value();
    Jet cube = jet_multiply(F, jet_multiply(F, F));
    auto h = [&](int k) {
      switch (k) {
        case 0: return v * v * v;
        case 1: return 3 * v * v;
        case 2: return 6 * v;
        case 3: return 6.0;
        default: return 0.0;
      }
    };
    Jet C = compose_jet(F, h);
    for (const auto& [a, c] : cube.coeffs) CHECK(C.coeff(a) == doctest::Approx(c).epsilon(1e-9));
  }
}

TEST_CASE("square root jet at value 4 with unit slope") {
  Jet F = JetBuilder(Point{4.0}, 2)
              .set(MultiIndex(std::vector<int>{0}), 4.0)
              .set(MultiIndex(std::vector<int>{1}), 1.0)
              .build();
  Jet R = power_jet(F, 0.5);
  CHECK(R.value() == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(R.coeff(MultiIndex(std::vector<int>{1})) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(R.coeff(MultiIndex(std::vector<int>{2})) == doctest::Approx(-1.0 / 32.0).epsilon(1e-12));
}

TEST_CASE("power jet algebraic identities") {
  Rng rng(24);
  for (int trial = 0; trial < 100; ++trial) {
    int n = 1 + rng.index(2);
    int deg = 1 + rng.index(3);
    Jet F = testref::random_jet(rng, Point::zero(n), deg, 0.8, 1.0);
    // force a safely positive value
    JetBuilder b(F.basepoint, deg);
    for (const auto& [a, c] : F.coeffs)
      if (!a.is_zero()) b.set(a, c);
    b.set(MultiIndex(n), rng.uniform(0.5, 3.0));
    F = b.build();

    Jet ident = power_jet(F, 1.0);
    for (const auto& [a, c] : F.coeffs) CHECK(ident.coeff(a) == doctest::Approx(c).epsilon(1e-12));

    Jet sq = power_jet(F, 2.0);
    Jet sq_ref = jet_multiply(F, F);
    for (const auto& [a, c] : sq_ref.coeffs) CHECK(sq.coeff(a) == doctest::Approx(c).epsilon(1e-10));

    Jet cb = power_jet(F, 3.0);
    Jet cb_ref = jet_multiply(F, jet_multiply(F, F));
    for (const auto& [a, c] : cb_ref.coeffs) CHECK(cb.coeff(a) == doctest::Approx(c).epsilon(1e-10));

    double r1 = rng.uniform(0.2, 0.9), r2 = rng.uniform(0.3, 1.5);
    Jet two_step = power_jet(power_jet(F, r1), r2);
    Jet one_step = power_jet(F, r1 * r2);
    for (const auto& [a, c] : one_step.coeffs) CHECK(two_step.coeff(a) == doctest::Approx(c).epsilon(1e-9));
  }
}

TEST_CASE("power jet scale homogeneity reaches the log-magnitude route") {
  // (c F)^r = c^r F^r exactly; with c = 1e-200 the direct v^(r-k) factors
  // overflow, so this exercises the guarded assembly
  Jet F = JetBuilder(Point{0.0}, 3)
              .set(MultiIndex(std::vector<int>{0}), 2.0)
              .set(MultiIndex(std::vector<int>{1}), -1.0)
              .set(MultiIndex(std::vector<int>{2}), 0.5)
              .set(MultiIndex(std::vector<int>{3}), 3.0)
              .build();
  double c = 1e-200;
  Jet big = power_jet(F, 0.5);
  Jet tiny = power_jet(jet_scale(F, c), 0.5);
  double root = std::sqrt(c);
  for (const auto& [a, v] : big.coeffs) {
    CHECK(std::isfinite(tiny.coeff(a)));
    CHECK(tiny.coeff(a) == doctest::Approx(root * v).epsilon(1e-9));
  }
}

TEST_CASE("power jet domain errors and zero handling") {
  Jet neg = constant_jet(Point{0.0}, 1, -1.0);
  CHECK_THROWS_AS((void)power_jet(neg, 0.5), std::domain_error);
  Jet zero = zero_jet(Point{0.0}, 2);
  Jet rz = power_jet(zero, 0.5);
  CHECK(rz.all_zero());
  Jet flatbad = JetBuilder(Point{0.0}, 1).set(MultiIndex(std::vector<int>{1}), 1.0).build();
  CHECK_THROWS_AS((void)power_jet(flatbad, 0.5), std::domain_error);
}

TEST_CASE("reciprocal jet inverts under multiplication") {
  Rng rng(25);
  for (int trial = 0; trial < 60; ++trial) {
    int n = 1 + rng.index(2);
    int deg = 1 + rng.index(3);
    Jet F = testref::random_jet(rng, Point::zero(n), deg, 1.0, 1.0);
    JetBuilder b(F.basepoint, deg);
    for (const auto& [a, c] : F.coeffs)
      if (!a.is_zero()) b.set(a, c);
    b.set(MultiIndex(n), rng.uniform(0.5, 2.0) * (rng.u01() < 0.5 ? -1.0 : 1.0));
    F = b.build();
    Jet R = reciprocal_jet(F);
    Jet unit = jet_multiply(F, R);
    CHECK(unit.value() == doctest::Approx(1.0).epsilon(1e-12));
    for (const auto& [a, c] : unit.coeffs)
      if (!a.is_zero()) CHECK(std::abs(c) < 1e-10);
  }
  CHECK_THROWS_AS((void)reciprocal_jet(zero_jet(Point{0.0}, 1)), std::domain_error);
}

TEST_CASE("faa di bruno matches finite differences through a bump") {
  OraclePtr F = sum_oracle({1.0, 0.5}, {bump_oracle(Point{0.0, 0.0}, 1.5), bump_oracle(Point{0.4, -0.3}, 1.0)});
  auto valr = [&](const Point& p) { return std::pow(F->value_at(p) + 2.0, 0.7); };
  for (const Point& x : {Point{0.1, 0.2}, Point{-0.3, 0.05}, Point{0.45, -0.4}}) {
    Jet J = F->jet_at(x, 3);
    Jet shifted = jet_add(J, constant_jet(x, 3, 2.0));
    Jet R = power_jet(shifted, 0.7);
    for (const MultiIndex& a : enumerate_multiindices(2, 3)) {
      if (a.order() == 0) continue;
      double fd = testref::fd_rich(valr, x, a, 2e-2);
      double scale = std::max(1.0, std::abs(R.coeff(a)));
      CHECK(std::abs(R.coeff(a) - fd) / scale < 1e-4);
    }
  }
}
