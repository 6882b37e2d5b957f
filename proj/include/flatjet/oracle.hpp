#pragma once

#include <limits>
#include <memory>

#include "flatjet/jet.hpp"

namespace flatjet {

// Axis-aligned box, possibly unbounded. Declared evaluation domain of an
// oracle; norm sampling stays inside it.
struct Box {
  std::vector<double> lo, hi;

  int dim() const { return static_cast<int>(lo.size()); }

  bool contains(const Point& x, double slack = 0.0) const {
    for (int j = 0; j < x.dim(); ++j)
      if (x[j] < lo[j] - slack || x[j] > hi[j] + slack) return false;
    return true;
  }

  static Box whole(int n) {
    double inf = std::numeric_limits<double>::infinity();
    return Box{std::vector<double>(n, -inf), std::vector<double>(n, inf)};
  }

  static Box cube(int n, double lo_v, double hi_v) {
    return Box{std::vector<double>(n, lo_v), std::vector<double>(n, hi_v)};
  }
};

// A smooth function exposed through its jets: exact derivatives up to the
// requested order at any point of the domain. Implementations must be pure
// (safe to call concurrently).
class JetOracle {
 public:
  virtual ~JetOracle() = default;
  virtual int dim() const = 0;
  virtual Box domain() const = 0;
  virtual Jet jet_at(const Point& x, int order) const = 0;
  virtual double value_at(const Point& x) const { return jet_at(x, 0).value(); }
};

using OraclePtr = std::shared_ptr<const JetOracle>;

// x -> phi0((x - center)/radius), the tensor model bump on center + [-r, r]^n.
OraclePtr bump_oracle(Point center, double radius);

// Global polynomial given by one jet; evaluates anywhere by recentering.
OraclePtr polynomial_oracle(Jet global);

// Pointwise product of factors.
OraclePtr product_oracle(std::vector<OraclePtr> factors);

// Pointwise linear combination sum_i w_i * F_i.
OraclePtr sum_oracle(std::vector<double> weights, std::vector<OraclePtr> terms);

// F^r for a nonnegative base F; jets via the composition engine.
OraclePtr power_oracle(OraclePtr base, double r);

// x -> |x - center|^p. Jets only valid to orders < p at the center (which is
// all the norm machinery ever asks for); requesting more there throws.
OraclePtr abs_power_oracle(Point center, double p);

}  // namespace flatjet
