#include "flatjet/oracle.hpp"

#include <cmath>

#include "flatjet/bump.hpp"
#include "flatjet/faa_di_bruno.hpp"

namespace flatjet {

namespace {

class BumpOracle final : public JetOracle {
 public:
  BumpOracle(Point center, double radius) : center_(center), radius_(radius) {
    if (!(radius > 0.0)) throw std::invalid_argument("bump_oracle: radius must be positive");
  }
  int dim() const override { return center_.dim(); }
  Box domain() const override { return Box::whole(dim()); }
  Jet jet_at(const Point& x, int order) const override { return scaled_bump_jet(center_, radius_, x, order); }
  double value_at(const Point& x) const override { return scaled_bump_value(center_, radius_, x); }

 private:
  Point center_;
  double radius_;
};

class PolynomialOracle final : public JetOracle {
 public:
  explicit PolynomialOracle(Jet global) : global_(std::move(global)) {}
  int dim() const override { return global_.dim(); }
  Box domain() const override { return Box::whole(dim()); }
  Jet jet_at(const Point& x, int order) const override {
    Jet at_x = jet_recenter(global_, x);
    if (order == at_x.degree) return at_x;
    JetBuilder b(x, order);
    for (const auto& [a, c] : at_x.coeffs)
      if (a.order() <= order) b.set(a, c);
    return b.build();
  }
  double value_at(const Point& x) const override { return jet_eval(global_, x); }

 private:
  Jet global_;
};

class ProductOracle final : public JetOracle {
 public:
  explicit ProductOracle(std::vector<OraclePtr> factors) : factors_(std::move(factors)) {
    if (factors_.empty()) throw std::invalid_argument("product_oracle: no factors");
    for (const auto& f : factors_)
      if (f->dim() != dim()) throw std::invalid_argument("product_oracle: dim mismatch");
  }
  int dim() const override { return factors_.front()->dim(); }
  Box domain() const override { return factors_.front()->domain(); }
  Jet jet_at(const Point& x, int order) const override {
    Jet acc = factors_.front()->jet_at(x, order);
    for (std::size_t i = 1; i < factors_.size(); ++i) acc = jet_multiply(acc, factors_[i]->jet_at(x, order));
    return acc;
  }
  double value_at(const Point& x) const override {
    double v = 1.0;
    for (const auto& f : factors_) {
      v *= f->value_at(x);
      if (v == 0.0) return 0.0;
    }
    return v;
  }

 private:
  std::vector<OraclePtr> factors_;
};

class SumOracle final : public JetOracle {
 public:
  SumOracle(std::vector<double> w, std::vector<OraclePtr> terms) : w_(std::move(w)), terms_(std::move(terms)) {
    if (terms_.empty() || w_.size() != terms_.size()) throw std::invalid_argument("sum_oracle: shape mismatch");
    for (const auto& t : terms_)
      if (t->dim() != dim()) throw std::invalid_argument("sum_oracle: dim mismatch");
  }
  int dim() const override { return terms_.front()->dim(); }
  Box domain() const override { return terms_.front()->domain(); }
  Jet jet_at(const Point& x, int order) const override {
    Jet acc = jet_scale(terms_.front()->jet_at(x, order), w_.front());
    for (std::size_t i = 1; i < terms_.size(); ++i)
      acc = jet_add(acc, jet_scale(terms_[i]->jet_at(x, order), w_[i]));
    return acc;
  }
  double value_at(const Point& x) const override {
    double v = 0.0;
    for (std::size_t i = 0; i < terms_.size(); ++i) v += w_[i] * terms_[i]->value_at(x);
    return v;
  }

 private:
  std::vector<double> w_;
  std::vector<OraclePtr> terms_;
};

class PowerOracle final : public JetOracle {
 public:
  PowerOracle(OraclePtr base, double r) : base_(std::move(base)), r_(r) {}
  int dim() const override { return base_->dim(); }
  Box domain() const override { return base_->domain(); }
  Jet jet_at(const Point& x, int order) const override { return power_jet(base_->jet_at(x, order), r_); }
  double value_at(const Point& x) const override { return std::pow(base_->value_at(x), r_); }

 private:
  OraclePtr base_;
  double r_;
};

class AbsPowerOracle final : public JetOracle {
 public:
  AbsPowerOracle(Point center, double p) : center_(center), p_(p) {
    if (!(p > 0.0)) throw std::invalid_argument("abs_power_oracle: exponent must be positive");
  }
  int dim() const override { return center_.dim(); }
  Box domain() const override { return Box::whole(dim()); }
  Jet jet_at(const Point& x, int order) const override {
    double d = dist(x, center_);
    if (d < 1e-12) {
      // all derivatives of orders below p vanish at the center
      if (order >= p_) throw std::domain_error("abs_power_oracle: derivative order >= exponent at center");
      return zero_jet(x, order);
    }
    // squared-distance polynomial raised to p/2
    JetBuilder sq(x, order);
    MultiIndex zero(dim());
    sq.set(zero, d * d);
    for (int j = 0; j < dim(); ++j) {
      std::vector<int> e(dim(), 0);
      e[j] = 1;
      if (order >= 1) sq.set(MultiIndex(e), 2.0 * (x[j] - center_[j]));
      e[j] = 2;
      if (order >= 2) sq.set(MultiIndex(e), 2.0);
    }
    return power_jet(sq.build(), p_ / 2.0);
  }
  double value_at(const Point& x) const override { return std::pow(dist(x, center_), p_); }

 private:
  Point center_;
  double p_;
};

}  // namespace

OraclePtr bump_oracle(Point center, double radius) { return std::make_shared<BumpOracle>(center, radius); }
OraclePtr polynomial_oracle(Jet global) { return std::make_shared<PolynomialOracle>(std::move(global)); }
OraclePtr product_oracle(std::vector<OraclePtr> factors) { return std::make_shared<ProductOracle>(std::move(factors)); }
OraclePtr sum_oracle(std::vector<double> weights, std::vector<OraclePtr> terms) {
  return std::make_shared<SumOracle>(std::move(weights), std::move(terms));
}
OraclePtr power_oracle(OraclePtr base, double r) { return std::make_shared<PowerOracle>(std::move(base), r); }
OraclePtr abs_power_oracle(Point center, double p) { return std::make_shared<AbsPowerOracle>(center, p); }

}  // namespace flatjet
