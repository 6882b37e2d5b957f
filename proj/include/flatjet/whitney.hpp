#pragma once

#include <map>

#include "flatjet/norms.hpp"
#include "flatjet/oracle.hpp"
#include "flatjet/smoothness.hpp"

namespace flatjet {

// Half-open dyadic cube prod_j [z_j 2^-level, (z_j+1) 2^-level), level >= 0.
struct DyadicCube {
  int level = 0;
  std::array<std::int64_t, kMaxDim> anchor{0, 0, 0, 0};
  int n = 0;

  double side() const { return std::ldexp(1.0, -level); }

  Point center() const {
    Point c = Point::zero(n);
    for (int j = 0; j < n; ++j) c[j] = (static_cast<double>(anchor[j]) + 0.5) * side();
    return c;
  }

  // Concentric closed dilation (factor 3 -> the tripled cube, 1.1 -> the
  // partition-of-unity support).
  Box dilated(double factor) const {
    Box b{std::vector<double>(static_cast<std::size_t>(n)), std::vector<double>(static_cast<std::size_t>(n))};
    double h = side(), r = 0.5 * factor * h;
    for (int j = 0; j < n; ++j) {
      double c = (static_cast<double>(anchor[j]) + 0.5) * h;
      b.lo[j] = c - r;
      b.hi[j] = c + r;
    }
    return b;
  }

  bool contains(const Point& x) const {
    double h = side();
    for (int j = 0; j < n; ++j) {
      double lo = static_cast<double>(anchor[j]) * h;
      if (x[j] < lo || x[j] >= lo + h) return false;
    }
    return true;
  }

  DyadicCube parent() const {
    DyadicCube p;
    p.level = level - 1;
    p.n = n;
    for (int j = 0; j < n; ++j) p.anchor[j] = anchor[j] >> 1;
    return p;
  }

  DyadicCube child(int mask) const {
    DyadicCube c;
    c.level = level + 1;
    c.n = n;
    for (int j = 0; j < n; ++j) c.anchor[j] = 2 * anchor[j] + ((mask >> j) & 1);
    return c;
  }
};

struct CubeEntry {
  DyadicCube cube;
  int rep = -1;  // index into points(), -1 = zero map
};

// Finite dyadic decomposition of a box around a finite point set E: level-0
// lattice cubes over the inflated bounding box, each subdivided until its
// tripled cube holds at most one point of E.
class WhitneyDecomposition {
 public:
  static constexpr int kDefaultMaxLevel = 40;  // separation limit 2^-40
  static constexpr double kTouchSlack = 1e-12;

  WhitneyDecomposition(std::vector<Point> points, const Box& bound_box, int max_level = kDefaultMaxLevel);

  const std::vector<Point>& points() const { return points_; }
  const std::vector<CubeEntry>& leaves() const { return leaves_; }

  // Union of all cubes (a closed box; cubes tile it).
  const Box& covered() const { return covered_; }
  bool is_covered(const Point& x) const;

  int containing_leaf(const Point& x) const;  // -1 when uncovered

  // Leaves whose open 1.1-dilation contains x (the bumps positive at x).
  void active_leaves(const Point& x, std::vector<int>& out) const;

  // Leaves whose closed cube touches the closed cube of `leaf` (slack
  // kTouchSlack), excluding the leaf itself.
  std::vector<int> touching(int leaf) const;

  // Partition-of-unity ingredients: phi is the model bump scaled to support
  // 1.1Q, theta the normalized family.
  double phi(int leaf, const Point& x) const;
  Jet phi_jet(int leaf, const Point& x, int order) const;
  double pou_sum(const Point& x) const;

 private:
  struct Node {
    DyadicCube cube;
    std::int32_t first_child = -1;  // children contiguous, 2^n of them
    std::int32_t leaf_index = -1;
  };

  void build(std::int32_t node_index, int max_level);
  int count_in_box(const Box& b) const;
  void query(std::int32_t node_index, const Box& b, std::vector<int>& out) const;

  std::vector<Point> points_;
  std::vector<Node> nodes_;
  std::map<std::array<std::int64_t, kMaxDim>, std::int32_t> roots_;
  std::vector<CubeEntry> leaves_;
  std::array<std::int64_t, kMaxDim> root_lo_{0, 0, 0, 0}, root_hi_{0, 0, 0, 0};
  Box covered_{};
  int n_ = 0;
};

WhitneyDecomposition whitney_decompose(const std::vector<Point>& E, const Box& bound_box,
                                       int max_level = WhitneyDecomposition::kDefaultMaxLevel);

// Extension of one jet: theta * P with theta a plateau cutoff of support
// radius c0 * min(delta, 1) / sqrt(n), delta = (P(x0)/M)^(1/s), M the minimal
// cone bound of P. Reproduces the jet of P at x0 exactly and is nonnegative
// everywhere for cone members. The zero jet maps to the zero function; a zero
// value with nonvanishing coefficients has no finite cone bound and throws.
class SingleJetExtension final : public JetOracle {
 public:
  SingleJetExtension(Jet P, const Smoothness& sm);

  int dim() const override { return x0_.dim(); }
  Box domain() const override { return Box::whole(dim()); }
  Jet jet_at(const Point& x, int order) const override;
  double value_at(const Point& x) const override;

  bool is_zero_map() const { return zero_; }
  double support_radius() const { return radius_; }  // 0 for the zero map
  const Jet& jet() const { return P_; }

 private:
  Point x0_;
  Jet P_;
  double radius_ = 0.0;
  bool zero_ = true;
};

std::shared_ptr<const SingleJetExtension> single_jet_extend(const Jet& P, const Smoothness& sm);

// Whitney extension of a finite field: partition of unity over the
// decomposition, each cube carrying the single-jet extension of the jet at
// its representative point. Evaluation outside the covered box throws.
class Extension final : public JetOracle {
 public:
  Extension(WhitneyField field, const Smoothness& sm, const Box& bound_box,
            int max_level = WhitneyDecomposition::kDefaultMaxLevel);

  int dim() const override { return decomp_.covered().dim(); }
  Box domain() const override { return decomp_.covered(); }
  Jet jet_at(const Point& x, int order) const override;
  double value_at(const Point& x) const override;

  const WhitneyDecomposition& decomposition() const { return decomp_; }
  const WhitneyField& field() const { return field_; }
  const Smoothness& smoothness_spec() const { return sm_; }
  const SingleJetExtension& point_extension(int i) const { return *point_ext_[static_cast<std::size_t>(i)]; }

 private:
  WhitneyField field_;
  Smoothness sm_;
  WhitneyDecomposition decomp_;
  std::vector<std::shared_ptr<const SingleJetExtension>> point_ext_;
};

std::shared_ptr<const Extension> whitney_extend(const WhitneyField& field, const Smoothness& sm);
std::shared_ptr<const Extension> whitney_extend(const WhitneyField& field, const Smoothness& sm, const Box& bound_box,
                                                int max_level = WhitneyDecomposition::kDefaultMaxLevel);

// Exact derivatives of the extension at x (Leibniz over the active cubes).
inline Jet extension_jet(const Extension& F, const Point& x, int order) { return F.jet_at(x, order); }

}  // namespace flatjet
