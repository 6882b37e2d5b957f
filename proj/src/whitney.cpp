#include "flatjet/whitney.hpp"

#include <cmath>

#include "flatjet/bump.hpp"
#include "flatjet/faa_di_bruno.hpp"

namespace flatjet {

namespace {

bool boxes_touch(const Box& a, const Box& b, double slack) {
  for (int j = 0; j < a.dim(); ++j)
    if (a.hi[j] < b.lo[j] - slack || b.hi[j] < a.lo[j] - slack) return false;
  return true;
}

}  // namespace

WhitneyDecomposition::WhitneyDecomposition(std::vector<Point> points, const Box& bound_box, int max_level)
    : points_(std::move(points)) {
  n_ = bound_box.dim();
  if (n_ < 1 || n_ > kMaxDim) throw std::invalid_argument("whitney_decompose: dim out of range");
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (points_[i].dim() != n_) throw std::invalid_argument("whitney_decompose: point dim mismatch");
    if (!bound_box.contains(points_[i])) throw std::invalid_argument("whitney_decompose: point outside bound box");
    for (std::size_t k = 0; k < i; ++k)
      if (points_[k] == points_[i]) throw std::invalid_argument("whitney_decompose: duplicate point");
  }
  if (max_level < 0 || max_level > kDefaultMaxLevel) throw std::invalid_argument("whitney_decompose: bad max level");

  // level-0 lattice over the bound box inflated by 3 units
  covered_ = Box{std::vector<double>(static_cast<std::size_t>(n_)), std::vector<double>(static_cast<std::size_t>(n_))};
  for (int j = 0; j < n_; ++j) {
    root_lo_[j] = static_cast<std::int64_t>(std::floor(bound_box.lo[j] - 3.0));
    root_hi_[j] = static_cast<std::int64_t>(std::floor(bound_box.hi[j] + 3.0));
    covered_.lo[j] = static_cast<double>(root_lo_[j]);
    covered_.hi[j] = static_cast<double>(root_hi_[j] + 1);
  }

  std::array<std::int64_t, kMaxDim> z = root_lo_;
  while (true) {
    DyadicCube root;
    root.level = 0;
    root.n = n_;
    root.anchor = z;
    nodes_.push_back(Node{root, -1, -1});
    roots_[z] = static_cast<std::int32_t>(nodes_.size() - 1);
    int j = n_ - 1;
    while (j >= 0 && z[j] == root_hi_[j]) z[j] = root_lo_[j], --j;
    if (j < 0) break;
    ++z[j];
  }
  // recursion may grow nodes_; iterate over a snapshot of root indices
  std::vector<std::int32_t> root_idx;
  for (const auto& [anchor, idx] : roots_) root_idx.push_back(idx);
  for (std::int32_t idx : root_idx) build(idx, max_level);

  // representatives
  auto pick = [&](const Box& b, const Point& c) {
    int best = -1;
    for (std::size_t i = 0; i < points_.size(); ++i) {
      if (!b.contains(points_[i])) continue;
      if (best < 0) {
        best = static_cast<int>(i);
        continue;
      }
      double di = dist(points_[i], c), db = dist(points_[static_cast<std::size_t>(best)], c);
      if (di < db) {
        best = static_cast<int>(i);
      } else if (di == db) {
        // tie: graded-lex on coordinates (sum first, then lexicographic)
        const Point &p = points_[i], &q = points_[static_cast<std::size_t>(best)];
        double sp = 0, sq = 0;
        for (int j = 0; j < n_; ++j) sp += p[j], sq += q[j];
        bool smaller = sp < sq;
        if (sp == sq)
          for (int j = 0; j < n_; ++j)
            if (p[j] != q[j]) {
              smaller = p[j] < q[j];
              break;
            }
        if (smaller) best = static_cast<int>(i);
      }
    }
    return best;
  };
  for (CubeEntry& e : leaves_) {
    Point c = e.cube.center();
    e.rep = pick(e.cube.dilated(3.0), c);
    if (e.rep < 0 && e.cube.level > 0) e.rep = pick(e.cube.parent().dilated(3.0), c);
  }
}

int WhitneyDecomposition::count_in_box(const Box& b) const {
  int c = 0;
  for (const Point& p : points_)
    if (b.contains(p)) ++c;
  return c;
}

void WhitneyDecomposition::build(std::int32_t node_index, int max_level) {
  DyadicCube cube = nodes_[static_cast<std::size_t>(node_index)].cube;
  if (count_in_box(cube.dilated(3.0)) <= 1) {
    nodes_[static_cast<std::size_t>(node_index)].leaf_index = static_cast<std::int32_t>(leaves_.size());
    leaves_.push_back(CubeEntry{cube, -1});
    return;
  }
  if (cube.level >= max_level)
    throw std::domain_error("whitney_decompose: refinement limit (points too close or duplicated)");
  std::int32_t first = static_cast<std::int32_t>(nodes_.size());
  nodes_[static_cast<std::size_t>(node_index)].first_child = first;
  int kids = 1 << n_;
  for (int m = 0; m < kids; ++m) nodes_.push_back(Node{cube.child(m), -1, -1});
  for (int m = 0; m < kids; ++m) build(first + m, max_level);
}

bool WhitneyDecomposition::is_covered(const Point& x) const { return covered_.contains(x); }

int WhitneyDecomposition::containing_leaf(const Point& x) const {
  std::array<std::int64_t, kMaxDim> z{0, 0, 0, 0};
  for (int j = 0; j < n_; ++j) {
    z[j] = static_cast<std::int64_t>(std::floor(x[j]));
    if (x[j] == static_cast<double>(root_hi_[j] + 1)) z[j] = root_hi_[j];  // closed top face
    if (z[j] < root_lo_[j] || z[j] > root_hi_[j]) return -1;
  }
  auto it = roots_.find(z);
  if (it == roots_.end()) return -1;
  std::int32_t idx = it->second;
  while (nodes_[static_cast<std::size_t>(idx)].first_child >= 0) {
    const DyadicCube& c = nodes_[static_cast<std::size_t>(idx)].cube;
    Point center = c.center();
    int mask = 0;
    for (int j = 0; j < n_; ++j)
      if (x[j] >= center[j]) mask |= 1 << j;
    idx = nodes_[static_cast<std::size_t>(idx)].first_child + mask;
  }
  return nodes_[static_cast<std::size_t>(idx)].leaf_index;
}

void WhitneyDecomposition::query(std::int32_t node_index, const Box& b, std::vector<int>& out) const {
  const Node& node = nodes_[static_cast<std::size_t>(node_index)];
  // any descendant's 1.1-dilation lies inside this cube's 1.1-dilation
  if (!boxes_touch(node.cube.dilated(1.1), b, kTouchSlack)) return;
  if (node.first_child < 0) {
    out.push_back(node.leaf_index);
    return;
  }
  for (int m = 0; m < (1 << n_); ++m) query(node.first_child + m, b, out);
}

std::vector<int> WhitneyDecomposition::touching(int leaf) const {
  const DyadicCube& cube = leaves_[static_cast<std::size_t>(leaf)].cube;
  Box target = cube.dilated(1.0);
  std::vector<int> cand, out;
  for (const auto& [anchor, idx] : roots_) query(idx, target, cand);
  for (int c : cand)
    if (c != leaf && boxes_touch(leaves_[static_cast<std::size_t>(c)].cube.dilated(1.0), target, kTouchSlack))
      out.push_back(c);
  return out;
}

void WhitneyDecomposition::active_leaves(const Point& x, std::vector<int>& out) const {
  out.clear();
  std::vector<int> cand;
  Box b{x.to_vector(), x.to_vector()};
  // A leaf bump reaching x extends at most 0.05 of a unit past its root, so
  // only the <= 2^n roots within that margin of x can contribute.
  std::array<std::int64_t, kMaxDim> zlo{0, 0, 0, 0};
  std::array<int, kMaxDim> span{0, 0, 0, 0};
  for (int j = 0; j < n_; ++j) {
    zlo[j] = std::max(root_lo_[j], static_cast<std::int64_t>(std::floor(x[j] - 0.06)));
    std::int64_t top = std::min(root_hi_[j], static_cast<std::int64_t>(std::floor(x[j] + 0.06)));
    span[j] = static_cast<int>(top - zlo[j]);
    if (span[j] < 0) return;
  }
  std::array<std::int64_t, kMaxDim> z = zlo;
  while (true) {
    auto it = roots_.find(z);
    if (it != roots_.end()) query(it->second, b, cand);
    int j = n_ - 1;
    while (j >= 0 && z[j] == zlo[j] + span[j]) z[j] = zlo[j], --j;
    if (j < 0) break;
    ++z[j];
  }
  for (int c : cand) {
    const DyadicCube& cube = leaves_[static_cast<std::size_t>(c)].cube;
    Box s = cube.dilated(1.1);
    bool open = true;
    for (int j = 0; j < n_; ++j)
      if (x[j] <= s.lo[j] || x[j] >= s.hi[j]) {
        open = false;
        break;
      }
    if (open) out.push_back(c);
  }
}

double WhitneyDecomposition::phi(int leaf, const Point& x) const {
  const DyadicCube& cube = leaves_[static_cast<std::size_t>(leaf)].cube;
  return scaled_bump_value(cube.center(), 0.55 * cube.side(), x);
}

Jet WhitneyDecomposition::phi_jet(int leaf, const Point& x, int order) const {
  const DyadicCube& cube = leaves_[static_cast<std::size_t>(leaf)].cube;
  return scaled_bump_jet(cube.center(), 0.55 * cube.side(), x, order);
}

double WhitneyDecomposition::pou_sum(const Point& x) const {
  std::vector<int> act;
  active_leaves(x, act);
  double s = 0.0;
  for (int leaf : act) s += phi(leaf, x);
  return s;
}

WhitneyDecomposition whitney_decompose(const std::vector<Point>& E, const Box& bound_box, int max_level) {
  return WhitneyDecomposition(E, bound_box, max_level);
}

SingleJetExtension::SingleJetExtension(Jet P, const Smoothness& sm) : x0_(P.basepoint), P_(std::move(P)) {
  double v = P_.value();
  if (v < 0.0) throw std::domain_error("single_jet_extend: negative value");
  double sup = gamma_sup_part(P_, sm);
  double flat = gamma_flat_part(P_, sm);
  if (std::isinf(flat)) throw std::domain_error("single_jet_extend: zero value with nonzero jet (no finite bound)");
  double M = std::max(sup, flat);
  if (M == 0.0) return;  // zero jet -> zero map
  zero_ = false;
  double delta = std::pow(v / M, 1.0 / sm.s);
  radius_ = c0_constant(P_.dim(), sm, 0.5) * std::min(delta, 1.0) / std::sqrt(static_cast<double>(P_.dim()));
}

Jet SingleJetExtension::jet_at(const Point& x, int order) const {
  if (zero_) return zero_jet(x, order);
  for (int j = 0; j < dim(); ++j)
    if (std::abs(x[j] - x0_[j]) >= radius_) return zero_jet(x, order);
  Jet theta = scaled_bump_jet(x0_, radius_, x, order, /*plateau_variant=*/true);
  Jet P_at_x = jet_with_degree(jet_recenter(P_, x), order);
  return jet_multiply(theta, P_at_x);
}

double SingleJetExtension::value_at(const Point& x) const {
  if (zero_) return 0.0;
  double theta = scaled_bump_value(x0_, radius_, x, /*plateau_variant=*/true);
  return theta == 0.0 ? 0.0 : theta * jet_eval(P_, x);
}

std::shared_ptr<const SingleJetExtension> single_jet_extend(const Jet& P, const Smoothness& sm) {
  return std::make_shared<SingleJetExtension>(P, sm);
}

namespace {

Box default_bound_box(const WhitneyField& field) {
  if (field.entries.empty()) throw std::invalid_argument("whitney_extend: empty field");
  int n = field.dim();
  Box b{std::vector<double>(static_cast<std::size_t>(n)), std::vector<double>(static_cast<std::size_t>(n))};
  for (int j = 0; j < n; ++j) {
    double lo = field.entries.front().first[j], hi = lo;
    for (const auto& [p, jet] : field.entries) {
      lo = std::min(lo, p[j]);
      hi = std::max(hi, p[j]);
    }
    b.lo[j] = lo - 1.0;
    b.hi[j] = hi + 1.0;
  }
  return b;
}

std::vector<Point> field_points(const WhitneyField& field) {
  std::vector<Point> pts;
  pts.reserve(field.entries.size());
  for (const auto& [p, jet] : field.entries) pts.push_back(p);
  return pts;
}

}  // namespace

Extension::Extension(WhitneyField field, const Smoothness& sm, const Box& bound_box, int max_level)
    : field_(std::move(field)), sm_(sm), decomp_(field_points(field_), bound_box, max_level) {
  if (field_.entries.empty()) throw std::invalid_argument("whitney_extend: empty field");
  if (field_.degree() != sm.floor_s) throw std::invalid_argument("whitney_extend: field degree must equal floor(s)");
  point_ext_.reserve(field_.entries.size());
  for (const auto& [p, jet] : field_.entries) point_ext_.push_back(single_jet_extend(jet, sm));
}

Jet Extension::jet_at(const Point& x, int order) const {
  if (!decomp_.is_covered(x)) throw std::domain_error("extension: point outside covered box");
  std::vector<int> act;
  decomp_.active_leaves(x, act);
  Jet numerator = zero_jet(x, order);
  Jet denom = zero_jet(x, order);
  for (int leaf : act) {
    Jet phi = decomp_.phi_jet(leaf, x, order);
    denom = jet_add(denom, phi);
    int rep = decomp_.leaves()[static_cast<std::size_t>(leaf)].rep;
    if (rep < 0) continue;
    Jet local = point_ext_[static_cast<std::size_t>(rep)]->jet_at(x, order);
    if (local.all_zero()) continue;
    numerator = jet_add(numerator, jet_multiply(phi, local));
  }
  return jet_multiply(numerator, reciprocal_jet(denom));
}

double Extension::value_at(const Point& x) const {
  if (!decomp_.is_covered(x)) throw std::domain_error("extension: point outside covered box");
  std::vector<int> act;
  decomp_.active_leaves(x, act);
  double num = 0.0, den = 0.0;
  for (int leaf : act) {
    double phi = decomp_.phi(leaf, x);
    den += phi;
    int rep = decomp_.leaves()[static_cast<std::size_t>(leaf)].rep;
    if (rep < 0 || phi == 0.0) continue;
    num += phi * point_ext_[static_cast<std::size_t>(rep)]->value_at(x);
  }
  return num / den;
}

std::shared_ptr<const Extension> whitney_extend(const WhitneyField& field, const Smoothness& sm) {
  return std::make_shared<Extension>(field, sm, default_bound_box(field));
}

std::shared_ptr<const Extension> whitney_extend(const WhitneyField& field, const Smoothness& sm,
                                                const Box& bound_box, int max_level) {
  return std::make_shared<Extension>(field, sm, bound_box, max_level);
}

}  // namespace flatjet
