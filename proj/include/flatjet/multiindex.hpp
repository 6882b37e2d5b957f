#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace flatjet {

// Hard caps baked into the storage types: dimensions beyond 4 and orders
// beyond 8 are rejected at construction everywhere in the library.
inline constexpr int kMaxDim = 4;
inline constexpr int kMaxOrder = 8;

// Exponent vector of a partial derivative / monomial. Value type: fits in a
// register, no heap. Canonical order is graded lexicographic: lower total
// order first, and within a grade the lexicographically larger tuple first,
// so for n=2 grade 1 lists (1,0) before (0,1).
struct MultiIndex {
  std::array<std::int8_t, kMaxDim> e{0, 0, 0, 0};
  std::int8_t n = 0;

  MultiIndex() = default;

  explicit MultiIndex(int dim) : n(static_cast<std::int8_t>(dim)) {
    if (dim < 1 || dim > kMaxDim) throw std::invalid_argument("MultiIndex: dim out of range");
  }

  explicit MultiIndex(const std::vector<int>& entries) : MultiIndex(static_cast<int>(entries.size())) {
    for (int j = 0; j < n; ++j) {
      if (entries[j] < 0 || entries[j] > kMaxOrder) throw std::invalid_argument("MultiIndex: entry out of range");
      e[j] = static_cast<std::int8_t>(entries[j]);
    }
  }

  int dim() const { return n; }
  int operator[](int j) const { return e[j]; }

  int order() const {
    int s = 0;
    for (int j = 0; j < n; ++j) s += e[j];
    return s;
  }

  bool is_zero() const { return order() == 0; }

  MultiIndex plus(const MultiIndex& b) const {
    MultiIndex r(*this);
    for (int j = 0; j < n; ++j) r.e[j] = static_cast<std::int8_t>(e[j] + b.e[j]);
    return r;
  }

  // Componentwise subtraction; false when any entry would go negative.
  bool minus(const MultiIndex& b, MultiIndex& out) const {
    out = *this;
    for (int j = 0; j < n; ++j) {
      if (e[j] < b.e[j]) return false;
      out.e[j] = static_cast<std::int8_t>(e[j] - b.e[j]);
    }
    return true;
  }

  bool leq(const MultiIndex& b) const {
    for (int j = 0; j < n; ++j)
      if (e[j] > b.e[j]) return false;
    return true;
  }

  bool operator==(const MultiIndex& b) const {
    if (n != b.n) return false;
    for (int j = 0; j < n; ++j)
      if (e[j] != b.e[j]) return false;
    return true;
  }
  bool operator!=(const MultiIndex& b) const { return !(*this == b); }

  std::string str() const {
    std::string s;
    for (int j = 0; j < n; ++j) {
      if (j) s += ',';
      s += std::to_string(static_cast<int>(e[j]));
    }
    return s;
  }
};

// Canonical (graded-lex) strict order, see MultiIndex doc comment.
inline bool grlex_less(const MultiIndex& a, const MultiIndex& b) {
  int oa = a.order(), ob = b.order();
  if (oa != ob) return oa < ob;
  for (int j = 0; j < a.n; ++j)
    if (a.e[j] != b.e[j]) return a.e[j] > b.e[j];
  return false;
}

struct GrlexLess {
  bool operator()(const MultiIndex& a, const MultiIndex& b) const { return grlex_less(a, b); }
};

// All multi-indices in n variables with order <= max_order, canonical order.
std::vector<MultiIndex> enumerate_multiindices(int n, int max_order);

// Number of multi-indices in n variables of order <= d, i.e. C(n+d, n).
long long monomial_count(int n, int d);

long long binomial(int n, int k);

inline double factorial(int k) {
  static const double table[] = {1, 1, 2, 6, 24, 120, 720, 5040, 40320};
  if (k < 0 || k > kMaxOrder) throw std::invalid_argument("factorial: order out of range");
  return table[k];
}

inline double mi_factorial(const MultiIndex& a) {
  double f = 1.0;
  for (int j = 0; j < a.n; ++j) f *= factorial(a.e[j]);
  return f;
}

// Product of per-axis binomials C(a_j, b_j); requires b <= a componentwise.
inline double mi_binomial(const MultiIndex& a, const MultiIndex& b) {
  double f = 1.0;
  for (int j = 0; j < a.n; ++j) f *= static_cast<double>(binomial(a.e[j], b.e[j]));
  return f;
}

}  // namespace flatjet
