#include "flatjet/multiindex.hpp"

namespace flatjet {

namespace {

// Within a grade, first component runs from the grade down to 0, recursing on
// the remaining axes; this realizes the canonical order directly.
void emit_grade(int n, int axis, int remaining, MultiIndex& scratch, std::vector<MultiIndex>& out) {
  if (axis == n - 1) {
    scratch.e[axis] = static_cast<std::int8_t>(remaining);
    out.push_back(scratch);
    return;
  }
  for (int v = remaining; v >= 0; --v) {
    scratch.e[axis] = static_cast<std::int8_t>(v);
    emit_grade(n, axis + 1, remaining - v, scratch, out);
  }
}

}  // namespace

std::vector<MultiIndex> enumerate_multiindices(int n, int max_order) {
  if (n < 1 || n > kMaxDim) throw std::invalid_argument("enumerate_multiindices: dim out of range");
  if (max_order < 0 || max_order > kMaxOrder) throw std::invalid_argument("enumerate_multiindices: order out of range");
  std::vector<MultiIndex> out;
  out.reserve(static_cast<std::size_t>(monomial_count(n, max_order)));
  MultiIndex scratch(n);
  for (int k = 0; k <= max_order; ++k) emit_grade(n, 0, k, scratch, out);
  return out;
}

long long binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  long long r = 1;
  for (int j = 1; j <= k; ++j) r = r * (n - k + j) / j;
  return r;
}

long long monomial_count(int n, int d) { return binomial(n + d, n); }

}  // namespace flatjet
