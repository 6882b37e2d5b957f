#pragma once

#include <cmath>
#include <stdexcept>

#include "flatjet/multiindex.hpp"

namespace flatjet {

// Smoothness exponent s > 0 together with the derived quantities used
// everywhere: floor_s is the largest integer STRICTLY below s (so jets carry
// orders 0..floor_s), sigma = s - floor_s lies in (0, 1].
struct Smoothness {
  double s;
  int floor_s;
  double sigma;
};

inline Smoothness smoothness(double s) {
  if (!(s > 0.0) || !std::isfinite(s)) throw std::invalid_argument("smoothness: s must be positive and finite");
  int f = static_cast<int>(std::ceil(s)) - 1;
  if (f > kMaxOrder) throw std::invalid_argument("smoothness: s too large (jet order cap is 8)");
  return Smoothness{s, f, s - f};
}

}  // namespace flatjet
