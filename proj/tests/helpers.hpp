#pragma once

#include <cmath>
#include <random>

#include "afmass/types.hpp"

namespace testing_support {

inline bool rel_close(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

inline afmass::Vec random_direction(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> g;
  afmass::Vec v(n);
  for (int k = 0; k < n; ++k) v(k) = g(rng);
  return v / v.norm();
}

}  // namespace testing_support
