#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "afmass/types.hpp"

namespace afmass {

/// Area of the unit sphere S^{d} in R^{d+1}: 2 pi^{(d+1)/2} / Gamma((d+1)/2).
double unit_sphere_area(int d);

struct Rule1D {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Legendre rule with q nodes on [a, b].
Rule1D gauss_legendre(int q, double a = -1.0, double b = 1.0);

/// Gauss rule for the weight (1 - t^2)^{(k-1)/2} on [-1, 1]; with t = cos(phi)
/// it integrates f(phi) sin^k(phi) dphi over [0, pi].
Rule1D gauss_gegenbauer(int q, int k);

/// Tensor-product rule on the unit sphere S^{n-1} in the iterated-sine chart
///   x^1 = cos phi^1, x^2 = sin phi^1 cos phi^2, ..., x^n = sin phi^1 ... sin phi^{n-1}.
/// Polar angles use q Gauss nodes each (weight absorbed exactly), the azimuth 2q
/// trapezoid nodes. No node sits on a pole.
struct SphereGrid {
  int n = 0;
  int q = 0;                      // nodes per polar angle actually used
  std::vector<Vec> directions;    // unit vectors
  std::vector<Vec> angles;        // phi^1..phi^{n-1}
  std::vector<double> weights;    // flat area weights, sum = unit_sphere_area(n-1)
  std::size_t size() const { return weights.size(); }
};

/// Builds the grid, lowering q if needed so that the node count stays within
/// `node_budget` (0 means unlimited).
SphereGrid sphere_grid(int n, int q, std::size_t node_budget = 0);

/// Point on the unit sphere for the given angles.
Vec sphere_point(const Vec& angles);

/// Node budgets used by the sphere routines.
inline constexpr std::size_t kFirstOrderBudget = std::size_t{1} << 17;
inline constexpr std::size_t kSecondOrderBudget = std::size_t{1} << 16;

/// Worker count for the parallel loops (1 = serial). Set once by the CLI.
void set_thread_count(int threads);
int thread_count();

/// Runs body(i) for i in [0, count). Results must be written to per-index slots
/// so that reductions stay order-independent.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

/// Sums values in index order.
double ordered_sum(const std::vector<double>& values);

}  // namespace afmass
