#pragma once

#include <Eigen/Dense>

#include <vector>

namespace afmass {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Metric components and coordinate derivatives at one chart point.
///   first[k]          = d_k g_ij
///   second[k * n + l] = d_k d_l g_ij   (symmetric in k, l)
struct MetricJet {
  Mat g;
  std::vector<Mat> first;
  std::vector<Mat> second;

  int dimension() const { return static_cast<int>(g.rows()); }
  const Mat& d(int k) const { return first[k]; }
  const Mat& dd(int k, int l) const { return second[k * dimension() + l]; }
};

/// Value, gradient and Hessian of a scalar field at one point.
struct FieldJet {
  double value = 0.0;
  Vec grad;
  Mat hess;
};

}  // namespace afmass
