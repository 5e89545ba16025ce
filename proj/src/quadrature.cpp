#include "afmass/quadrature.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <numbers>
#include <thread>

#include "afmass/error.hpp"

namespace afmass {

double unit_sphere_area(int d) {
  const double half = 0.5 * (d + 1);
  return 2.0 * std::pow(std::numbers::pi, half) / std::tgamma(half);
}

namespace {

// Golub-Welsch for a monic recurrence with zero diagonal.
Rule1D symmetric_gauss(int q, double mu0, const std::function<double(int)>& beta) {
  if (q < 1) throw Error(ErrorKind::ConfigInvalid, "quadrature needs at least one node");
  Mat jacobi = Mat::Zero(q, q);
  for (int k = 1; k < q; ++k) {
    const double b = std::sqrt(beta(k));
    jacobi(k, k - 1) = b;
    jacobi(k - 1, k) = b;
  }
  Eigen::SelfAdjointEigenSolver<Mat> eig(jacobi);
  Rule1D rule;
  rule.nodes.resize(q);
  rule.weights.resize(q);
  for (int j = 0; j < q; ++j) {
    rule.nodes[j] = eig.eigenvalues()(j);
    const double v = eig.eigenvectors()(0, j);
    rule.weights[j] = mu0 * v * v;
  }
  // Symmetrize to remove eigen-solver noise.
  for (int j = 0; j < q / 2; ++j) {
    const int k = q - 1 - j;
    const double x = 0.5 * (rule.nodes[k] - rule.nodes[j]);
    const double w = 0.5 * (rule.weights[k] + rule.weights[j]);
    rule.nodes[j] = -x;
    rule.nodes[k] = x;
    rule.weights[j] = w;
    rule.weights[k] = w;
  }
  if (q % 2 == 1) rule.nodes[q / 2] = 0.0;
  return rule;
}

}  // namespace

Rule1D gauss_legendre(int q, double a, double b) {
  Rule1D rule = symmetric_gauss(q, 2.0, [](int k) {
    const double kk = static_cast<double>(k) * k;
    return kk / (4.0 * kk - 1.0);
  });
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (b + a);
  for (int j = 0; j < q; ++j) {
    rule.nodes[j] = mid + half * rule.nodes[j];
    rule.weights[j] *= half;
  }
  return rule;
}

Rule1D gauss_gegenbauer(int q, int k) {
  if (k < 1) throw Error(ErrorKind::ConfigInvalid, "Gegenbauer rule needs k >= 1");
  const double mu = 0.5 * k;
  const double mu0 = std::sqrt(std::numbers::pi) * std::tgamma(mu + 0.5) / std::tgamma(mu + 1.0);
  return symmetric_gauss(q, mu0, [mu](int j) {
    return j * (j + 2.0 * mu - 1.0) / (4.0 * (j + mu) * (j + mu - 1.0));
  });
}

Vec sphere_point(const Vec& angles) {
  const int n = static_cast<int>(angles.size()) + 1;
  Vec x(n);
  double s = 1.0;
  for (int j = 0; j < n - 1; ++j) {
    x(j) = s * std::cos(angles(j));
    s *= std::sin(angles(j));
  }
  x(n - 1) = s;
  return x;
}

SphereGrid sphere_grid(int n, int q, std::size_t node_budget) {
  if (n < 2) throw Error(ErrorKind::ConfigInvalid, "sphere grid needs n >= 2");
  if (q < 2) throw Error(ErrorKind::ConfigInvalid, "quadrature resolution q must be >= 2");
  auto count = [n](int qq) {
    double c = 2.0 * qq;
    for (int j = 0; j < n - 2; ++j) c *= qq;
    return c;
  };
  if (node_budget > 0) {
    while (q > 2 && count(q) > static_cast<double>(node_budget)) --q;
  }

  std::vector<Rule1D> polar;
  for (int j = 0; j < n - 2; ++j) {
    Rule1D rule = gauss_gegenbauer(q, n - 2 - j);
    // Order nodes by increasing phi.
    std::reverse(rule.nodes.begin(), rule.nodes.end());
    std::reverse(rule.weights.begin(), rule.weights.end());
    polar.push_back(std::move(rule));
  }
  const int naz = 2 * q;

  SphereGrid grid;
  grid.n = n;
  grid.q = q;
  const auto total = static_cast<std::size_t>(count(q));
  grid.directions.reserve(total);
  grid.angles.reserve(total);
  grid.weights.reserve(total);

  std::vector<int> idx(n - 2, 0);
  Vec phi(n - 1);
  while (true) {
    double w = 1.0;
    for (int j = 0; j < n - 2; ++j) {
      phi(j) = std::acos(polar[j].nodes[idx[j]]);
      w *= polar[j].weights[idx[j]];
    }
    for (int a = 0; a < naz; ++a) {
      phi(n - 2) = (a + 0.5) * 2.0 * std::numbers::pi / naz;
      grid.angles.push_back(phi);
      grid.directions.push_back(sphere_point(phi));
      grid.weights.push_back(w * 2.0 * std::numbers::pi / naz);
    }
    int j = n - 3;
    while (j >= 0 && ++idx[j] == q) idx[j--] = 0;
    if (j < 0) break;
  }
  return grid;
}

namespace {
std::atomic<int> g_threads{1};
}

void set_thread_count(int threads) { g_threads = std::max(1, threads); }
int thread_count() { return g_threads; }

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
  const auto workers =
      static_cast<std::size_t>(std::min<std::size_t>(g_threads.load(), std::max<std::size_t>(count, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t t = 0; t < workers; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count && !failed; i = next++) {
        try {
          body(i);
        } catch (...) {
          if (!failed.exchange(true)) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

double ordered_sum(const std::vector<double>& values) {
  double s = 0.0;
  for (double v : values) s += v;
  return s;
}

}  // namespace afmass
