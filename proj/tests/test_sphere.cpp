#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "afmass/error.hpp"
#include "afmass/fields.hpp"
#include "afmass/metric.hpp"
#include "afmass/quadrature.hpp"
#include "afmass/sphere.hpp"
#include "helpers.hpp"

using namespace afmass;
using testing_support::random_direction;

TEST_CASE("unit sphere areas") {
  CHECK(unit_sphere_area(1) == doctest::Approx(2 * std::numbers::pi).epsilon(1e-15));
  CHECK(unit_sphere_area(2) == doctest::Approx(4 * std::numbers::pi).epsilon(1e-15));
  CHECK(unit_sphere_area(3) == doctest::Approx(2 * std::numbers::pi * std::numbers::pi).epsilon(1e-15));
}

TEST_CASE("quadrature integrates the constant exactly") {
  for (int n = 2; n <= 8; ++n) {
    for (int q : {4, 9, 32}) {
      const SphereGrid grid = sphere_grid(n, q, kFirstOrderBudget);
      CHECK(grid.size() <= kFirstOrderBudget);
      CHECK(std::abs(ordered_sum(grid.weights) - unit_sphere_area(n - 1)) < 1e-10);
      for (const Vec& d : grid.directions) CHECK(std::abs(d.norm() - 1.0) < 1e-14);
    }
  }
}

TEST_CASE("quadrature integrates low-degree polynomials") {
  // int x_1^2 = omega/n, int x_1^4 = 3 omega/(n(n+2)), int x_1^2 x_n^2 = omega/(n(n+2)).
  for (int n = 3; n <= 6; ++n) {
    const SphereGrid grid = sphere_grid(n, 8);
    double s2 = 0, s4 = 0, mix = 0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const Vec& x = grid.directions[k];
      s2 += grid.weights[k] * x(0) * x(0);
      s4 += grid.weights[k] * std::pow(x(0), 4);
      mix += grid.weights[k] * x(0) * x(0) * x(n - 1) * x(n - 1);
    }
    const double w = unit_sphere_area(n - 1);
    CHECK(s2 == doctest::Approx(w / n).epsilon(1e-12));
    CHECK(s4 == doctest::Approx(3 * w / (n * (n + 2.0))).epsilon(1e-12));
    CHECK(mix == doctest::Approx(w / (n * (n + 2.0))).epsilon(1e-12));
  }
}

TEST_CASE("gauss-gegenbauer rule") {
  // int_0^pi sin^k = sqrt(pi) Gamma((k+1)/2) / Gamma(k/2 + 1).
  for (int k = 1; k <= 5; ++k) {
    const Rule1D rule = gauss_gegenbauer(6, k);
    double sum = 0;
    for (double w : rule.weights) sum += w;
    const double expect = std::sqrt(std::numbers::pi) * std::tgamma((k + 1) / 2.0) / std::tgamma(k / 2.0 + 1);
    CHECK(sum == doctest::Approx(expect).epsilon(1e-13));
  }
  const Rule1D gl = gauss_legendre(5, 0.0, 2.0);
  double s = 0;
  for (std::size_t i = 0; i < gl.nodes.size(); ++i) s += gl.weights[i] * std::pow(gl.nodes[i], 9);
  CHECK(s == doctest::Approx(102.4).epsilon(1e-13));
}

TEST_CASE("euclidean spheres") {
  for (int n = 3; n <= 6; ++n) {
    const MetricSpec e = MetricSpec::euclidean(n);
    const double r = 2.0;
    CHECK(sphere_area(e, r, 16) == doctest::Approx(unit_sphere_area(n - 1) * std::pow(r, n - 1)).epsilon(1e-12));
    Vec phi = Vec::Constant(n - 1, 0.7);
    CHECK(mean_curvature_at(e, r, phi) == doctest::Approx((n - 1) / r).epsilon(1e-12));
    CHECK(intrinsic_scalar_curvature_at(e, r, phi) == doctest::Approx((n - 1) * (n - 2) / (r * r)).epsilon(1e-9));
  }
  CHECK(sphere_area(MetricSpec::euclidean(3), 2.0, 32) == doctest::Approx(50.26548).epsilon(1e-7));
  CHECK(intrinsic_scalar_curvature_at(MetricSpec::euclidean(3), 5.0, Vec::Constant(2, 1.1)) ==
        doctest::Approx(0.08).epsilon(1e-9));
}

TEST_CASE("schwarzschild sphere oracles") {
  const MetricSpec s = MetricSpec::schwarzschild(3, 1.0);
  CHECK(sphere_area(s, 10.0, 32) == doctest::Approx(std::pow(1.05, 4) * 400 * std::numbers::pi).epsilon(1e-12));
  CHECK(sphere_area(s, 10.0, 32) == doctest::Approx(1527.4502).epsilon(1e-7));
  const Vec phi = Vec::Constant(2, 0.9);
  // H = U^{-2}(2/r + 4 U'/U), U' = -0.005.
  const double u = 1.05;
  CHECK(mean_curvature_at(s, 10.0, phi) == doctest::Approx((0.2 + 4 * (-0.005) / u) / (u * u)).epsilon(1e-12));
  CHECK(mean_curvature_at(s, 10.0, phi) == doctest::Approx(0.1641286).epsilon(1e-6));
  CHECK(intrinsic_scalar_curvature_at(s, 10.0, phi) == doctest::Approx(0.02 / std::pow(u, 4)).epsilon(1e-8));
  CHECK(intrinsic_scalar_curvature_at(s, 10.0, phi) == doctest::Approx(0.0164541).epsilon(1e-6));
}

TEST_CASE("conformal mean curvature oracle at random points") {
  // H = U^{-2/(n-2)} ((n-1)/r + 2(n-1)/(n-2) dU/dr / U).
  std::mt19937_64 rng(5);
  for (int n = 3; n <= 5; ++n) {
    Vec b = Vec::Zero(n);
    b(0) = 0.3;
    const MetricSpec hf = MetricSpec::harmonically_flat(n, 0.7, b);
    const HarmonicFactor u(n, 0.7, b);
    for (int t = 0; t < 20; ++t) {
      const double r = 2.0 + 3.0 * t;
      const Vec p = random_direction(rng, n);
      const FieldJet j = u.evaluate(r * p);
      const double h = std::pow(j.value, -2.0 / (n - 2)) *
                       ((n - 1) / r + 2.0 * (n - 1) / (n - 2) * j.grad.dot(p) / j.value);
      CHECK(mean_curvature_at_point(hf, r, p) == doctest::Approx(h).epsilon(1e-10));
    }
  }
}

TEST_CASE("intrinsic curvature via the hypersurface conformal formula") {
  // Induced metric is U^{4/(n-2)} times the round metric; psi = (2/(n-2)) log U.
  std::mt19937_64 rng(9);
  for (int n = 3; n <= 5; ++n) {
    Vec b = Vec::Zero(n);
    b(n - 1) = 0.4;
    const MetricSpec hf = MetricSpec::harmonically_flat(n, 0.5, b);
    const MetricSpec flat = MetricSpec::euclidean(n);
    struct LogU final : ScalarField {
      HarmonicFactor u;
      int n;
      LogU(int dim, Vec dip) : u(dim, 0.5, dip), n(dim) {}
      FieldJet evaluate(const Vec& x) const override {
        const FieldJet j = u.evaluate(x);
        const double c = 2.0 / (n - 2);
        FieldJet out;
        out.value = c * std::log(j.value);
        out.grad = c * j.grad / j.value;
        out.hess = c * (j.hess / j.value - j.grad * j.grad.transpose() / (j.value * j.value));
        return out;
      }
      nlohmann::json to_json() const override { return {}; }
    } psi(n, b);
    for (int t = 0; t < 8; ++t) {
      const double r = 1.5 + t;
      const Vec p = random_direction(rng, n);
      const FieldJet j = psi.u.evaluate(r * p);
      const Vec gt = psi.evaluate(r * p).grad;
      const double grad2 = gt.squaredNorm() - std::pow(gt.dot(p), 2);
      const double lap = sphere_laplacian_at_point(flat, psi, r, p);
      const double expect = conformal_scalar_curvature_hypersurface(
          j.value, (n - 1) * (n - 2) / (r * r), lap, grad2, n);
      CHECK(intrinsic_scalar_curvature_at_point(hf, r, p) == doctest::Approx(expect).epsilon(1e-7));
    }
  }
}

TEST_CASE("laplacian decomposition identity") {
  // Lap_{R^n} f = Lap_{S_r} f + f_rr + (n-1)/r f_r for the Euclidean metric.
  std::mt19937_64 rng(13);
  for (int n = 3; n <= 6; ++n) {
    const HarmonicFactor f(n, 0.0, Vec::Constant(n, 0.3));
    struct Poly final : ScalarField {
      FieldJet evaluate(const Vec& x) const override {
        const int n = static_cast<int>(x.size());
        FieldJet j;
        j.value = x(0) * x(0) * x(1) + std::pow(x(n - 1), 3) + x.squaredNorm();
        j.grad = 2.0 * x;
        j.grad(0) += 2 * x(0) * x(1);
        j.grad(1) += x(0) * x(0);
        j.grad(n - 1) += 3 * x(n - 1) * x(n - 1);
        j.hess = 2.0 * Mat::Identity(n, n);
        j.hess(0, 0) += 2 * x(1);
        j.hess(0, 1) += 2 * x(0);
        j.hess(1, 0) += 2 * x(0);
        j.hess(n - 1, n - 1) += 6 * x(n - 1);
        return j;
      }
      nlohmann::json to_json() const override { return {}; }
    } poly;
    for (const ScalarField* field : {static_cast<const ScalarField*>(&poly), static_cast<const ScalarField*>(&f)}) {
      for (int t = 0; t < 10; ++t) {
        const double r = 0.5 + t;
        const Vec p = random_direction(rng, n);
        const FieldJet j = field->evaluate(r * p);
        const double frr = p.dot(j.hess * p);
        const double fr = j.grad.dot(p);
        const double lhs = j.hess.trace();
        const double rhs = sphere_laplacian_at_point(MetricSpec::euclidean(n), *field, r, p) + frr + (n - 1) / r * fr;
        CHECK(std::abs(lhs - rhs) <= 1e-8 * std::max(1.0, std::abs(lhs)));
      }
    }
  }
}

TEST_CASE("sphere report") {
  const SphereReport rep = sphere_report(MetricSpec::euclidean(4), 3.0, 8);
  CHECK(rep.H_min == doctest::Approx(1.0));
  CHECK(rep.H_max == doctest::Approx(1.0));
  CHECK(rep.maxH2 == doctest::Approx(1.0));
  CHECK(rep.rho_min == doctest::Approx(6.0 / 9.0).epsilon(1e-8));
  CHECK(to_csv_row(rep).find("3,") == 0);
}

TEST_CASE("sphere errors") {
  const MetricSpec s = MetricSpec::schwarzschild(3, 1.0);
  try {
    sphere_area(s, 0.3, 8);
    FAIL("expected SingularPoint");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::SingularPoint);
  }
  try {
    induced_metric_at(s, 5.0, Vec::Zero(2));
    FAIL("expected PoleEvaluation");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::PoleEvaluation);
  }
}
