#include <doctest.h>

#include <cmath>
#include <random>

#include "afmass/error.hpp"
#include "afmass/fields.hpp"
#include "afmass/metric.hpp"
#include "afmass/metric_json.hpp"
#include "helpers.hpp"

using namespace afmass;
using testing_support::random_direction;

namespace {

Vec point(std::initializer_list<double> v) {
  Vec x(static_cast<Eigen::Index>(v.size()));
  Eigen::Index k = 0;
  for (double c : v) x(k++) = c;
  return x;
}

// U = 1 + a exp(-|x|^2), not harmonic.
struct GaussianBumpField final : ScalarField {
  double a;
  explicit GaussianBumpField(double amp) : a(amp) {}
  FieldJet evaluate(const Vec& x) const override {
    const int n = static_cast<int>(x.size());
    const double e = a * std::exp(-x.squaredNorm());
    FieldJet j;
    j.value = 1.0 + e;
    j.grad = -2.0 * e * x;
    j.hess = e * (4.0 * x * x.transpose() - 2.0 * Mat::Identity(n, n));
    return j;
  }
  nlohmann::json to_json() const override { return {{"kind", "gaussian"}}; }
};

}  // namespace

TEST_CASE("euclidean metric and curvature vanish") {
  const MetricSpec e = MetricSpec::euclidean(3);
  const Vec x = point({0.3, -2.0, 1.5});
  CHECK(metric_at(e, x).isApprox(Mat::Identity(3, 3)));
  const PointwiseCurvature c = curvature_at(e, x);
  CHECK(c.scalar == 0.0);
  CHECK(c.ricci.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("schwarzschild coefficients") {
  const MetricSpec s = MetricSpec::schwarzschild(3, 1.0);
  const Mat g = metric_at(s, point({10, 0, 0}));
  CHECK(g(0, 0) == doctest::Approx(1.21550625).epsilon(1e-14));
  CHECK(g(1, 1) == doctest::Approx(1.21550625).epsilon(1e-14));
  CHECK(g(0, 1) == 0.0);
  const MetricJet jet = metric_derivatives_at(s, point({10, 0, 0}), 1);
  CHECK(jet.first[0](0, 0) == doctest::Approx(-0.0231525).epsilon(1e-12));

  // Closed form in other dimensions.
  for (int n = 4; n <= 7; ++n) {
    const MetricSpec sn = MetricSpec::schwarzschild(n, 2.0);
    Vec x = Vec::Zero(n);
    x(n - 1) = 3.0;
    const double u = 1.0 + 2.0 / (2.0 * std::pow(3.0, n - 2));
    CHECK(metric_at(sn, x)(0, 0) == doctest::Approx(std::pow(u, 4.0 / (n - 2))).epsilon(1e-14));
  }
}

TEST_CASE("scaled and translated wrappers") {
  const MetricSpec e = MetricSpec::euclidean(3);
  CHECK(metric_at(MetricSpec::scaled(e, 2.0), point({1, 2, 3})).isApprox(4.0 * Mat::Identity(3, 3)));
  const MetricSpec s = MetricSpec::schwarzschild(3, 1.0);
  const Vec off = point({5, 1, 0});
  const Vec x = point({2, 0, 3});
  CHECK(metric_at(MetricSpec::translated(s, off), x).isApprox(metric_at(s, x + off)));
  CHECK(metric_at(MetricSpec::scaled(s, 3.0), x).isApprox(9.0 * metric_at(s, x)));
}

TEST_CASE("chart errors") {
  const MetricSpec s = MetricSpec::schwarzschild(3, 1.0);
  CHECK_THROWS_AS(metric_at(s, point({0.1, 0, 0})), Error);
  try {
    metric_at(s, point({0, 0, 0}));
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::SingularPoint);
  }
  // A large perturbation breaks positive definiteness.
  const auto h = std::make_shared<QuadrupolePerturbation>(3, -50.0, 0);
  const MetricSpec bad = MetricSpec::asymptotically_schwarzschild(3, 1.0, h);
  try {
    metric_at(bad, point({1.0, 0.0, 0.0}));
    FAIL("expected NotPositiveDefinite");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotPositiveDefinite);
  }
  // Finite-difference stencil crossing the excluded ball.
  const MetricSpec fd = s.with_derivatives(DerivativeMode::finite_difference, 0.1);
  try {
    metric_derivatives_at(fd, point({0.6, 0, 0}), 1);
    FAIL("expected StepTooLarge");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::StepTooLarge);
  }
}

TEST_CASE("metric and derivative symmetry") {
  std::mt19937_64 rng(7);
  const auto h = std::make_shared<QuadrupolePerturbation>(4, 0.3, 1);
  const MetricSpec s = MetricSpec::asymptotically_schwarzschild(4, 1.0, h);
  for (int trial = 0; trial < 20; ++trial) {
    const Vec x = 5.0 * random_direction(rng, 4);
    const MetricJet j = metric_derivatives_at(s, x, 2);
    CHECK((j.g - j.g.transpose()).cwiseAbs().maxCoeff() == 0.0);
    for (int k = 0; k < 4; ++k) {
      CHECK((j.first[k] - j.first[k].transpose()).cwiseAbs().maxCoeff() == 0.0);
      for (int l = 0; l < 4; ++l) CHECK((j.dd(k, l) - j.dd(l, k)).cwiseAbs().maxCoeff() == 0.0);
    }
    const PointwiseCurvature c = curvature_from_jet(j);
    for (int k = 0; k < 4; ++k)
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) CHECK(c.gamma(k, a, b) == doctest::Approx(c.gamma(k, b, a)));
    CHECK((c.ricci - c.ricci.transpose()).cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("perturbation decay is r^{1-n}") {
  for (int n = 3; n <= 5; ++n) {
    QuadrupolePerturbation h(n, 0.7, 0);
    std::mt19937_64 rng(n);
    double sup = 0.0;
    for (double r : {10.0, 100.0, 1000.0, 1e4}) {
      for (int k = 0; k < 10; ++k) {
        MetricJet jet;
        jet.g = Mat::Zero(n, n);
        h.add_to(r * random_direction(rng, n), 0, jet);
        sup = std::max(sup, std::pow(r, n - 1) * jet.g.cwiseAbs().maxCoeff());
      }
    }
    CHECK(sup <= 2.0 * 0.7 + 1e-12);
  }
}

TEST_CASE("analytic jets agree with finite differences at second order") {
  const auto h = std::make_shared<QuadrupolePerturbation>(3, 0.5, 2);
  const MetricSpec s = MetricSpec::asymptotically_schwarzschild(3, 1.0, h);
  const Vec x = point({1.3, -0.7, 2.1});
  const MetricJet exact = metric_derivatives_at(s, x, 2);
  auto err1 = [&](double step) {
    const MetricJet fd = metric_derivatives_fd(s, x, 1, step);
    double e = 0.0;
    for (int k = 0; k < 3; ++k) e = std::max(e, (fd.first[k] - exact.first[k]).cwiseAbs().maxCoeff());
    return e;
  };
  // Halving the step twice: error ratio close to 4 (order 2).
  const double e1 = err1(0.02), e2 = err1(0.01), e3 = err1(0.005);
  const double order = std::log2(std::sqrt(e1 / e3));
  CHECK(order == doctest::Approx(2.0).epsilon(0.1));
  CHECK(e2 < e1);

  const MetricJet fd2 = metric_derivatives_at(s.with_derivatives(DerivativeMode::finite_difference), x, 2);
  for (int k = 0; k < 3; ++k)
    for (int l = 0; l < 3; ++l) CHECK((fd2.dd(k, l) - exact.dd(k, l)).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("schwarzschild is scalar flat") {
  std::mt19937_64 rng(11);
  for (int n = 3; n <= 7; ++n) {
    const MetricSpec s = MetricSpec::schwarzschild(n, 1.0);
    for (double r : {1.5, 4.0, 20.0}) {
      const Vec x = r * random_direction(rng, n);
      const PointwiseCurvature c = curvature_at(s, x);
      CHECK(std::abs(c.scalar) < 1e-10);
    }
  }
}

TEST_CASE("conformal scalar curvature identity") {
  std::mt19937_64 rng(3);
  for (int n = 3; n <= 5; ++n) {
    const double a = 0.8;
    // Harmonic factor: both sides vanish.
    const MetricSpec hf = MetricSpec::harmonically_flat(n, a);
    for (int k = 0; k < 10; ++k) {
      const Vec x = (2.0 + 3.0 * k) * random_direction(rng, n);
      CHECK(std::abs(curvature_at(hf, x).scalar) < 1e-10);
    }
    // Non-harmonic factor: compare with -(4(n-1)/(n-2)) U^{-(n+2)/(n-2)} Lap U.
    auto u = std::make_shared<GaussianBumpField>(0.4);
    const MetricSpec cf = MetricSpec::conformally_flat(n, u);
    for (int k = 0; k < 10; ++k) {
      const Vec x = (0.2 + 0.2 * k) * random_direction(rng, n);
      const FieldJet j = u->evaluate(x);
      const double expect =
          -(4.0 * (n - 1) / (n - 2)) * std::pow(j.value, -(n + 2.0) / (n - 2)) * j.hess.trace();
      CHECK(curvature_at(cf, x).scalar == doctest::Approx(expect).epsilon(1e-8));
    }
  }
}

TEST_CASE("hypersurface conformal formula") {
  CHECK(conformal_scalar_curvature_hypersurface(1.0, 0.37, 0.0, 0.0, 3) == 0.37);
  // Constant psi = c: U^{4/(n-2)} = e^{2c}.
  const double u = 1.05;
  CHECK(conformal_scalar_curvature_hypersurface(u, 2.0 / 100.0, 0.0, 0.0, 3) ==
        doctest::Approx(0.0164541).epsilon(1e-6));
  CHECK_THROWS_AS(conformal_scalar_curvature_hypersurface(0.0, 1.0, 0.0, 0.0, 3), Error);
}

TEST_CASE("spec json round trip") {
  const auto h = std::make_shared<QuadrupolePerturbation>(4, 0.25, 1);
  const MetricSpec specs[] = {
      MetricSpec::euclidean(3),
      MetricSpec::schwarzschild(5, 2.0),
      MetricSpec::harmonically_flat(3, 0.5, point({0.1, 0.0, 0.2})),
      MetricSpec::asymptotically_schwarzschild(4, 1.0, h),
      MetricSpec::scaled(MetricSpec::translated(MetricSpec::schwarzschild(3, 1.0), point({1, 2, 3})), 2.0),
      MetricSpec::schwarzschild(3, 1.0).with_derivatives(DerivativeMode::finite_difference, 1e-3),
  };
  for (const auto& s : specs) {
    const nlohmann::json doc = spec_to_json(s);
    const MetricSpec back = spec_from_json(doc);
    CHECK(spec_to_json(back) == doc);
    Vec x = Vec::Constant(s.dimension(), 7.0);
    CHECK(metric_at(back, x).isApprox(metric_at(s, x)));
  }
  CHECK_THROWS_AS(spec_from_json({{"n", 3}, {"family", "kerr"}}), Error);
  CHECK_THROWS_AS(spec_from_json({{"n", 3}, {"family", "schwarzschild"}, {"params", {}}}), Error);
}
