#include <doctest.h>

#include <cmath>
#include <limits>

#include "afmass/error.hpp"
#include "afmass/fields.hpp"
#include "afmass/mass.hpp"
#include "afmass/metric.hpp"
#include "afmass/quadrature.hpp"

using namespace afmass;

namespace {
const std::vector<double> kRadii{50, 100, 200, 400};
}

TEST_CASE("fit_decay recovers an exact model") {
  std::vector<double> radii{10, 20, 40, 80}, raw;
  for (double r : radii) raw.push_back(2.5 - 3.0 / (r * r));
  const MassEstimate m = fit_decay(radii, raw, 2.0);
  CHECK(m.value == doctest::Approx(2.5).epsilon(1e-13));
  CHECK(m.model.c1 == doctest::Approx(-3.0).epsilon(1e-10));
  CHECK(m.error == doctest::Approx(3.0 / 6400).epsilon(1e-6));
}

TEST_CASE("fit_decay errors") {
  auto kind = [](auto&& f) {
    try {
      f();
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::ComputationFailed;
  };
  CHECK(kind([] { fit_decay({1, 2}, {0, 0}, 1); }) == ErrorKind::ConfigInvalid);
  CHECK(kind([] { fit_decay({1, 3, 2}, {0, 0, 0}, 1); }) == ErrorKind::ConfigInvalid);
  CHECK(kind([] { fit_decay({1e6, 1e6 + 1e-3, 1e6 + 2e-3}, {0, 0, 0}, 1); }) ==
        ErrorKind::FitIllConditioned);
}

TEST_CASE("adm mass of schwarzschild") {
  for (int n = 3; n <= 5; ++n) {
    const MassEstimate m = adm_mass(MetricSpec::schwarzschild(n, 1.0), kRadii, 16);
    CHECK(m.value == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(m.radii == kRadii);
  }
  CHECK(adm_mass(MetricSpec::schwarzschild(3, -0.5), kRadii, 16).value == doctest::Approx(-0.5).epsilon(1e-4));
  CHECK(adm_mass(MetricSpec::euclidean(4), kRadii, 8).value == 0.0);
}

TEST_CASE("harmonically flat mass is 2a, dipole and quadrupole do not contribute") {
  Vec b(3);
  b << 0.2, -0.1, 0.3;
  CHECK(adm_mass(MetricSpec::harmonically_flat(3, 0.4, b), kRadii, 16).value ==
        doctest::Approx(0.8).epsilon(1e-4));
  const auto h = std::make_shared<QuadrupolePerturbation>(4, 0.5, 2);
  CHECK(adm_mass(MetricSpec::asymptotically_schwarzschild(4, 1.0, h), kRadii, 16).value ==
        doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("mass scaling law and translation invariance") {
  for (int n = 3; n <= 5; ++n) {
    const MetricSpec s = MetricSpec::schwarzschild(n, 1.0);
    const double base = adm_mass(s, kRadii, 16).value;
    for (double lambda : {0.5, 2.0, 3.0}) {
      const double scaled = adm_mass(MetricSpec::scaled(s, lambda), kRadii, 16).value;
      CHECK(scaled == doctest::Approx(std::pow(lambda, n - 2) * base).epsilon(1e-3));
    }
    Vec off = Vec::Constant(n, 3.0);
    CHECK(adm_mass(MetricSpec::translated(s, off), kRadii, 16).value == doctest::Approx(base).epsilon(1e-3));
  }
}

TEST_CASE("fg vanishes on euclidean space") {
  for (int n = 3; n <= 7; ++n) {
    for (double r : {1.0, 7.0, 100.0}) {
      // Round-off is amplified by the area prefactor (A/omega)^{(n-2)/(n-1)} = r^{n-2}.
      const FgValue v = fg(MetricSpec::euclidean(n), r, 8);
      CHECK(std::abs(v.value) <= 16 * std::numeric_limits<double>::epsilon() * std::pow(r, n - 2));
    }
  }
}

TEST_CASE("fg equals m on schwarzschild spheres") {
  for (int n = 3; n <= 6; ++n) {
    for (double r : {5.0, 50.0}) {
      const FgValue v = fg(MetricSpec::schwarzschild(n, 1.0), r, 8);
      CHECK(v.value == doctest::Approx(1.0).epsilon(1e-7));
      CHECK(v.hypothesis_holds);
      CHECK_FALSE(v.flagged);
    }
  }
  // Closed-form pieces at n = 3, r = 10.
  const FgValue v = fg(MetricSpec::schwarzschild(3, 1.0), 10.0, 16);
  CHECK(v.report.maxH2 == doctest::Approx(0.0269382).epsilon(1e-5));
}

TEST_CASE("fg residual law and limit") {
  const double a = 0.5;
  Vec b(3);
  b << 0.0, 0.0, 0.6;
  const MetricSpec hf = MetricSpec::harmonically_flat(3, a, b);
  const MassEstimate lim = fg_limit(hf, {50, 100, 200, 400}, 16);
  CHECK(lim.value == doctest::Approx(2 * a).epsilon(1e-2));
  const double r1 = fg(hf, 100, 16).value - 2 * a;
  const double r2 = fg(hf, 200, 16).value - 2 * a;
  CHECK(r1 / r2 == doctest::Approx(2.0).epsilon(0.2));
}

TEST_CASE("penrose-like check and profile rows") {
  const MetricSpec s = MetricSpec::schwarzschild(3, 1.0);
  const MassEstimate m = adm_mass(s, kRadii, 16);
  const PenroseCheck pc = penrose_like_check(s, 20.0, 16, m);
  CHECK(pc.hypothesis_holds);
  CHECK(pc.inequality_holds);
  const std::string row = fg_profile_row(fg(s, 20.0, 8));
  CHECK(std::count(row.begin(), row.end(), ',') == 5);
}

TEST_CASE("mass estimate json round trip") {
  const MassEstimate m = adm_mass(MetricSpec::schwarzschild(3, 1.0), kRadii, 8);
  CHECK(mass_estimate_from_json(to_json(m)) == m);
  CHECK(mass_estimate_from_json(nlohmann::json::parse(to_json(m).dump())) == m);
}

TEST_CASE("zero rho_min is an error") {
  SphereReport rep;
  rep.r = 1.0;
  rep.area = 1.0;
  rep.maxH2 = 1.0;
  rep.rho_min = 0.0;
  CHECK_THROWS_AS(fg_from_report(rep, 3), Error);
  rep.rho_min = -1.0;
  CHECK(fg_from_report(rep, 3).flagged);
}
