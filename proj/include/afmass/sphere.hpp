#pragma once

#include <string>

#include "afmass/fields.hpp"
#include "afmass/metric.hpp"
#include "afmass/quadrature.hpp"

namespace afmass {

/// Area and extrema of H and rho on a coordinate sphere, taken over
/// quadrature nodes.
struct SphereReport {
  double r = 0.0;
  double area = 0.0;
  double H_min = 0.0;
  double H_max = 0.0;
  double maxH2 = 0.0;
  double rho_min = 0.0;
  double rho_max = 0.0;
  int q = 0;
};

inline constexpr const char* kSphereReportCsvHeader = "r,area,H_min,H_max,maxH2,rho_min,rho_max,q";
std::string to_csv_row(const SphereReport& report);

/// Orthonormal basis of the tangent space of the unit sphere at `p` (columns).
Mat tangent_basis(const Vec& p);

/// Induced metric of S_r in the angular chart phi^1..phi^{n-1}.
Mat induced_metric_at(const MetricSpec& spec, double r, const Vec& phi);

/// Induced metric and its first two derivatives in the gnomonic chart
/// y -> r (p + T y) / |p + T y| at y = 0, T = tangent_basis(p).
MetricJet induced_metric_jet(const MetricSpec& spec, double r, const Vec& p);

/// Area of S_r (flat-chart quadrature of sqrt det of the induced metric).
double sphere_area(const MetricSpec& spec, double r, int q);

/// Mean curvature of S_r at r p (p unit), the g-divergence of the outward unit
/// normal; (n-1)/r for Euclidean spheres.
double mean_curvature_at_point(const MetricSpec& spec, double r, const Vec& p);
double mean_curvature_at(const MetricSpec& spec, double r, const Vec& phi);

/// Scalar curvature of the induced metric on S_r.
double intrinsic_scalar_curvature_at_point(const MetricSpec& spec, double r, const Vec& p);
double intrinsic_scalar_curvature_at(const MetricSpec& spec, double r, const Vec& phi);

/// Laplacian on (S_r, induced metric) of a scalar field restricted to S_r, at r p.
double sphere_laplacian_at_point(const MetricSpec& spec, const ScalarField& f, double r,
                                 const Vec& p);

SphereReport sphere_report(const MetricSpec& spec, double r, int q);

}  // namespace afmass
