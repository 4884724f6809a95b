#pragma once

#include <cstdint>
#include <span>
#include <string>

#include "polysurf/measure.hpp"
#include "polysurf/polytope.hpp"

namespace polysurf {

enum class SurfaceMethod { facet_mc, shell_mc, exact_1d, exact_2d };

const char* to_string(SurfaceMethod method);

/// A surface-area figure with its sampling error. Exact methods carry
/// std_error = 0 and samples = 0. `warning` is empty unless the estimator
/// hit a reliability limit (e.g. projection iterations capped).
struct SurfaceEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::int64_t samples = 0;
  SurfaceMethod method = SurfaceMethod::exact_1d;
  std::string warning;
};

struct VolumeEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::int64_t samples = 0;
};

/// Boundary-point diagnostics: alpha is the cosine between the point and
/// the facet normal, psi the log drop of the radial weight from its peak,
/// r the normalized facet offset sqrt(n)/t0 * rho.
struct BoundaryDiagnostics {
  double alpha = 0.0;
  double psi = 0.0;
  double r = 0.0;
};

/// Measure of the full hyperplane at distance rho from the origin.
/// Exact 1-D quadrature; the n = 2 endpoint singularity is removed by the
/// t = rho*cosh(w) substitution.
SurfaceEstimate hyperplane_measure(const MeasureModel& model, double rho);

// Shared radial machinery (also drives the expected-surface quadrature):
// log[(n-1) nu_{n-1} / (n nu_n J_{n-1})] and the log of
// int_rho^inf (t^2-rho^2)^{(n-3)/2} t e^{-phi(t)} e^{extra_log(t)} dt.
double log_hyperplane_prefactor(const MeasureModel& model, double log_j_nm1);
double log_radial_facet_integral(const MeasureModel& model, double rho,
                                 const std::function<double(double)>& extra_log);

/// Unbiased facet measure: hyperplane measure times the Monte Carlo
/// acceptance fraction under the remaining constraints. Points are drawn
/// on the facet's hyperplane with the exact radial law. A lone halfspace
/// (or a hyperplane the measure cannot see) degenerates to the exact
/// 1-D value.
SurfaceEstimate facet_measure_mc(const MeasureModel& model, const Polytope& p,
                                 int facet, std::int64_t n_samples,
                                 std::uint64_t seed);

/// Sum of facet estimates with errors combined in quadrature.
SurfaceEstimate surface_mc(const MeasureModel& model, const Polytope& p,
                           std::int64_t n_per_facet, std::uint64_t seed);

/// Default shell half-width used by the Minkowski-quotient estimator.
double default_shell_eps(const MeasureParams& params);

/// Minkowski-quotient oracle: mass of the eps-shell around the polytope,
/// divided by eps, Richardson-extrapolated from the pair eps_big = 2*eps_small.
/// Independent of the facet decomposition; used to cross-check surface_mc.
SurfaceEstimate shell_oracle_mc(const MeasureModel& model, const MeasureParams& params,
                                const Polytope& p, double eps_big, double eps_small,
                                std::int64_t n_samples, std::uint64_t seed);

/// Exact planar surface area: per-facet 1-D integrals over the segments
/// that survive clipping against the other constraints.
SurfaceEstimate polygon_exact_2d(const MeasureModel& model, const Polytope& p);

VolumeEstimate volume_mc(const MeasureModel& model, const Polytope& p,
                         std::int64_t n_samples, std::uint64_t seed);

/// Diagnostics for a boundary point y on the given facet (y must satisfy
/// the facet equation within 1e-8).
BoundaryDiagnostics pointwise_diagnostics(const MeasureModel& model,
                                          const MeasureParams& params,
                                          const Polytope& p,
                                          std::span<const double> y, int facet);

/// Per-point surface bound with unit constants:
/// sqrt(n)/t0 * min( 1/(lambda r e^psi), r psi + sqrt(psi) ).
double pointwise_bound(const MeasureParams& params, const BoundaryDiagnostics& diag);

struct PointwiseMin {
  double psi_star = 0.0;
  double value = 0.0;
};

/// Minimizes 1/(lambda r e^psi) + r psi + sqrt(psi) over psi >= 0.
PointwiseMin minimize_pointwise(double lambda, double r);

/// CSV row schema shared by the surface estimators.
std::string surface_csv_header();
std::string surface_csv_row(const SurfaceEstimate& est, const std::string& family,
                            int n, int k, std::uint64_t seed);

}  // namespace polysurf
