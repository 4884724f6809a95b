#pragma once

#include <string>

#include "polysurf/measure.hpp"

namespace polysurf {

/// Inputs of the circumscribed-random-polytope experiment. `in_range`
/// records whether K <= exp(c_range / lambda); outside that range the
/// construction still runs but the scaling guarantee lapses, so sweep rows
/// get flagged rather than rejected.
struct ExtremalConfig {
  int K = 2;
  double rho = 0.0;
  double c_range = 1.0;
  bool in_range = true;
};

ExtremalConfig make_extremal_config(const MeasureParams& params, int K, double rho,
                                    double c_range = 1.0);

/// Probability that a fixed point at radius t ends up on the far side of
/// a uniformly-oriented hyperplane at distance rho from the origin: the
/// normalized spherical-cap measure, by 1-D quadrature in the polar angle.
double cap_probability(int n, double t, double rho);

/// Offset of the circumscribed construction: the root of
///   1/K = (t0/(sqrt(n) rho)) (1 - rho^2/(t0^2 (1+lambda))^2)^{(n-3)/2}
/// on (t0/(K sqrt(n)), t0 (1+lambda)).
double solve_rho(const MeasureModel& model, const MeasureParams& params, int K);

/// Exact expected surface area of the K-facet circumscribed random
/// polytope: K times the facet integral weighted by the survival factor
/// (1 - p(t))^{K-1}.
double expected_surface_exact(const MeasureModel& model, const MeasureParams& params,
                              int K, double rho);

/// Annulus-restricted variant: the geometric factor frozen at the inner
/// radius when the offset sits inside it, the pointwise factor over the
/// clipped annulus otherwise. Either way a certified lower bound on the
/// exact expectation.
double expected_surface_restricted(const MeasureModel& model,
                                   const MeasureParams& params, int K, double rho);

/// Scaling target of the construction, with unit constant:
/// (sqrt(n)/t0) sqrt(ln K).
double lower_bound_rhs(const MeasureParams& params, double K);

std::string extremal_csv_header();

}  // namespace polysurf
