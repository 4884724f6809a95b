#pragma once

#include <string>

#include "polysurf/measure.hpp"

namespace polysurf {

/// One evaluated bound. Everything uses unit constants and natural logs;
/// `valid` records whether the stated range conditions hold, and an
/// out-of-range evaluation still reports its value. Echoed inputs that do
/// not apply stay NaN and print empty in CSV.
struct BoundReport {
  std::string name;
  double value = 0.0;
  bool valid = true;
  int n = 0;
  double K = 0.0;
  double t0 = std::numeric_limits<double>::quiet_NaN();
  double lambda = std::numeric_limits<double>::quiet_NaN();
  double mean_norm = std::numeric_limits<double>::quiet_NaN();
  double norm_cv = std::numeric_limits<double>::quiet_NaN();
  double p = std::numeric_limits<double>::quiet_NaN();
};

/// Family-free ceiling for arbitrary convex sets:
/// sqrt(n) / (Var|X|^{1/4} sqrt(E|X|)).
BoundReport general_upper(const MeasureParams& params);

/// K-facet ceiling (sqrt(n)/t0) sqrt(ln K) ln(1/(lambda ln K)); valid while
/// lambda ln K <= 1/e and K <= exp(c_range/lambda).
BoundReport thm_upper(const MeasureParams& params, double K, double c_range = 1.0);

/// Gaussian K-facet ceiling with unit constant: sqrt(ln K).
BoundReport nazarov_upper(double K);

/// Radial-power-family ceiling: n^{1/2 - 1/p} sqrt(ln K).
BoundReport gamma_p_upper(int n, double p, double K);

struct ROptimum {
  double R_star = 0.0;
  double value = 0.0;
};

/// Minimizes R ln(1/(lambda R^2)) + K e^{-R^2} over R in (1, 1/(e sqrt(lambda))),
/// the split radius between near and far facets.
ROptimum optimize_R(double lambda, double K);

std::string bounds_csv_header();
std::string bounds_csv_row(const BoundReport& report, const std::string& family);

}  // namespace polysurf
