#include "polysurf/bounds.hpp"

#include <cmath>
#include <cstdio>

namespace polysurf {

namespace {

void echo_params(BoundReport& report, const MeasureParams& params) {
  report.n = params.n;
  report.t0 = params.t0;
  report.lambda = params.lambda;
  report.mean_norm = params.mean_norm;
  report.norm_cv = params.norm_cv;
}

}  // namespace

BoundReport general_upper(const MeasureParams& params) {
  BoundReport report;
  report.name = "general_upper";
  echo_params(report, params);
  report.valid = params.var_norm > 0.0;
  report.value = report.valid
                     ? std::sqrt(static_cast<double>(params.n)) /
                           (std::pow(params.var_norm, 0.25) * std::sqrt(params.mean_norm))
                     : kInf;
  return report;
}

BoundReport thm_upper(const MeasureParams& params, double K, double c_range) {
  if (!(K >= 2.0)) raise(ErrorKind::range, "facet-count bound needs K >= 2");
  BoundReport report;
  report.name = "thm_upper";
  echo_params(report, params);
  report.K = K;
  const double log_k = std::log(K);
  report.valid = (params.lambda * log_k <= std::exp(-1.0)) &&
                 (params.lambda * log_k <= c_range);
  report.value = std::sqrt(static_cast<double>(params.n)) / params.t0 *
                 std::sqrt(log_k) * std::log(1.0 / (params.lambda * log_k));
  return report;
}

BoundReport nazarov_upper(double K) {
  if (!(K >= 2.0)) raise(ErrorKind::range, "facet-count bound needs K >= 2");
  BoundReport report;
  report.name = "nazarov_upper";
  report.K = K;
  report.value = std::sqrt(std::log(K));
  return report;
}

BoundReport gamma_p_upper(int n, double p, double K) {
  if (n < 2) raise(ErrorKind::dimension, "dimension must be >= 2");
  if (!(p >= 1.0)) raise(ErrorKind::range, "power family needs p >= 1");
  if (!(K >= 2.0)) raise(ErrorKind::range, "facet-count bound needs K >= 2");
  BoundReport report;
  report.name = "gamma_p_upper";
  report.n = n;
  report.p = p;
  report.K = K;
  report.value =
      std::pow(static_cast<double>(n), 0.5 - 1.0 / p) * std::sqrt(std::log(K));
  return report;
}

ROptimum optimize_R(double lambda, double K) {
  if (!(lambda > 0.0) || !(lambda < std::exp(-2.0))) {
    raise(ErrorKind::range, "split-radius optimization needs lambda in (0, e^{-2})");
  }
  if (!(K >= 2.0)) raise(ErrorKind::range, "needs K >= 2");

  const double lo_edge = 1.0;
  const double hi_edge = 1.0 / (M_E * std::sqrt(lambda));
  if (!(lo_edge < hi_edge)) {
    raise(ErrorKind::range, "empty split-radius interval");
  }
  auto objective = [&](double r) {
    return r * std::log(1.0 / (lambda * r * r)) + K * std::exp(-r * r);
  };

  constexpr int kGrid = 4096;
  double best_r = lo_edge, best_val = objective(lo_edge);
  for (int i = 1; i <= kGrid; ++i) {
    const double r = lo_edge + (hi_edge - lo_edge) * i / kGrid;
    const double val = objective(r);
    if (val < best_val) {
      best_val = val;
      best_r = r;
    }
  }
  double lo = std::max(lo_edge, best_r - (hi_edge - lo_edge) / kGrid);
  double hi = std::min(hi_edge, best_r + (hi_edge - lo_edge) / kGrid);
  constexpr double kInvPhi = 0.6180339887498948482;
  double x1 = hi - kInvPhi * (hi - lo);
  double x2 = lo + kInvPhi * (hi - lo);
  double f1 = objective(x1), f2 = objective(x2);
  for (int iter = 0; iter < 200 && hi - lo > 1e-13; ++iter) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - kInvPhi * (hi - lo);
      f1 = objective(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + kInvPhi * (hi - lo);
      f2 = objective(x2);
    }
  }

  ROptimum out;
  out.R_star = 0.5 * (lo + hi);
  out.value = objective(out.R_star);
  if (best_val < out.value) {
    out.R_star = best_r;
    out.value = best_val;
  }
  return out;
}

std::string bounds_csv_header() { return "bound_name,family,n,p,K,value,valid"; }

std::string bounds_csv_row(const BoundReport& report, const std::string& family) {
  char p_field[40] = "";
  if (!std::isnan(report.p)) std::snprintf(p_field, sizeof p_field, "%.12g", report.p);
  char k_field[40] = "";
  if (report.K > 0.0) std::snprintf(k_field, sizeof k_field, "%.12g", report.K);
  char buf[320];
  std::snprintf(buf, sizeof buf, "%s,%s,%d,%s,%s,%.12g,%d", report.name.c_str(),
                family.c_str(), report.n, p_field, k_field, report.value,
                report.valid ? 1 : 0);
  return buf;
}

}  // namespace polysurf
