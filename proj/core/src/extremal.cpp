#include "polysurf/extremal.hpp"

#include <cmath>

#include "polysurf/surface.hpp"

namespace polysurf {

ExtremalConfig make_extremal_config(const MeasureParams& params, int K, double rho,
                                    double c_range) {
  if (K < 2) raise(ErrorKind::range, "the construction needs K >= 2");
  if (!(rho > 0.0) || rho >= params.t0 * (1.0 + params.lambda)) {
    raise(ErrorKind::range, "offset must lie in (0, t0 (1 + lambda))");
  }
  ExtremalConfig config;
  config.K = K;
  config.rho = rho;
  config.c_range = c_range;
  config.in_range = std::log(static_cast<double>(K)) * params.lambda <= c_range;
  return config;
}

double cap_probability(int n, double t, double rho) {
  if (n < 2) raise(ErrorKind::dimension, "dimension must be >= 2");
  if (!(t > 0.0)) raise(ErrorKind::range, "radius must be positive");
  if (rho >= t) return 0.0;
  if (rho <= -t) return 1.0;

  // polar-angle form of the cap integral: int_0^arccos(rho/t) sin^{n-2},
  // free of endpoint singularities in every dimension
  const double angle = std::acos(rho / t);
  LogIntegrand cap{[n](double theta) {
                     const double s = std::sin(theta);
                     return s <= 0.0 ? -kInf : (n - 2) * std::log(s);
                   },
                   0.0, angle};
  const double log_cap = integrate_log(cap, 1e-11);
  // full integral over [0, pi] in closed form: sqrt(pi) G((n-1)/2) / G(n/2)
  const double log_full = 0.5 * std::log(M_PI) + std::lgamma(0.5 * (n - 1)) -
                          std::lgamma(0.5 * n);
  if (log_cap == -kInf) return 0.0;
  return std::exp(log_cap - log_full);
}

double solve_rho(const MeasureModel& model, const MeasureParams& params, int K) {
  if (K < 2) raise(ErrorKind::range, "the construction needs K >= 2");
  const double n = model.n;
  const double t0 = params.t0;
  const double outer = t0 * (1.0 + params.lambda);
  const double log_k = std::log(static_cast<double>(K));

  auto balance = [&](double rho) {
    const double ratio = rho / outer;
    return log_k + std::log(t0 / (std::sqrt(n) * rho)) +
           0.5 * (n - 3.0) * std::log1p(-ratio * ratio);
  };

  const double lo = t0 / (K * std::sqrt(n));
  const double hi = outer * (1.0 - 1e-12);
  if (!(balance(lo) > 0.0) || !(balance(hi) < 0.0)) {
    raise(ErrorKind::range, "no balancing offset for this K (out of range)");
  }
  return find_root(balance, lo, hi);
}

namespace {

double expectation_impl(const MeasureModel& model, const MeasureParams& params,
                        int K, double rho, bool restricted) {
  if (K < 1) raise(ErrorKind::range, "need at least one facet");
  if (!(rho > 0.0)) raise(ErrorKind::range, "offset must be positive");

  const int n = model.n;
  auto survival_log = [&](double t) {
    if (K == 1) return 0.0;
    const double p = cap_probability(n, t, rho);
    return (K - 1) * std::log1p(-p);
  };

  const double log_pref = log_hyperplane_prefactor(model, params.log_J_nm1);

  if (!restricted) {
    const double log_int = log_radial_facet_integral(model, rho, survival_log);
    if (log_int == -kInf) return 0.0;
    return K * std::exp(log_pref + log_int);
  }

  // Annulus restriction. With the offset inside the annulus inner edge the
  // geometric factor is frozen there (the designed form); otherwise fall
  // back to the pointwise factor over the clipped annulus. Both variants
  // stay certified lower bounds on the exact expectation.
  const double lo = params.t0 * (1.0 - params.lambda);
  double hi = params.t0 * (1.0 + params.lambda);
  if (model.potential.support_bound()) {
    hi = std::min(hi, *model.potential.support_bound());
  }
  if (!(lo < hi) || hi <= rho) return 0.0;

  if (rho < lo) {
    const double inner_ratio = rho / lo;
    const double log_geom = 0.5 * (n - 3.0) * std::log1p(-inner_ratio * inner_ratio);
    LogIntegrand f{[&](double t) {
                     const double base = log_g(model, n - 2, t);
                     return base == -kInf ? -kInf : base + survival_log(t);
                   },
                   lo, hi};
    const double log_int = integrate_log(f, 1e-11);
    if (log_int == -kInf) return 0.0;
    return K * std::exp(log_pref + log_geom + log_int);
  }

  LogIntegrand f{[&](double t) {
                   if (t <= rho) return -kInf;
                   const double phi = model.potential.value(t);
                   if (phi == kInf) return -kInf;
                   return 0.5 * (n - 3.0) * (std::log(t - rho) + std::log(t + rho)) +
                          std::log(t) - phi + survival_log(t);
                 },
                 rho, hi};
  const double log_int = integrate_log(f, 1e-11);
  if (log_int == -kInf) return 0.0;
  return K * std::exp(log_pref + log_int);
}

}  // namespace

double expected_surface_exact(const MeasureModel& model, const MeasureParams& params,
                              int K, double rho) {
  return expectation_impl(model, params, K, rho, false);
}

double expected_surface_restricted(const MeasureModel& model,
                                   const MeasureParams& params, int K, double rho) {
  return expectation_impl(model, params, K, rho, true);
}

double lower_bound_rhs(const MeasureParams& params, double K) {
  if (!(K >= 2.0)) raise(ErrorKind::range, "the scaling target needs K >= 2");
  return std::sqrt(static_cast<double>(params.n)) / params.t0 *
         std::sqrt(std::log(K));
}

std::string extremal_csv_header() {
  return "family,n,K,rho,expected_exact,mc_mean,mc_stderr,lower_rhs,in_range";
}

}  // namespace polysurf
