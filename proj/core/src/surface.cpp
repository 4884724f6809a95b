#include "polysurf/surface.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <map>

#include "polysurf/rng.hpp"

namespace polysurf {

namespace {

double support_upper(const MeasureModel& model) {
  return model.potential.support_bound() ? *model.potential.support_bound() : kInf;
}

double log_sum_exp(const std::vector<double>& logs) {
  double peak = -kInf;
  for (double v : logs) peak = std::max(peak, v);
  if (peak == -kInf) return -kInf;
  double acc = 0.0;
  for (double v : logs) acc += std::exp(v - peak);
  return peak + std::log(acc);
}

// Uniform unit direction inside the hyperplane through the origin with the
// given normal: project a standard normal vector and normalize.
void orthogonal_direction(std::span<const double> unit_normal, RngStream& rng,
                          std::vector<double>& out) {
  const std::size_t n = unit_normal.size();
  out.resize(n);
  for (;;) {
    for (auto& v : out) v = rng.normal();
    const double along = dot(out, unit_normal);
    double norm_sq = 0.0;
    for (std::size_t d = 0; d < n; ++d) {
      out[d] -= along * unit_normal[d];
      norm_sq += out[d] * out[d];
    }
    if (norm_sq > 1e-280) {
      const double inv = 1.0 / std::sqrt(norm_sq);
      for (auto& v : out) v *= inv;
      return;
    }
  }
}

SurfaceEstimate exact_zero() {
  SurfaceEstimate est;
  est.method = SurfaceMethod::exact_1d;
  return est;
}

}  // namespace

const char* to_string(SurfaceMethod method) {
  switch (method) {
    case SurfaceMethod::facet_mc:
      return "facet_mc";
    case SurfaceMethod::shell_mc:
      return "shell_mc";
    case SurfaceMethod::exact_1d:
      return "exact_1d";
    case SurfaceMethod::exact_2d:
      return "exact_2d";
  }
  return "unknown";
}

double log_hyperplane_prefactor(const MeasureModel& model, double log_j_nm1) {
  const int n = model.n;
  return std::log(n - 1.0) + log_ball_volume(n - 1) -
         std::log(static_cast<double>(n)) - log_ball_volume(n) - log_j_nm1;
}

double log_radial_facet_integral(const MeasureModel& model, double rho,
                                 const std::function<double(double)>& extra_log) {
  if (rho < 0.0) raise(ErrorKind::usage, "hyperplane distance must be >= 0");
  const int n = model.n;
  const double upper = support_upper(model);
  if (rho >= upper) return -kInf;
  auto extra = [&extra_log](double t) { return extra_log ? extra_log(t) : 0.0; };

  if (rho == 0.0) {
    LogIntegrand f{[&model, &extra, n](double t) {
                     const double base = log_g(model, n - 2, t);
                     return base == -kInf ? -kInf : base + extra(t);
                   },
                   0.0, upper};
    return integrate_log(f, 1e-11);
  }

  if (n == 2) {
    // t = rho*cosh(w) removes the inverse-square-root endpoint factor.
    const double w_hi = std::isinf(upper) ? kInf : std::acosh(upper / rho);
    LogIntegrand f{[&model, &extra, rho](double w) {
                     const double t = rho * std::cosh(w);
                     const double phi = model.potential.value(t);
                     if (phi == kInf) return -kInf;
                     return std::log(rho) + std::log(std::cosh(w)) - phi + extra(t);
                   },
                   0.0, w_hi};
    return integrate_log(f, 1e-11);
  }

  LogIntegrand f{[&model, &extra, rho, n](double t) {
                   if (t <= rho) return -kInf;
                   const double phi = model.potential.value(t);
                   if (phi == kInf) return -kInf;
                   // (t-rho)(t+rho) form avoids cancellation near the endpoint
                   return 0.5 * (n - 3) * (std::log(t - rho) + std::log(t + rho)) +
                          std::log(t) - phi + extra(t);
                 },
                 rho, upper};
  return integrate_log(f, 1e-11);
}

SurfaceEstimate hyperplane_measure(const MeasureModel& model, double rho) {
  const double log_j_nm1 = log_moment(model, model.n - 1);
  const double log_int = log_radial_facet_integral(model, rho, {});
  SurfaceEstimate est;
  est.method = SurfaceMethod::exact_1d;
  est.value = (log_int == -kInf)
                  ? 0.0
                  : std::exp(log_hyperplane_prefactor(model, log_j_nm1) + log_int);
  return est;
}

namespace {

// Radius law along a facet hyperplane at distance |rho| from the origin:
// density proportional to s^{n-2} e^{-phi(sqrt(s^2 + rho^2))}.
QuantileTable facet_radius_table(const MeasureModel& model, double rho) {
  const int n = model.n;
  const double upper = support_upper(model);
  const double s_hi =
      std::isinf(upper) ? kInf : std::sqrt(std::max(upper * upper - rho * rho, 0.0));
  LogIntegrand density{[&model, rho, n](double s) {
                         const double t = std::hypot(s, rho);
                         const double phi = model.potential.value(t);
                         if (phi == kInf) return -kInf;
                         if (s <= 0.0) return n == 2 ? -phi : -kInf;
                         return (n - 2) * std::log(s) - phi;
                       },
                       0.0, s_hi};
  return build_quantile_table(density);
}

SurfaceEstimate facet_measure_impl(const Polytope& p, int facet,
                                   std::int64_t n_samples, std::uint64_t seed,
                                   double hyperplane_value,
                                   const QuantileTable& radius_table) {
  const auto& own = p.halfspaces[facet];
  const int n = p.dim;

  std::int64_t hits = 0;
  std::vector<double> direction(n), x(n);
  for (std::int64_t start = 0; start < n_samples; start += kMcChunk) {
    const std::int64_t count = std::min(kMcChunk, n_samples - start);
    RngStream rng = derive_stream(
        seed, (static_cast<std::uint64_t>(facet + 1) << 40) ^
                  static_cast<std::uint64_t>(start / kMcChunk));
    for (std::int64_t i = 0; i < count; ++i) {
      orthogonal_direction(own.normal, rng, direction);
      const double radius = radius_table.quantile(rng.uniform01());
      for (int d = 0; d < n; ++d) {
        x[d] = own.offset * own.normal[d] + radius * direction[d];
      }
      bool inside = true;
      for (int j = 0; inside && j < p.facet_count(); ++j) {
        if (j == facet) continue;
        const auto& other = p.halfspaces[j];
        inside = dot(other.normal, x) <= other.offset;
      }
      hits += inside;
    }
  }

  const double accept = static_cast<double>(hits) / static_cast<double>(n_samples);
  SurfaceEstimate est;
  est.method = SurfaceMethod::facet_mc;
  est.value = hyperplane_value * accept;
  // binomial error with a one-hit floor: an all-or-nothing acceptance count
  // cannot resolve the error below a single sample's worth
  est.std_error = hyperplane_value *
                  std::max(std::sqrt(accept * (1.0 - accept) /
                                     static_cast<double>(n_samples)),
                           1.0 / static_cast<double>(n_samples));
  est.samples = n_samples;
  return est;
}

}  // namespace

SurfaceEstimate facet_measure_mc(const MeasureModel& model, const Polytope& p,
                                 int facet, std::int64_t n_samples,
                                 std::uint64_t seed) {
  validate_polytope(p);
  if (model.n != p.dim) raise(ErrorKind::dimension, "model/polytope dimension mismatch");
  if (facet < 0 || facet >= p.facet_count()) {
    raise(ErrorKind::range, "facet index out of range");
  }
  if (n_samples < 1000) raise(ErrorKind::usage, "facet sampler needs >= 1000 samples");

  const double rho = std::abs(p.halfspaces[facet].offset);
  const SurfaceEstimate plane = hyperplane_measure(model, rho);
  if (plane.value <= 0.0) return exact_zero();
  if (p.facet_count() == 1) return plane;

  const QuantileTable table = facet_radius_table(model, rho);
  return facet_measure_impl(p, facet, n_samples, seed, plane.value, table);
}

SurfaceEstimate surface_mc(const MeasureModel& model, const Polytope& p,
                           std::int64_t n_per_facet, std::uint64_t seed) {
  validate_polytope(p);
  if (model.n != p.dim) raise(ErrorKind::dimension, "model/polytope dimension mismatch");
  if (n_per_facet < 1000) raise(ErrorKind::usage, "facet sampler needs >= 1000 samples");

  const double log_j_nm1 = log_moment(model, model.n - 1);
  const double log_pref = log_hyperplane_prefactor(model, log_j_nm1);

  // Facets at the same distance share one radius table (bit-exact key).
  std::map<std::uint64_t, QuantileTable> tables;
  auto table_for = [&](double rho) -> const QuantileTable& {
    std::uint64_t key = 0;
    std::memcpy(&key, &rho, sizeof key);
    auto it = tables.find(key);
    if (it == tables.end()) {
      it = tables.emplace(key, facet_radius_table(model, rho)).first;
    }
    return it->second;
  };

  SurfaceEstimate total;
  total.method =
      p.facet_count() == 1 ? SurfaceMethod::exact_1d : SurfaceMethod::facet_mc;
  double var = 0.0;
  for (int i = 0; i < p.facet_count(); ++i) {
    const double rho = std::abs(p.halfspaces[i].offset);
    const double log_int = log_radial_facet_integral(model, rho, {});
    if (log_int == -kInf) continue;  // hyperplane beyond the measure: exact zero
    const double plane = std::exp(log_pref + log_int);
    if (p.facet_count() == 1) {
      total.value += plane;
      continue;
    }
    const SurfaceEstimate facet =
        facet_measure_impl(p, i, n_per_facet, seed, plane, table_for(rho));
    total.value += facet.value;
    var += facet.std_error * facet.std_error;
    total.samples += facet.samples;
  }
  total.std_error = std::sqrt(var);
  return total;
}

double default_shell_eps(const MeasureParams& params) {
  return 0.01 * params.t0 / std::sqrt(static_cast<double>(params.n));
}

SurfaceEstimate shell_oracle_mc(const MeasureModel& model, const MeasureParams& params,
                                const Polytope& p, double eps_big, double eps_small,
                                std::int64_t n_samples, std::uint64_t seed) {
  validate_polytope(p);
  if (model.n != p.dim) raise(ErrorKind::dimension, "model/polytope dimension mismatch");
  if (!(eps_small > 0.0) || std::abs(eps_big / eps_small - 2.0) > 1e-9) {
    raise(ErrorKind::usage, "shell estimator expects eps_big = 2 * eps_small");
  }
  const double eps_cap = params.t0 / (4.0 * std::sqrt(static_cast<double>(params.n)));
  if (eps_big > eps_cap * (1.0 + 1e-12)) {
    raise(ErrorKind::range, "shell width too coarse for this measure");
  }
  if (n_samples < 10000) raise(ErrorKind::usage, "shell estimator needs >= 1e4 samples");

  const QuantileTable radial = build_radial_table(model);
  const double inv_small = 1.0 / eps_small;
  const double inv_big = 1.0 / eps_big;
  const double proj_tol = 1e-4 * eps_small;

  double sum = 0.0, sum_sq = 0.0;
  std::int64_t candidates = 0, unconverged = 0;
  for (std::int64_t start = 0; start < n_samples; start += kMcChunk) {
    const std::int64_t count = std::min(kMcChunk, n_samples - start);
    RngStream rng = derive_stream(seed, static_cast<std::uint64_t>(start / kMcChunk));
    for (std::int64_t i = 0; i < count; ++i) {
      const auto x = sample_point(model, radial, rng);
      const double violation = max_violation(p, x);
      // max violation is a distance lower bound, so this filter is exact
      if (violation <= 0.0 || violation > eps_big) continue;
      ++candidates;
      const auto dist = distance(p, x, proj_tol);
      unconverged += !dist.converged;
      double z = 0.0;
      if (dist.distance <= eps_small) z += 2.0 * inv_small;
      if (dist.distance <= eps_big) z -= inv_big;
      sum += z;
      sum_sq += z * z;
    }
  }

  const double mean = sum / static_cast<double>(n_samples);
  const double var = std::max(0.0, sum_sq / n_samples - mean * mean);
  SurfaceEstimate est;
  est.method = SurfaceMethod::shell_mc;
  est.value = std::max(0.0, mean);
  // sample error with a one-hit floor: zero shell hits report the noise a
  // single hit would have carried, not a spurious zero
  est.std_error =
      std::max(std::sqrt(var / std::max<std::int64_t>(n_samples - 1, 1)),
               2.0 * inv_small / static_cast<double>(n_samples));
  est.samples = n_samples;
  if (candidates > 0 && unconverged * 1000 > candidates) {
    est.warning = "projection iteration cap hit on more than 0.1% of shell candidates";
  }
  return est;
}

SurfaceEstimate polygon_exact_2d(const MeasureModel& model, const Polytope& p) {
  validate_polytope(p);
  if (model.n != 2 || p.dim != 2) {
    raise(ErrorKind::dimension, "planar integrator requires n = 2");
  }

  // Truncation radius: where the radial weight has fallen 60 nats below peak.
  const double upper = support_upper(model);
  LogIntegrand radial{[&model](double t) { return log_g(model, 1, t); }, 0.0, upper};
  const double t_max = locate_peak_window(radial).hi;

  std::vector<double> per_facet;
  for (int i = 0; i < p.facet_count(); ++i) {
    const auto& own = p.halfspaces[i];
    const double rho = own.offset;
    const double reach_sq = t_max * t_max - rho * rho;
    if (reach_sq <= 0.0) continue;  // line entirely beyond the mass
    double s_min = -std::sqrt(reach_sq);
    double s_max = std::sqrt(reach_sq);
    const double vx = -own.normal[1], vy = own.normal[0];

    bool empty = false;
    for (int j = 0; j < p.facet_count() && !empty; ++j) {
      if (j == i) continue;
      const auto& other = p.halfspaces[j];
      const double along = vx * other.normal[0] + vy * other.normal[1];
      const double room = other.offset - rho * dot(own.normal, other.normal);
      if (std::abs(along) <= 1e-14) {
        empty = room < 0.0;
      } else if (along > 0.0) {
        s_max = std::min(s_max, room / along);
      } else {
        s_min = std::max(s_min, room / along);
      }
    }
    if (empty || s_min >= s_max) continue;

    LogIntegrand seg{[&model, rho](double s) {
                       const double phi = model.potential.value(std::hypot(s, rho));
                       return phi == kInf ? -kInf : -phi;
                     },
                     s_min, s_max};
    per_facet.push_back(integrate_log(seg, 1e-11));
  }

  SurfaceEstimate est;
  est.method = SurfaceMethod::exact_2d;
  const double log_total = log_sum_exp(per_facet);
  est.value = (log_total == -kInf) ? 0.0
                                   : std::exp(log_norm_const(model) + log_total);
  return est;
}

VolumeEstimate volume_mc(const MeasureModel& model, const Polytope& p,
                         std::int64_t n_samples, std::uint64_t seed) {
  validate_polytope(p);
  if (model.n != p.dim) raise(ErrorKind::dimension, "model/polytope dimension mismatch");
  if (n_samples < 1000) raise(ErrorKind::usage, "volume sampler needs >= 1000 samples");

  const QuantileTable radial = build_radial_table(model);
  std::int64_t hits = 0;
  for (std::int64_t start = 0; start < n_samples; start += kMcChunk) {
    const std::int64_t count = std::min(kMcChunk, n_samples - start);
    RngStream rng = derive_stream(seed, static_cast<std::uint64_t>(start / kMcChunk));
    for (std::int64_t i = 0; i < count; ++i) {
      hits += contains(p, sample_point(model, radial, rng));
    }
  }
  VolumeEstimate est;
  est.value = static_cast<double>(hits) / static_cast<double>(n_samples);
  est.std_error =
      std::sqrt(est.value * (1.0 - est.value) / static_cast<double>(n_samples));
  est.samples = n_samples;
  return est;
}

BoundaryDiagnostics pointwise_diagnostics(const MeasureModel& model,
                                          const MeasureParams& params,
                                          const Polytope& p,
                                          std::span<const double> y, int facet) {
  if (facet < 0 || facet >= p.facet_count()) {
    raise(ErrorKind::range, "facet index out of range");
  }
  if (static_cast<int>(y.size()) != p.dim) {
    raise(ErrorKind::dimension, "point dimension does not match the polytope");
  }
  const auto& h = p.halfspaces[facet];
  if (std::abs(dot(h.normal, y) - h.offset) > 1e-8) {
    raise(ErrorKind::domain, "point does not lie on the named facet hyperplane");
  }
  const double radius = norm(y);
  BoundaryDiagnostics diag;
  diag.alpha = h.offset / radius;
  // log-weight difference, not the explicit formula: stable for |y| near t0
  diag.psi = log_g(model, model.n - 1, params.t0) - log_g(model, model.n - 1, radius);
  diag.r = std::sqrt(static_cast<double>(model.n)) / params.t0 * h.offset;
  return diag;
}

double pointwise_bound(const MeasureParams& params, const BoundaryDiagnostics& diag) {
  const double scale = std::sqrt(static_cast<double>(params.n)) / params.t0;
  const double psi = std::max(diag.psi, 0.0);
  const double second = diag.r * psi + std::sqrt(psi);
  if (!(diag.r > 0.0)) return scale * second;
  const double first = 1.0 / (params.lambda * diag.r * std::exp(psi));
  return scale * std::min(first, second);
}

PointwiseMin minimize_pointwise(double lambda, double r) {
  if (!(lambda > 0.0) || !(lambda < 1.0)) {
    raise(ErrorKind::range, "lambda must lie in (0,1)");
  }
  if (!(r > 0.0)) raise(ErrorKind::range, "r must be positive");

  const double inv_lr = 1.0 / (lambda * r);
  auto objective = [&](double psi) {
    return inv_lr * std::exp(-psi) + r * psi + std::sqrt(psi);
  };
  const double psi_hi = std::log(1.0 / lambda) + 10.0;

  // Dense scan first (the objective can dip after an initial rise), then
  // golden-section inside the best bracket.
  constexpr int kGrid = 4096;
  double best_psi = 0.0, best_val = objective(0.0);
  for (int i = 1; i <= kGrid; ++i) {
    const double psi = psi_hi * i / kGrid;
    const double val = objective(psi);
    if (val < best_val) {
      best_val = val;
      best_psi = psi;
    }
  }
  double lo = std::max(0.0, best_psi - psi_hi / kGrid);
  double hi = std::min(psi_hi, best_psi + psi_hi / kGrid);
  constexpr double kInvPhi = 0.6180339887498948482;
  double x1 = hi - kInvPhi * (hi - lo);
  double x2 = lo + kInvPhi * (hi - lo);
  double f1 = objective(x1), f2 = objective(x2);
  for (int iter = 0; iter < 200 && hi - lo > 1e-12; ++iter) {
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
  PointwiseMin out;
  out.psi_star = 0.5 * (lo + hi);
  out.value = objective(out.psi_star);
  if (best_val < out.value) {
    out.psi_star = best_psi;
    out.value = best_val;
  }
  return out;
}

std::string surface_csv_header() {
  return "method,family,n,K,value,stderr,samples,seed";
}

std::string surface_csv_row(const SurfaceEstimate& est, const std::string& family,
                            int n, int k, std::uint64_t seed) {
  char buf[320];
  std::snprintf(buf, sizeof buf, "%s,%s,%d,%d,%.12g,%.12g,%lld,%llu",
                to_string(est.method), family.c_str(), n, k, est.value,
                est.std_error, static_cast<long long>(est.samples),
                static_cast<unsigned long long>(seed));
  return buf;
}

}  // namespace polysurf
