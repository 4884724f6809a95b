#include "polysurf/measure.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace polysurf {

namespace {

double potential_upper_limit(const RadialPotential& phi) {
  return phi.support_bound() ? *phi.support_bound() : kInf;
}

LogIntegrand radial_weight(const MeasureModel& model, int k, double lo, double hi) {
  return LogIntegrand{
      [&model, k](double t) { return log_g(model, k, t); }, lo, hi};
}

}  // namespace

RadialPotential RadialPotential::gaussian() {
  RadialPotential phi;
  phi.family_ = PotentialFamily::gaussian;
  phi.p_ = 2.0;
  return phi;
}

RadialPotential RadialPotential::power(double p) {
  if (!(p >= 1.0)) {
    raise(ErrorKind::range, "power potential requires p >= 1 for log-concavity");
  }
  RadialPotential phi;
  phi.family_ = PotentialFamily::power;
  phi.p_ = p;
  return phi;
}

RadialPotential RadialPotential::ball() {
  RadialPotential phi;
  phi.family_ = PotentialFamily::ball;
  phi.p_ = 0.0;
  phi.support_ = 1.0;
  return phi;
}

RadialPotential RadialPotential::custom(std::function<double(double)> value,
                                        std::function<double(double)> derivative,
                                        std::optional<double> support_bound) {
  if (support_bound && !(*support_bound > 0.0)) {
    raise(ErrorKind::range, "support bound must be positive");
  }
  RadialPotential phi;
  phi.family_ = PotentialFamily::custom;
  phi.p_ = 0.0;
  phi.support_ = support_bound;
  phi.value_fn_ = std::move(value);
  phi.deriv_fn_ = std::move(derivative);
  return phi;
}

double RadialPotential::value(double t) const {
  if (t < 0.0) raise(ErrorKind::domain, "radial potential evaluated at t < 0");
  if (support_ && t > *support_) return kInf;
  switch (family_) {
    case PotentialFamily::gaussian:
      return 0.5 * t * t;
    case PotentialFamily::power:
      return std::pow(t, p_) / p_;
    case PotentialFamily::ball:
      return 0.0;
    case PotentialFamily::custom:
      return value_fn_(t);
  }
  return 0.0;
}

double RadialPotential::derivative(double t) const {
  if (t < 0.0) raise(ErrorKind::domain, "radial potential evaluated at t < 0");
  if (support_ && t > *support_) return kInf;
  switch (family_) {
    case PotentialFamily::gaussian:
      return t;
    case PotentialFamily::power:
      return std::pow(t, p_ - 1.0);
    case PotentialFamily::ball:
      return 0.0;
    case PotentialFamily::custom:
      return deriv_fn_(t);
  }
  return 0.0;
}

std::string RadialPotential::family_string() const {
  switch (family_) {
    case PotentialFamily::gaussian:
      return "gaussian";
    case PotentialFamily::power: {
      char buf[48];
      std::snprintf(buf, sizeof buf, "power:%g", p_);
      return buf;
    }
    case PotentialFamily::ball:
      return "ball";
    case PotentialFamily::custom:
      return "custom";
  }
  return "custom";
}

void RadialPotential::validate() const {
  if (value(0.0) != 0.0) {
    raise(ErrorKind::domain, "radial potential must vanish at t = 0");
  }
  const double hi = support_ ? *support_ * (1.0 - 1e-3) : 20.0;
  const double lo = hi * 1e-3;
  constexpr int kGrid = 64;

  double prev_t = 0.0, prev_v = 0.0, prev_slope = -kInf;
  for (int i = 0; i < kGrid; ++i) {
    const double t = lo + (hi - lo) * i / (kGrid - 1);
    const double v = value(t);
    if (!std::isfinite(v)) {
      raise(ErrorKind::domain, "radial potential non-finite inside its support");
    }
    if (v < prev_v - 1e-12 * std::max(1.0, std::abs(prev_v))) {
      raise(ErrorKind::domain, "radial potential must be nondecreasing");
    }
    const double slope = (v - prev_v) / (t - prev_t);
    if (slope < prev_slope - 1e-9 * std::max(1.0, std::abs(prev_slope))) {
      raise(ErrorKind::domain, "radial potential must be convex");
    }
    // derivative consistency against central differences
    const double h = std::max(1e-6 * t, 1e-9);
    if (t - h > 0.0 && (!support_ || t + h < *support_)) {
      const double fd = (value(t + h) - value(t - h)) / (2.0 * h);
      const double d = derivative(t);
      if (std::abs(fd - d) > 1e-6 * std::max(1.0, std::abs(d))) {
        raise(ErrorKind::domain,
              "radial potential derivative inconsistent with its values");
      }
    }
    prev_slope = slope;
    prev_t = t;
    prev_v = v;
  }
}

MeasureModel MeasureModel::make(const std::string& family_spec, int n) {
  if (n < 2) raise(ErrorKind::range, "dimension must be at least 2");
  MeasureModel model;
  model.n = n;
  if (family_spec == "gaussian") {
    model.potential = RadialPotential::gaussian();
  } else if (family_spec == "ball") {
    model.potential = RadialPotential::ball();
  } else if (family_spec.rfind("power:", 0) == 0) {
    std::size_t pos = 0;
    double p = 0.0;
    try {
      p = std::stod(family_spec.substr(6), &pos);
    } catch (const std::exception&) {
      raise(ErrorKind::parse, "bad power exponent in '" + family_spec + "'");
    }
    if (pos != family_spec.size() - 6) {
      raise(ErrorKind::parse, "bad power exponent in '" + family_spec + "'");
    }
    model.potential = RadialPotential::power(p);
  } else {
    raise(ErrorKind::parse, "unknown measure family '" + family_spec + "'");
  }
  model.potential.validate();
  return model;
}

double log_g(const MeasureModel& model, int k, double t) {
  if (t < 0.0) raise(ErrorKind::domain, "radial weight evaluated at t < 0");
  if (k < 0) raise(ErrorKind::usage, "moment order must be nonnegative");
  if (t == 0.0) return k > 0 ? -kInf : -model.potential.value(0.0);
  const double phi = model.potential.value(t);
  if (phi == kInf) return -kInf;
  return k * std::log(t) - phi;
}

double log_moment(const MeasureModel& model, int k) {
  const double hi = potential_upper_limit(model.potential);
  return integrate_log(radial_weight(model, k, 0.0, hi), 1e-11);
}

double log_norm_const(const MeasureModel& model) {
  return -(std::log(static_cast<double>(model.n)) + log_ball_volume(model.n) +
           log_moment(model, model.n - 1));
}

double solve_t0(const MeasureModel& model) {
  const int n = model.n;
  const auto& phi = model.potential;
  auto slope_gap = [&](double t) { return t * phi.derivative(t) - (n - 1.0); };

  if (phi.support_bound()) {
    const double b = *phi.support_bound();
    const double edge = b * (1.0 - 1e-12);
    if (slope_gap(edge) <= 0.0) {
      return b;  // weight still increasing at the edge: boundary maximum
    }
    double lo = edge;
    for (int i = 0; i < 2000 && slope_gap(lo) > 0.0; ++i) lo *= 0.5;
    return find_root(slope_gap, lo, edge);
  }

  double lo = 1.0, hi = 1.0;
  int doublings = 0;
  while (slope_gap(lo) > 0.0) {
    lo *= 0.5;
    if (++doublings > 1000) raise(ErrorKind::divergence, "no peak radius below t = 1");
  }
  doublings = 0;
  while (slope_gap(hi) < 0.0) {
    hi *= 2.0;
    if (++doublings > 1000) {
      raise(ErrorKind::divergence, "radial weight has no interior maximum");
    }
  }
  return find_root(slope_gap, lo, hi);
}

LambdaTriple solve_lambda(const MeasureModel& model, double t0) {
  const int n = model.n;
  const auto& phi = model.potential;
  const double phi_t0 = phi.value(t0);
  auto drop_outer = [&](double x) {
    return phi.value(t0 * (1.0 + x)) - phi_t0 - (n - 1.0) * std::log1p(x) - 1.0;
  };
  auto drop_inner = [&](double x) {
    return phi.value(t0 * (1.0 - x)) - phi_t0 - (n - 1.0) * std::log1p(-x) - 1.0;
  };

  LambdaTriple lambda;

  if (phi.support_bound()) {
    const double x_edge = *phi.support_bound() / t0 - 1.0;
    if (x_edge <= 1e-14) {
      lambda.outer = 0.0;  // weight vanishes immediately past the peak
    } else if (drop_outer(x_edge * (1.0 - 1e-12)) < 0.0) {
      lambda.outer = x_edge;  // threshold first reached at the support edge
    } else {
      lambda.outer = find_root(drop_outer, 0.0, x_edge * (1.0 - 1e-12));
    }
  } else {
    double hi = 1.0;
    int doublings = 0;
    while (drop_outer(hi) < 0.0) {
      hi *= 2.0;
      if (++doublings > 1000) {
        raise(ErrorKind::divergence, "outer shell equation has no root");
      }
    }
    lambda.outer = find_root(drop_outer, 0.0, hi);
  }

  lambda.inner = find_root(drop_inner, 0.0, 1.0 - 1e-14);
  lambda.total = lambda.inner + lambda.outer;
  return lambda;
}

NormMoments norm_moments(const MeasureModel& model) {
  const double log_j_nm1 = log_moment(model, model.n - 1);
  const double log_j_n = log_moment(model, model.n);
  const double log_j_np1 = log_moment(model, model.n + 1);

  NormMoments m;
  m.mean = std::exp(log_j_n - log_j_nm1);
  const double second = std::exp(log_j_np1 - log_j_nm1);
  m.variance = second - m.mean * m.mean;
  if (m.variance < 0.0) {  // cancellation guard for very peaked radial laws
    m.variance = 0.0;
    m.clamped = true;
  }
  m.cv = std::sqrt(m.variance) / m.mean;
  return m;
}

MeasureParams compute_params(const MeasureModel& model) {
  MeasureParams params;
  params.n = model.n;
  params.family = model.family_string();
  params.t0 = solve_t0(model);
  const LambdaTriple lambda = solve_lambda(model, params.t0);
  params.lambda_i = lambda.inner;
  params.lambda_o = lambda.outer;
  params.lambda = lambda.total;
  params.log_J_nm2 = log_moment(model, model.n - 2);
  params.log_J_nm1 = log_moment(model, model.n - 1);
  params.log_J_n = log_moment(model, model.n);
  params.log_J_np1 = log_moment(model, model.n + 1);
  params.log_C_n = -(std::log(static_cast<double>(model.n)) +
                     log_ball_volume(model.n) + params.log_J_nm1);
  params.mean_norm = std::exp(params.log_J_n - params.log_J_nm1);
  const double second = std::exp(params.log_J_np1 - params.log_J_nm1);
  params.var_norm = second - params.mean_norm * params.mean_norm;
  if (params.var_norm < 0.0) {
    params.var_norm = 0.0;
    params.var_clamped = true;
  }
  params.norm_cv = std::sqrt(params.var_norm) / params.mean_norm;
  return params;
}

double radial_cdf(const MeasureModel& model, double r) {
  if (r <= 0.0) return 0.0;
  const double hi = potential_upper_limit(model.potential);
  const double cap = std::min(r, hi);
  if (std::isinf(cap)) return 1.0;
  const double log_j = log_moment(model, model.n - 1);
  const double log_part =
      integrate_log(radial_weight(model, model.n - 1, 0.0, cap), 1e-11);
  return std::clamp(std::exp(log_part - log_j), 0.0, 1.0);
}

double radial_interval_mass(const MeasureModel& model, double a, double b) {
  const double fa = (a <= 0.0) ? 0.0 : radial_cdf(model, a);
  const double fb = std::isinf(b) ? 1.0 : radial_cdf(model, b);
  return std::max(0.0, fb - fa);
}

QuantileTable build_radial_table(const MeasureModel& model, std::size_t nodes) {
  const double hi = potential_upper_limit(model.potential);
  return build_quantile_table(radial_weight(model, model.n - 1, 0.0, hi), nodes);
}

std::vector<double> sample_point(const MeasureModel& model,
                                 const QuantileTable& radial, RngStream& rng) {
  std::vector<double> x(model.n);
  double norm_sq = 0.0;
  do {
    norm_sq = 0.0;
    for (auto& v : x) {
      v = rng.normal();
      norm_sq += v * v;
    }
  } while (norm_sq < 1e-280);
  const double radius = radial.quantile(rng.uniform01());
  const double scale = radius / std::sqrt(norm_sq);
  for (auto& v : x) v *= scale;
  return x;
}

MuResult solve_mu(const MeasureModel& model, double t0, double psi) {
  if (!(psi >= 1.0)) raise(ErrorKind::range, "shell exponent psi must be >= 1");
  const int n = model.n;
  const auto& phi = model.potential;
  const double phi_t0 = phi.value(t0);
  auto gap = [&](double x) {
    return phi.value(t0 * (1.0 + x)) - phi_t0 - (n - 1.0) * std::log1p(x) - psi;
  };

  MuResult result;
  if (phi.support_bound()) {
    const double x_edge = *phi.support_bound() / t0 - 1.0;
    if (x_edge <= 1e-14) {
      result.mu = 0.0;  // condition holds immediately past the support edge
      return result;
    }
    if (gap(x_edge * (1.0 - 1e-12)) < 0.0) {
      result.mu = x_edge;
      result.clamped_to_support = true;
      return result;
    }
    result.mu = find_root(gap, 0.0, x_edge * (1.0 - 1e-12));
    return result;
  }

  double hi = 1.0;
  int doublings = 0;
  while (gap(hi) < 0.0) {
    hi *= 2.0;
    if (++doublings > 1000) {
      raise(ErrorKind::divergence, "shell equation has no root");
    }
  }
  result.mu = find_root(gap, 0.0, hi);
  return result;
}

MuResult solve_mu(const MeasureModel& model, double psi) {
  return solve_mu(model, solve_t0(model), psi);
}

std::string params_csv_header() {
  return "family,n,t0,lambda_i,lambda_o,lambda,E,V,log_J_nm1,log_C_n";
}

std::string params_csv_row(const MeasureParams& params) {
  char buf[420];
  std::snprintf(buf, sizeof buf,
                "%s,%d,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g",
                params.family.c_str(), params.n, params.t0, params.lambda_i,
                params.lambda_o, params.lambda, params.mean_norm, params.norm_cv,
                params.log_J_nm1, params.log_C_n);
  return buf;
}

}  // namespace polysurf
