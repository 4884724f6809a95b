#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "polysurf/numerics.hpp"
#include "polysurf/rng.hpp"

namespace polysurf {

enum class PotentialFamily { gaussian, power, ball, custom };

/// Radial potential of a rotation-invariant log-concave density
/// e^{-phi(|y|)}: phi convex, nondecreasing, phi(0) = 0, optionally +inf
/// beyond a finite support bound. Built-in families:
///   gaussian     phi(t) = t^2/2
///   power p>=1   phi(t) = t^p/p
///   ball         phi = 0 on [0,1], +inf beyond (uniform mass on the ball)
class RadialPotential {
 public:
  RadialPotential() = default;  // gaussian

  static RadialPotential gaussian();
  static RadialPotential power(double p);
  static RadialPotential ball();
  static RadialPotential custom(std::function<double(double)> value,
                                std::function<double(double)> derivative,
                                std::optional<double> support_bound = {});

  double value(double t) const;       // +inf beyond a finite support bound
  double derivative(double t) const;  // one-sided inside the support
  std::optional<double> support_bound() const { return support_; }
  PotentialFamily family() const { return family_; }
  double exponent() const { return p_; }  // power exponent; 2 for gaussian
  std::string family_string() const;

  /// Grid spot-checks: phi(0) = 0, values nondecreasing, secant slopes
  /// nondecreasing, derivative consistent with central differences.
  void validate() const;

 private:
  PotentialFamily family_ = PotentialFamily::gaussian;
  double p_ = 2.0;
  std::optional<double> support_;
  std::function<double(double)> value_fn_;
  std::function<double(double)> deriv_fn_;
};

struct MeasureModel {
  int n = 2;
  RadialPotential potential;

  /// Parses a model family string: `gaussian`, `power:<p>`, or `ball`.
  static MeasureModel make(const std::string& family_spec, int n);
  std::string family_string() const { return potential.family_string(); }
};

/// Scalar parameters of a measure model. lambda_* are the relative radii
/// at which the radial weight g_{n-1} drops by a factor e from its peak;
/// their sum tracks the normalized deviation of |X|.
struct MeasureParams {
  int n = 0;
  std::string family;
  double t0 = 0.0;
  double lambda_i = 0.0;
  double lambda_o = 0.0;
  double lambda = 0.0;
  double mean_norm = 0.0;   // E|X|
  double var_norm = 0.0;    // Var|X|, clamped at 0
  double norm_cv = 0.0;     // sqrt(Var|X|)/E|X|
  double log_J_nm2 = 0.0;
  double log_J_nm1 = 0.0;
  double log_J_n = 0.0;
  double log_J_np1 = 0.0;
  double log_C_n = 0.0;
  bool var_clamped = false;
};

/// log of t^k e^{-phi(t)}; -inf at t = 0 for k > 0 and beyond the support.
double log_g(const MeasureModel& model, int k, double t);

/// log of the k-th radial moment J_k = int_0^inf t^k e^{-phi} dt.
double log_moment(const MeasureModel& model, int k);

/// log of the density normalizing constant, -log(n nu_n J_{n-1}).
double log_norm_const(const MeasureModel& model);

/// Peak radius of g_{n-1}: the root of t phi'(t) = n-1, or the argmax over
/// a finite support when the equation has no solution there (the support
/// edge, since the weight is still rising). Only the sign of t phi'(t) -
/// (n-1) is consulted, so potentials with derivative jumps are acceptable.
double solve_t0(const MeasureModel& model);

struct LambdaTriple {
  double inner = 0.0;
  double outer = 0.0;
  double total = 0.0;
};
LambdaTriple solve_lambda(const MeasureModel& model, double t0);

struct NormMoments {
  double mean = 0.0;
  double variance = 0.0;
  double cv = 0.0;
  bool clamped = false;
};
NormMoments norm_moments(const MeasureModel& model);

MeasureParams compute_params(const MeasureModel& model);

/// Mass of { |y| <= r } under the model.
double radial_cdf(const MeasureModel& model, double r);

double radial_interval_mass(const MeasureModel& model, double a, double b);

/// Inverse-CDF table for the radial law of |X| (density g_{n-1}/J_{n-1}).
QuantileTable build_radial_table(const MeasureModel& model,
                                 std::size_t nodes = 4096);

/// One draw from the model: uniform direction times a radius pulled from
/// the table. The stream is the caller's; identical streams give
/// identical points.
std::vector<double> sample_point(const MeasureModel& model,
                                 const QuantileTable& radial, RngStream& rng);

struct MuResult {
  double mu = 0.0;
  bool clamped_to_support = false;
};

/// Smallest mu > 0 with phi(t0(1+mu)) - phi(t0) - (n-1)log(1+mu) >= psi.
/// On a finite support where psi is unreachable, returns the support edge
/// with the clamped flag set.
MuResult solve_mu(const MeasureModel& model, double t0, double psi);
MuResult solve_mu(const MeasureModel& model, double psi);

/// CSV row schema for exported parameters.
std::string params_csv_header();
std::string params_csv_row(const MeasureParams& params);

}  // namespace polysurf
