#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

#include "polysurf/common.hpp"

namespace polysurf {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// A nonnegative integrand held in the log domain: eval(t) returns
/// log f(t), with -inf marking zeros of f. The upper limit may be +inf.
/// Callers flag log-concave (or unimodal-after-shift) integrands; the
/// quadrature locates the peak and truncates where the log falls 60 nats
/// below it, so nothing overflows even for radial weights t^k e^{-phi}
/// with k up to 10^4.
struct LogIntegrand {
  std::function<double(double)> log_eval;
  double lo = 0.0;
  double hi = kInf;
};

/// Peak location and the sub-window where the integrand stays within
/// `nats` of its maximum. `degenerate` marks an everywhere -inf integrand.
struct PeakWindow {
  double lo = 0.0;
  double hi = 0.0;
  double t_peak = 0.0;
  double log_peak = -kInf;
  bool degenerate = false;
};

PeakWindow locate_peak_window(const LogIntegrand& f, double nats = 60.0);

/// log of the integral of exp(log_eval) over [lo, hi], relative error
/// <= rel_tol on the linear scale. Returns -inf for a zero integrand.
/// Throws Error(domain) on NaN/+inf evaluations and Error(divergence)
/// when no decaying tail can be located on an infinite domain.
double integrate_log(const LogIntegrand& f, double rel_tol = 1e-10);

/// Root of a continuous monotone function with a sign change on [lo, hi].
/// Bisection with secant acceleration; ties and flat stretches resolve to
/// the leftmost root. tol is relative to max(1, |root|).
double find_root(const std::function<double(double)>& g, double lo, double hi,
                 double tol = 1e-12);

/// Monotone piecewise-linear inverse-CDF table. Nodes are placed
/// equispaced in CDF after a pilot pass equispaced in the variable, so
/// quantile() resolution follows the density mass.
class QuantileTable {
 public:
  QuantileTable(std::vector<double> nodes, std::vector<double> cdf_values);

  double quantile(double u) const;  // u clamped to [0,1]
  double cdf(double x) const;       // clamped to [0,1] outside the grid
  std::size_t size() const { return nodes_.size(); }
  double support_lo() const { return nodes_.front(); }
  double support_hi() const { return nodes_.back(); }

 private:
  std::vector<double> nodes_;
  std::vector<double> cdf_;
};

/// Tabulates the inverse CDF of exp(density_log). node_count >= 64.
/// Throws Error(degenerate_density) when the density has zero mass.
QuantileTable build_quantile_table(const LogIntegrand& density_log,
                                   std::size_t node_count = 4096);

enum class TailSide { outer, inner };

/// Outcome of the log-concave tail bound: the mass beyond (1+x)t0 (or
/// below (1-x)t0) against x*t0*g(t0)/(psi*e^psi). Comparisons run in the
/// log domain; the linear lhs/rhs fields may overflow to inf for extreme
/// peaks and are provided for reporting only.
struct TailCheck {
  bool holds = false;
  bool hypothesis_ok = false;  // f(t0) - f((1+-x)t0) >= psi, checked first
  double lhs = 0.0;
  double rhs = 0.0;
  double log_lhs = -kInf;
  double log_rhs = -kInf;
};

TailCheck check_logconcave_tail(const LogIntegrand& g_log, double t0, double x,
                                double psi, TailSide side);

// Standard normal helpers (shared by the isoperimetric checks).
double std_normal_pdf(double x);
double std_normal_cdf(double x);
double std_normal_quantile(double p);

/// log of the volume of the unit ball in dimension k.
double log_ball_volume(int k);

}  // namespace polysurf
