#include "polysurf/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <utility>

namespace polysurf {

namespace {

struct GlRule {
  std::vector<double> nodes;    // on (-1, 1)
  std::vector<double> weights;
};

// Gauss-Legendre nodes/weights by Newton iteration on the Legendre
// recurrence. Computed once per order and cached.
GlRule make_gl_rule(int order) {
  GlRule rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  const int half = (order + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= order; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = order * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    rule.nodes[i] = -x;
    rule.nodes[order - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.weights[i] = w;
    rule.weights[order - 1 - i] = w;
  }
  return rule;
}

const GlRule& gl7() {
  static const GlRule rule = make_gl_rule(7);
  return rule;
}

const GlRule& gl15() {
  static const GlRule rule = make_gl_rule(15);
  return rule;
}

// Shifted integrand exp(f - f_peak), with domain errors on NaN/+inf.
double shifted_eval(const LogIntegrand& f, double t, double log_peak) {
  const double v = f.log_eval(t);
  if (std::isnan(v) || v == kInf) {
    raise(ErrorKind::domain, "integrand evaluated to a non-finite log value");
  }
  const double d = v - log_peak;
  return d < -745.0 ? 0.0 : std::exp(d);
}

double gl_panel(const LogIntegrand& f, double log_peak, const GlRule& rule,
                double a, double b) {
  const double mid = 0.5 * (a + b);
  const double rad = 0.5 * (b - a);
  double acc = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    acc += rule.weights[i] * shifted_eval(f, mid + rad * rule.nodes[i], log_peak);
  }
  return acc * rad;
}

double safe_log_eval(const LogIntegrand& f, double t) {
  const double v = f.log_eval(t);
  if (std::isnan(v) || v == kInf) {
    raise(ErrorKind::domain, "integrand evaluated to a non-finite log value");
  }
  return v;
}

// Golden-section maximization of the log integrand on [a, b].
std::pair<double, double> golden_max(const LogIntegrand& f, double a, double b) {
  constexpr double kInvPhi = 0.6180339887498948482;
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = safe_log_eval(f, x1);
  double f2 = safe_log_eval(f, x2);
  for (int iter = 0; iter < 80 && (b - a) > 1e-14 * std::max(1.0, std::abs(a) + std::abs(b)); ++iter) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = safe_log_eval(f, x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = safe_log_eval(f, x1);
    }
  }
  return f1 > f2 ? std::make_pair(x1, f1) : std::make_pair(x2, f2);
}

// First point beyond which f stays `nats` below the peak, found by
// bisection on the decaying side. `from` has f >= thresh, `to` has f < thresh.
double threshold_cross(const LogIntegrand& f, double thresh, double from, double to) {
  for (int iter = 0; iter < 200 && std::abs(to - from) >
       1e-13 * std::max(1.0, std::abs(from) + std::abs(to)); ++iter) {
    const double mid = 0.5 * (from + to);
    if (safe_log_eval(f, mid) >= thresh) {
      from = mid;
    } else {
      to = mid;
    }
  }
  return to;
}

}  // namespace

PeakWindow locate_peak_window(const LogIntegrand& f, double nats) {
  if (!(f.lo < f.hi)) {
    raise(ErrorKind::domain, "integrand domain is empty");
  }

  // A finite probe span: grow geometrically on infinite domains until the
  // integrand has fallen `nats` below the best value seen.
  double probe_hi = f.hi;
  constexpr int kScan = 513;
  std::array<double, kScan> ts{}, vs{};
  double best_v = -kInf;
  int best_i = 0;

  auto scan = [&](double lo, double hi) {
    best_v = -kInf;
    best_i = 0;
    for (int i = 0; i < kScan; ++i) {
      const double t = lo + (hi - lo) * i / (kScan - 1);
      const double v = safe_log_eval(f, t);
      ts[i] = t;
      vs[i] = v;
      if (v > best_v) {
        best_v = v;
        best_i = i;
      }
    }
  };

  if (std::isinf(f.hi)) {
    double len = std::max(1.0, std::abs(f.lo));
    int doublings = 0;
    for (;;) {
      probe_hi = f.lo + len;
      scan(f.lo, probe_hi);
      if (best_v > -kInf && vs[kScan - 1] < best_v - nats && best_i < kScan - 1) break;
      len *= 2.0;
      if (++doublings > 1100) {
        raise(ErrorKind::divergence,
              "no decaying tail located; integral appears divergent");
      }
    }
  } else {
    scan(f.lo, probe_hi);
  }

  PeakWindow w;
  if (best_v == -kInf) {
    w.degenerate = true;
    return w;
  }

  // Refine the peak within the bracketing grid cells.
  {
    const double a = ts[std::max(0, best_i - 1)];
    const double b = ts[std::min(kScan - 1, best_i + 1)];
    auto [tp, vp] = golden_max(f, a, b);
    if (vp >= best_v) {
      w.t_peak = tp;
      w.log_peak = vp;
    } else {
      w.t_peak = ts[best_i];
      w.log_peak = best_v;
    }
  }

  const double thresh = w.log_peak - nats;
  // Right truncation.
  if (vs[kScan - 1] >= thresh) {
    w.hi = probe_hi;
  } else {
    w.hi = threshold_cross(f, thresh, w.t_peak, probe_hi);
  }
  // Left truncation.
  if (vs[0] >= thresh) {
    w.lo = f.lo;
  } else {
    double from = w.t_peak, to = f.lo;
    w.lo = threshold_cross(f, thresh, from, to);
  }
  if (!(w.lo < w.hi)) {  // degenerate spike; widen minimally
    const double eps = 1e-12 * std::max(1.0, std::abs(w.t_peak));
    w.lo = std::max(f.lo, w.t_peak - eps);
    w.hi = std::min(probe_hi, w.t_peak + eps);
  }
  return w;
}

double integrate_log(const LogIntegrand& f, double rel_tol) {
  if (!(rel_tol > 0.0) || rel_tol > 1e-3) {
    raise(ErrorKind::usage, "rel_tol must lie in (0, 1e-3]");
  }
  const PeakWindow w = locate_peak_window(f);
  if (w.degenerate) return -kInf;

  const double span = w.hi - w.lo;
  if (!(span > 0.0)) return -kInf;

  // First pass: composite GL15 over 32 panels proportions the tolerance.
  double rough = 0.0;
  constexpr int kInitPanels = 32;
  for (int i = 0; i < kInitPanels; ++i) {
    const double a = w.lo + span * i / kInitPanels;
    const double b = w.lo + span * (i + 1) / kInitPanels;
    rough += gl_panel(f, w.log_peak, gl15(), a, b);
  }
  if (!(rough > 0.0)) {
    // All mass under the resolution of the first pass; fall back to the
    // peak cell alone.
    rough = std::max(rough, 1e-300);
  }
  const double tol_total = rel_tol * rough;

  struct Panel {
    double a, b, estimate;
    int depth;
  };
  std::vector<Panel> stack;
  stack.reserve(256);
  for (int i = 0; i < kInitPanels; ++i) {
    const double a = w.lo + span * i / kInitPanels;
    const double b = w.lo + span * (i + 1) / kInitPanels;
    stack.push_back({a, b, gl_panel(f, w.log_peak, gl15(), a, b), 0});
  }

  double total = 0.0, comp = 0.0;  // Kahan accumulation
  auto accumulate = [&](double v) {
    const double y = v - comp;
    const double t = total + y;
    comp = (t - total) - y;
    total = t;
  };

  while (!stack.empty()) {
    const Panel p = stack.back();
    stack.pop_back();
    const double coarse = gl_panel(f, w.log_peak, gl7(), p.a, p.b);
    const double panel_tol = tol_total * (p.b - p.a) / span;
    if (std::abs(p.estimate - coarse) <= std::max(panel_tol, 1e-305) ||
        p.depth >= 40) {
      accumulate(p.estimate);
      continue;
    }
    const double mid = 0.5 * (p.a + p.b);
    stack.push_back({p.a, mid, gl_panel(f, w.log_peak, gl15(), p.a, mid), p.depth + 1});
    stack.push_back({mid, p.b, gl_panel(f, w.log_peak, gl15(), mid, p.b), p.depth + 1});
  }

  if (!(total > 0.0)) return -kInf;
  return w.log_peak + std::log(total);
}

double find_root(const std::function<double(double)>& g, double lo, double hi,
                 double tol) {
  if (!(lo <= hi)) raise(ErrorKind::usage, "invalid bracket");
  double fa = g(lo);
  double fb = g(hi);
  if (std::isnan(fa) || std::isnan(fb)) {
    raise(ErrorKind::domain, "root function evaluated to NaN at the bracket");
  }
  if (fa == 0.0) return lo;  // leftmost convention
  if (fa * fb > 0.0) {
    raise(ErrorKind::bracket, "no sign change over the bracket");
  }

  double a = lo, b = hi;
  bool force_bisect = false;
  for (int iter = 0; iter < 400; ++iter) {
    const double width = b - a;
    if (width <= tol * std::max(1.0, 0.5 * (std::abs(a) + std::abs(b)))) break;
    // Secant proposal, accepted only when it lands strictly inside the
    // bracket. A forced bisection follows any step that failed to halve the
    // width, so flat stretches cannot stall the contraction.
    double m = 0.5 * (a + b);
    if (!force_bisect && fb != fa) {
      const double s = a - fa * (b - a) / (fb - fa);
      const double margin = 0.01 * width;
      if (s > a + margin && s < b - margin) m = s;
    }
    const double fm = g(m);
    if (std::isnan(fm)) raise(ErrorKind::domain, "root function evaluated to NaN");
    if ((fm < 0.0) == (fa < 0.0) && fm != 0.0) {
      a = m;
      fa = fm;
    } else {
      b = m;  // fm == 0 shrinks from the right: leftmost root of flat regions
      fb = fm;
    }
    force_bisect = (b - a) > 0.5 * width;
  }
  return 0.5 * (a + b);
}

QuantileTable::QuantileTable(std::vector<double> nodes, std::vector<double> cdf_values)
    : nodes_(std::move(nodes)), cdf_(std::move(cdf_values)) {
  if (nodes_.size() != cdf_.size() || nodes_.size() < 2) {
    raise(ErrorKind::usage, "quantile table needs matching grids of length >= 2");
  }
  for (std::size_t i = 1; i < nodes_.size(); ++i) {
    if (!(nodes_[i] > nodes_[i - 1]) || cdf_[i] < cdf_[i - 1]) {
      raise(ErrorKind::usage, "quantile table grids must be monotone");
    }
  }
  if (cdf_.front() != 0.0 || cdf_.back() != 1.0) {
    raise(ErrorKind::usage, "cdf grid must start at 0 and end at 1");
  }
}

double QuantileTable::quantile(double u) const {
  u = std::clamp(u, 0.0, 1.0);
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  std::size_t j = static_cast<std::size_t>(it - cdf_.begin());
  if (j == 0) return nodes_.front();
  if (j >= cdf_.size()) return nodes_.back();
  const double c0 = cdf_[j - 1], c1 = cdf_[j];
  const double t0 = nodes_[j - 1], t1 = nodes_[j];
  if (c1 == c0) return t0;
  return t0 + (t1 - t0) * (u - c0) / (c1 - c0);
}

double QuantileTable::cdf(double x) const {
  if (x <= nodes_.front()) return 0.0;
  if (x >= nodes_.back()) return 1.0;
  const auto it = std::upper_bound(nodes_.begin(), nodes_.end(), x);
  const std::size_t j = static_cast<std::size_t>(it - nodes_.begin());
  const double t0 = nodes_[j - 1], t1 = nodes_[j];
  const double c0 = cdf_[j - 1], c1 = cdf_[j];
  return c0 + (c1 - c0) * (x - t0) / (t1 - t0);
}

QuantileTable build_quantile_table(const LogIntegrand& density_log,
                                   std::size_t node_count) {
  if (node_count < 64) {
    raise(ErrorKind::usage, "quantile table needs at least 64 nodes");
  }
  const PeakWindow w = locate_peak_window(density_log);
  if (w.degenerate) {
    raise(ErrorKind::degenerate_density, "density has zero total mass");
  }

  // Pilot grid equispaced in the variable over the peak window; panel
  // masses via GL7 feed a cumulative piecewise-linear CDF.
  const std::size_t pilot = std::max<std::size_t>(4 * node_count, 4096);
  std::vector<double> pt(pilot + 1), pc(pilot + 1, 0.0);
  const double span = w.hi - w.lo;
  for (std::size_t i = 0; i <= pilot; ++i) {
    pt[i] = w.lo + span * static_cast<double>(i) / static_cast<double>(pilot);
  }
  double total = 0.0;
  for (std::size_t i = 0; i < pilot; ++i) {
    const double mass = gl_panel(density_log, w.log_peak, gl7(), pt[i], pt[i + 1]);
    total += std::max(mass, 0.0);
    pc[i + 1] = total;
  }
  if (!(total > 0.0)) {
    raise(ErrorKind::degenerate_density, "density has zero total mass");
  }
  for (auto& c : pc) c /= total;
  pc.back() = 1.0;

  // Final nodes equispaced in CDF.
  std::vector<double> nodes, cdf;
  nodes.reserve(node_count);
  cdf.reserve(node_count);
  std::size_t cursor = 0;
  for (std::size_t j = 0; j < node_count; ++j) {
    const double u = static_cast<double>(j) / static_cast<double>(node_count - 1);
    while (cursor + 1 < pc.size() && pc[cursor + 1] < u) ++cursor;
    double t;
    if (u <= pc[cursor]) {
      t = pt[cursor];
    } else {
      const double c0 = pc[cursor], c1 = pc[cursor + 1];
      const double frac = (c1 > c0) ? (u - c0) / (c1 - c0) : 0.0;
      t = pt[cursor] + (pt[cursor + 1] - pt[cursor]) * frac;
    }
    if (!nodes.empty() && t <= nodes.back()) continue;  // drop flat-CDF duplicates
    nodes.push_back(t);
    cdf.push_back(u);
  }
  if (nodes.size() < 2) {
    raise(ErrorKind::degenerate_density, "density mass collapses to a point");
  }
  cdf.front() = 0.0;
  cdf.back() = 1.0;
  return QuantileTable(std::move(nodes), std::move(cdf));
}

TailCheck check_logconcave_tail(const LogIntegrand& g_log, double t0, double x,
                                double psi, TailSide side) {
  if (!(t0 > 0.0) || !(x > 0.0) || !(psi > 0.0)) {
    raise(ErrorKind::usage, "tail check requires t0 > 0, x > 0, psi > 0");
  }
  TailCheck result;
  const double f_t0 = safe_log_eval(g_log, t0);
  const double shift = (side == TailSide::outer) ? (1.0 + x) * t0 : (1.0 - x) * t0;

  double f_shift = -kInf;
  if (shift >= g_log.lo && shift <= g_log.hi) {
    f_shift = safe_log_eval(g_log, shift);
  }
  result.hypothesis_ok = (f_t0 - f_shift >= psi - 1e-12);
  if (!result.hypothesis_ok) {
    return result;  // reported, not asserted
  }

  double log_lhs = -kInf;
  if (side == TailSide::outer) {
    if (shift < g_log.hi) {
      LogIntegrand tail{g_log.log_eval, shift, g_log.hi};
      log_lhs = integrate_log(tail);
    }
  } else {
    if (shift > g_log.lo) {
      LogIntegrand head{g_log.log_eval, g_log.lo, shift};
      log_lhs = integrate_log(head);
    }
  }
  const double log_rhs = std::log(x * t0) + f_t0 - std::log(psi) - psi;

  result.log_lhs = log_lhs;
  result.log_rhs = log_rhs;
  result.lhs = std::exp(log_lhs);
  result.rhs = std::exp(log_rhs);
  result.holds = log_lhs <= log_rhs + std::log1p(1e-6);
  return result;
}

double std_normal_pdf(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI);
}

double std_normal_cdf(double x) {
  return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

double std_normal_quantile(double p) {
  if (!(p > 0.0) || !(p < 1.0)) {
    raise(ErrorKind::range, "quantile argument must lie in (0,1)");
  }
  return find_root([p](double x) { return std_normal_cdf(x) - p; }, -40.0, 40.0,
                   1e-14);
}

double log_ball_volume(int k) {
  if (k < 0) raise(ErrorKind::usage, "dimension must be nonnegative");
  return 0.5 * k * std::log(M_PI) - std::lgamma(0.5 * k + 1.0);
}

}  // namespace polysurf
