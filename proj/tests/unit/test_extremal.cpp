#include <cmath>

#include "doctest.h"
#include "polysurf/bounds.hpp"
#include "polysurf/extremal.hpp"
#include "polysurf/rng.hpp"
#include "polysurf/surface.hpp"

using namespace polysurf;

namespace {

// Regularized incomplete beta via the standard continued fraction; this is
// the independent closed-form route for the cap measure.
double betacf(double a, double b, double x) {
  constexpr double eps = 3e-14, fpmin = 1e-300;
  const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < fpmin) d = fpmin;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= 300; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < fpmin) d = fpmin;
    c = 1.0 + aa / c;
    if (std::abs(c) < fpmin) c = fpmin;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < fpmin) d = fpmin;
    c = 1.0 + aa / c;
    if (std::abs(c) < fpmin) c = fpmin;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < eps) break;
  }
  return h;
}

double betainc(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double bt = std::exp(std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                             a * std::log(x) + b * std::log1p(-x));
  if (x < (a + 1.0) / (a + b + 2.0)) return bt * betacf(a, b, x) / a;
  return 1.0 - bt * betacf(b, a, 1.0 - x) / b;
}

double cap_oracle(int n, double t, double rho) {
  if (rho >= t) return 0.0;
  const double c = rho / t;
  return 0.5 * betainc(0.5 * (n - 1), 0.5, 1.0 - c * c);
}

}  // namespace

TEST_CASE("cap probability: hemispheres and empty caps") {
  for (int n : {2, 3, 7, 40}) {
    CHECK(cap_probability(n, 1.7, 0.0) == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(cap_probability(n, 1.0, 1.0) == 0.0);
    CHECK(cap_probability(n, 1.0, 2.5) == 0.0);
  }
}

TEST_CASE("cap probability: linear closed form in three dimensions") {
  for (double t : {0.5, 1.0, 3.0}) {
    for (double rho : {0.0, 0.2, 0.45}) {
      if (rho >= t) continue;
      CHECK(cap_probability(3, t, rho) ==
            doctest::Approx(0.5 * (1.0 - rho / t)).epsilon(1e-10));
    }
  }
}

TEST_CASE("cap probability: against the incomplete-beta closed form") {
  for (int n : {2, 4, 11, 50, 200}) {
    for (double ratio : {0.05, 0.3, 0.7, 0.95}) {
      const double t = 2.0;
      const double rho = ratio * t;
      CHECK(cap_probability(n, t, rho) ==
            doctest::Approx(cap_oracle(n, t, rho)).epsilon(1e-8));
    }
  }
}

TEST_CASE("cap probability: against direction sampling") {
  RngStream rng = derive_stream(4242, 0);
  for (int pair = 0; pair < 20; ++pair) {
    const int n = 3 + static_cast<int>(rng.uniform01() * 10);
    const double t = 0.5 + 2.0 * rng.uniform01();
    const double rho = t * rng.uniform01() * 0.9;
    const int draws = 100000;
    std::vector<double> u(n);
    int hits = 0;
    for (int i = 0; i < draws; ++i) {
      rng.fill_normal(u);
      hits += (t * u[0] / norm(u) > rho);
    }
    const double mc = static_cast<double>(hits) / draws;
    const double se = std::sqrt(std::max(mc * (1.0 - mc), 1e-12) / draws);
    CHECK(std::abs(cap_probability(n, t, rho) - mc) <= 4.0 * se + 1e-6);
  }
}

TEST_CASE("offset solver: defining equation holds at the root") {
  const auto model = MeasureModel::make("gaussian", 50);
  const auto params = compute_params(model);
  for (int K : {4, 64, 1024}) {
    const double rho = solve_rho(model, params, K);
    const double outer = params.t0 * (1.0 + params.lambda);
    const double rhs = params.t0 / (std::sqrt(50.0) * rho) *
                       std::pow(1.0 - rho * rho / (outer * outer), 0.5 * (50 - 3));
    CHECK(rhs * K == doctest::Approx(1.0).epsilon(1e-8));
    // scaling window: rho stays comparable to t0 sqrt(ln K / n)
    const double normalized = rho / (params.t0 * std::sqrt(std::log((double)K) / 50.0));
    CHECK(normalized >= 0.3);
    CHECK(normalized <= 3.0);
  }
}

TEST_CASE("offset solver: grows with K and matches grid bisection") {
  const auto model = MeasureModel::make("gaussian", 50);
  const auto params = compute_params(model);
  double prev = 0.0;
  for (int K : {4, 16, 64, 256, 1024}) {
    const double rho = solve_rho(model, params, K);
    CHECK(rho > prev);
    prev = rho;
  }
  // independent bisection on the same displayed equation
  const int K = 1024;
  const double outer = params.t0 * (1.0 + params.lambda);
  auto f = [&](double rho) {
    return std::log((double)K) + std::log(params.t0 / (std::sqrt(50.0) * rho)) +
           0.5 * 47.0 * std::log1p(-rho * rho / (outer * outer));
  };
  double lo = 0.05, hi = outer * (1.0 - 1e-9);
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) > 0.0 ? lo : hi) = mid;
  }
  CHECK(solve_rho(model, params, K) == doctest::Approx(0.5 * (lo + hi)).epsilon(1e-6));
}

TEST_CASE("offset solver: no balancing root in low dimension at large K") {
  // with n = 3 the geometric factor is constant, and the balance point
  // escapes past the annulus edge once K is moderately large
  const auto model = MeasureModel::make("gaussian", 3);
  const auto params = compute_params(model);
  CHECK_THROWS_AS(solve_rho(model, params, 64), Error);
}

TEST_CASE("measured construction against the unit-constant gaussian ceiling") {
  // experiment-derived window: in-range ratios run 0.12..0.28 at n = 50
  const auto model = MeasureModel::make("gaussian", 50);
  const auto params = compute_params(model);
  for (int K = 4; params.lambda * std::log((double)K) <= 1.0; K *= 2) {
    const double rho = solve_rho(model, params, K);
    const double ratio = expected_surface_exact(model, params, K, rho) /
                         nazarov_upper((double)K).value;
    CHECK(ratio >= 0.1);
    CHECK(ratio <= 4.0);
  }
}

TEST_CASE("expected surface: one facet is exactly the hyperplane measure") {
  const auto model = MeasureModel::make("gaussian", 12);
  const auto params = compute_params(model);
  for (double rho : {0.4, 1.3}) {
    CHECK(expected_surface_exact(model, params, 1, rho) ==
          doctest::Approx(hyperplane_measure(model, rho).value).epsilon(1e-9));
  }
}

TEST_CASE("expected surface: per-facet value decreases with competition") {
  const auto model = MeasureModel::make("gaussian", 12);
  const auto params = compute_params(model);
  const double rho = 1.0;
  double prev = kInf;
  for (int K : {1, 2, 8, 64, 512}) {
    const double per_facet = expected_surface_exact(model, params, K, rho) / K;
    CHECK(per_facet < prev * (1.0 + 1e-12));
    prev = per_facet;
  }
}

TEST_CASE("expected surface: bounded by K hyperplanes, above the restricted form") {
  for (const char* family : {"gaussian", "power:1", "power:3"}) {
    const auto model = MeasureModel::make(family, 20);
    const auto params = compute_params(model);
    const int K = 32;
    const double rho = solve_rho(model, params, K);
    const double exact = expected_surface_exact(model, params, K, rho);
    const double restricted = expected_surface_restricted(model, params, K, rho);
    CHECK(exact <= K * hyperplane_measure(model, rho).value * (1.0 + 1e-9));
    CHECK(exact >= restricted * (1.0 - 1e-9));
    CHECK(restricted > 0.0);
  }
}

TEST_CASE("expected surface: agrees with sampled circumscribed polytopes") {
  const auto model = MeasureModel::make("gaussian", 10);
  const auto params = compute_params(model);
  const int K = 16;
  const double rho = solve_rho(model, params, K);
  const double exact = expected_surface_exact(model, params, K, rho);

  const int trials = 40;
  double acc = 0.0, acc_sq = 0.0;
  for (int trial = 0; trial < trials; ++trial) {
    const Polytope p = circumscribed_random(10, K, rho, 900 + trial);
    const double s = surface_mc(model, p, 2000, 17 + trial).value;
    acc += s;
    acc_sq += s * s;
  }
  const double mean = acc / trials;
  const double sd = std::sqrt(std::max(0.0, acc_sq / trials - mean * mean));
  CHECK(std::abs(mean - exact) <= 4.0 * sd / std::sqrt((double)trials));
}

TEST_CASE("scaling target arithmetic") {
  MeasureParams params;
  params.n = 49;
  params.t0 = 7.0;
  CHECK(lower_bound_rhs(params, M_E) == doctest::Approx(1.0).epsilon(1e-12));
  const double base = lower_bound_rhs(params, M_E);
  CHECK(lower_bound_rhs(params, M_E * M_E) == doctest::Approx(base * std::sqrt(2.0)));
  CHECK_THROWS_AS(lower_bound_rhs(params, 1.0), Error);
}

TEST_CASE("construction scaling: in-range ratio window, gaussian n = 50") {
  const auto model = MeasureModel::make("gaussian", 50);
  const auto params = compute_params(model);
  double lo_ratio = kInf, hi_ratio = 0.0;
  for (int K = 4; std::log((double)K) * params.lambda <= 1.0; K *= 2) {
    const double rho = solve_rho(model, params, K);
    const double ratio = expected_surface_exact(model, params, K, rho) /
                         lower_bound_rhs(params, K);
    lo_ratio = std::min(lo_ratio, ratio);
    hi_ratio = std::max(hi_ratio, ratio);
  }
  CHECK(hi_ratio / lo_ratio <= 3.0);
}

TEST_CASE("experiment config: range handling") {
  const auto model = MeasureModel::make("gaussian", 50);
  const auto params = compute_params(model);
  const auto in_range = make_extremal_config(params, 8, 1.5);
  CHECK(in_range.in_range);
  const auto out_of_range = make_extremal_config(params, 1 << 14, 3.0);
  CHECK_FALSE(out_of_range.in_range);
  CHECK_THROWS_AS(make_extremal_config(params, 8, 100.0), Error);
  CHECK_THROWS_AS(make_extremal_config(params, 1, 1.0), Error);
}

TEST_CASE("cap probability stays under the annulus envelope") {
  // comparison of the exact cap measure against the construction's design
  // estimate, with a factor-10 allowance, over the peak annulus
  const auto model = MeasureModel::make("gaussian", 30);
  const auto params = compute_params(model);
  const double outer = params.t0 * (1.0 + params.lambda);
  for (int K : {8, 64}) {
    const double rho = solve_rho(model, params, K);
    const double envelope = 10.0 * params.t0 / (std::sqrt(30.0) * rho) *
                            std::pow(1.0 - rho * rho / (outer * outer), 0.5 * 27.0);
    for (double frac : {-0.9, -0.3, 0.3, 0.9}) {
      const double t = params.t0 * (1.0 + frac * params.lambda);
      CHECK(cap_probability(30, t, rho) <= envelope);
    }
  }
}
