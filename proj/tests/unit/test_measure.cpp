#include <cmath>

#include "doctest.h"
#include "polysurf/measure.hpp"

using namespace polysurf;

namespace {

// Scan-then-halve bisection on the shell-width equations, kept separate
// from find_root so the solver has an independent cross-check.
double grid_bisect(const std::function<double(double)>& g, double lo, double hi) {
  const int cells = 8192;
  double a = lo, fa = g(lo);
  for (int i = 1; i <= cells; ++i) {
    const double b = lo + (hi - lo) * i / cells;
    const double fb = g(b);
    if (fa * fb <= 0.0) {
      double x0 = a, x1 = b;
      for (int k = 0; k < 200; ++k) {
        const double m = 0.5 * (x0 + x1);
        if (g(x0) * g(m) <= 0.0) {
          x1 = m;
        } else {
          x0 = m;
        }
      }
      return 0.5 * (x0 + x1);
    }
    a = b;
    fa = fb;
  }
  return hi;
}

}  // namespace

TEST_CASE("model parsing and potential validation") {
  CHECK(MeasureModel::make("gaussian", 10).family_string() == "gaussian");
  CHECK(MeasureModel::make("power:1.5", 10).family_string() == "power:1.5");
  CHECK(MeasureModel::make("ball", 10).family_string() == "ball");
  CHECK_THROWS_AS(MeasureModel::make("power:0.5", 10), Error);  // not log-concave
  CHECK_THROWS_AS(MeasureModel::make("cauchy", 10), Error);
  CHECK_THROWS_AS(MeasureModel::make("gaussian", 1), Error);
  CHECK_THROWS_AS(RadialPotential::custom([](double t) { return std::sqrt(t); },
                                          [](double t) { return 0.5 / std::sqrt(t); })
                      .validate(),
                  Error);  // concave potential rejected
}

TEST_CASE("custom potentials: construction guards") {
  // nonzero value at the origin
  const auto shifted = RadialPotential::custom([](double t) { return t + 1.0; },
                                               [](double) { return 1.0; });
  CHECK_THROWS_AS(shifted.validate(), Error);
  // flat potential without a support bound: no radial moment converges
  const auto flat = RadialPotential::custom([](double) { return 0.0; },
                                            [](double) { return 0.0; });
  flat.validate();
  CHECK_THROWS_AS(log_moment(MeasureModel{4, flat}, 3), Error);
}

TEST_CASE("shell radius solve_mu: rejects psi below one") {
  const auto model = MeasureModel::make("gaussian", 10);
  CHECK_THROWS_AS(solve_mu(model, 0.5), Error);
}

TEST_CASE("log_g basics") {
  const auto model = MeasureModel::make("gaussian", 10);
  CHECK(log_g(model, 0, 0.0) == 0.0);
  CHECK(log_g(model, 3, 0.0) == -kInf);
  CHECK(log_g(model, 9, 3.0) == doctest::Approx(9.0 * std::log(3.0) - 4.5).epsilon(1e-14));
  const auto ball = MeasureModel::make("ball", 5);
  CHECK(log_g(ball, 4, 2.0) == -kInf);  // beyond the support
}

TEST_CASE("radial moments against closed forms") {
  const auto ball = MeasureModel::make("ball", 6);
  for (int k : {0, 1, 5, 11}) {
    CHECK(log_moment(ball, k) == doctest::Approx(-std::log(k + 1.0)).epsilon(1e-10));
  }
  const auto expo = MeasureModel::make("power:1", 6);
  for (int k : {1, 5, 20}) {
    CHECK(log_moment(expo, k) == doctest::Approx(std::lgamma(k + 1.0)).epsilon(1e-10));
  }
  const auto gauss = MeasureModel::make("gaussian", 10);
  CHECK(log_moment(gauss, 9) == doctest::Approx(std::log(384.0)).epsilon(1e-10));
}

TEST_CASE("normalizing constant: gaussian matches (2 pi)^{-n/2}") {
  for (int n : {2, 3, 17, 100, 200}) {
    const auto model = MeasureModel::make("gaussian", n);
    const double expect = -0.5 * n * std::log(2.0 * M_PI);
    CHECK(log_norm_const(model) == doctest::Approx(expect).epsilon(1e-10));
  }
}

TEST_CASE("normalizing constant: ball and exponential") {
  const auto ball = MeasureModel::make("ball", 7);
  CHECK(log_norm_const(ball) == doctest::Approx(-log_ball_volume(7)).epsilon(1e-10));
  const auto expo = MeasureModel::make("power:1", 5);
  const double expect = -(std::log(5.0) + log_ball_volume(5) + std::lgamma(5.0));
  CHECK(log_norm_const(expo) == doctest::Approx(expect).epsilon(1e-10));
}

TEST_CASE("peak radius: closed forms per family") {
  CHECK(solve_t0(MeasureModel::make("gaussian", 101)) ==
        doctest::Approx(10.0).epsilon(1e-10));
  CHECK(solve_t0(MeasureModel::make("power:3", 28)) ==
        doctest::Approx(std::pow(27.0, 1.0 / 3.0)).epsilon(1e-10));
  CHECK(solve_t0(MeasureModel::make("ball", 9)) == 1.0);
}

TEST_CASE("shell widths: gaussian n = 101 against grid bisection") {
  const auto model = MeasureModel::make("gaussian", 101);
  const double t0 = solve_t0(model);
  const auto lambda = solve_lambda(model, t0);

  const double oracle_o = grid_bisect(
      [](double x) { return x + 0.5 * x * x - std::log1p(x) - 0.01; }, 1e-7, 1.0);
  const double oracle_i = grid_bisect(
      [](double x) { return -x + 0.5 * x * x - std::log1p(-x) - 0.01; }, 1e-7, 0.999);
  CHECK(lambda.outer == doctest::Approx(oracle_o).epsilon(1e-8));
  CHECK(lambda.inner == doctest::Approx(oracle_i).epsilon(1e-8));
  CHECK(lambda.outer == doctest::Approx(0.1016).epsilon(1e-2));
  CHECK(lambda.total == doctest::Approx(lambda.inner + lambda.outer).epsilon(1e-15));
}

TEST_CASE("shell widths: ball closed form, outer width zero") {
  for (int n : {5, 20, 100}) {
    const auto model = MeasureModel::make("ball", n);
    const auto lambda = solve_lambda(model, solve_t0(model));
    CHECK(lambda.outer == 0.0);
    CHECK(lambda.inner == doctest::Approx(1.0 - std::exp(-1.0 / (n - 1))).epsilon(1e-8));
  }
}

TEST_CASE("shell widths: exponential potential n = 2") {
  const auto model = MeasureModel::make("power:1", 2);
  const double t0 = solve_t0(model);
  CHECK(t0 == doctest::Approx(1.0).epsilon(1e-12));
  const auto lambda = solve_lambda(model, t0);
  const double oracle =
      grid_bisect([](double x) { return x - std::log1p(x) - 1.0; }, 1e-6, 10.0);
  CHECK(lambda.outer == doctest::Approx(oracle).epsilon(1e-9));
  CHECK(lambda.outer == doctest::Approx(2.146).epsilon(1e-3));
}

TEST_CASE("norm moments: chi distribution closed form in n = 3") {
  const auto model = MeasureModel::make("gaussian", 3);
  const auto m = norm_moments(model);
  const double expect_mean = 2.0 * std::sqrt(2.0 / M_PI);
  CHECK(m.mean == doctest::Approx(expect_mean).epsilon(1e-10));
  CHECK(m.variance == doctest::Approx(3.0 - expect_mean * expect_mean).epsilon(1e-8));
  CHECK_FALSE(m.clamped);
}

TEST_CASE("norm moments: ball mean n/(n+1) and cv inside (0,1)") {
  for (int n : {2, 6, 50}) {
    const auto m = norm_moments(MeasureModel::make("ball", n));
    CHECK(m.mean == doctest::Approx(n / (n + 1.0)).epsilon(1e-10));
    CHECK(m.cv > 0.0);
    CHECK(m.cv < 1.0);
  }
  for (const char* family : {"gaussian", "power:1", "power:3"}) {
    const auto m = norm_moments(MeasureModel::make(family, 12));
    CHECK(m.cv > 0.0);
    CHECK(m.cv < 1.0);
  }
}

TEST_CASE("radial cdf: endpoints and planar gaussian closed form") {
  const auto model = MeasureModel::make("gaussian", 2);
  CHECK(radial_cdf(model, 0.0) == 0.0);
  CHECK(radial_cdf(model, kInf) == 1.0);
  for (double r : {0.3, 1.0, 2.5}) {
    CHECK(radial_cdf(model, r) == doctest::Approx(-std::expm1(-0.5 * r * r)).epsilon(1e-9));
  }
  CHECK(radial_interval_mass(model, 0.0, kInf) == doctest::Approx(1.0));
  CHECK(radial_interval_mass(model, 1.0, 2.0) ==
        doctest::Approx(std::exp(-0.5) - std::exp(-2.0)).epsilon(1e-8));
}

TEST_CASE("sampling: empirical mean of |X| within 4 standard errors") {
  const auto model = MeasureModel::make("gaussian", 5);
  const auto params = compute_params(model);
  const auto table = build_radial_table(model);
  RngStream rng = derive_stream(20240811, 0);
  const int draws = 100000;
  double acc = 0.0, acc_sq = 0.0;
  for (int i = 0; i < draws; ++i) {
    const auto x = sample_point(model, table, rng);
    double norm_sq = 0.0;
    for (double v : x) norm_sq += v * v;
    const double r = std::sqrt(norm_sq);
    acc += r;
    acc_sq += r * r;
  }
  const double mean = acc / draws;
  const double sd = std::sqrt(std::max(0.0, acc_sq / draws - mean * mean));
  CHECK(std::abs(mean - params.mean_norm) <= 4.0 * sd / std::sqrt((double)draws));
}

TEST_CASE("shell radius solve_mu: psi = 1 recovers the outer width") {
  for (const char* family : {"gaussian", "power:3", "ball"}) {
    const auto model = MeasureModel::make(family, 25);
    const double t0 = solve_t0(model);
    const auto lambda = solve_lambda(model, t0);
    const auto mu = solve_mu(model, t0, 1.0);
    CHECK(mu.mu == doctest::Approx(lambda.outer).epsilon(1e-9));
  }
}

TEST_CASE("shell radius solve_mu: gaussian n = 101, psi = 2 against grid bisection") {
  const auto model = MeasureModel::make("gaussian", 101);
  const auto mu = solve_mu(model, 2.0);
  const double oracle = grid_bisect(
      [](double m) { return 100.0 * m + 50.0 * m * m - 100.0 * std::log1p(m) - 2.0; },
      1e-7, 1.0);
  CHECK(mu.mu == doctest::Approx(oracle).epsilon(1e-8));
  CHECK_FALSE(mu.clamped_to_support);
  // order agreement with the small-width expansion psi ~ (n-1) mu^2 * c
  CHECK(mu.mu * std::sqrt(100.0 / 2.0) == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("shell radius solve_mu: unreachable psi clamps to the support edge") {
  // steep custom potential inside a finite support keeps the peak interior
  const auto phi = RadialPotential::custom(
      [](double t) { return 8.0 * t * t; }, [](double t) { return 16.0 * t; }, 2.0);
  phi.validate();
  MeasureModel model{6, phi};
  const double t0 = solve_t0(model);
  CHECK(t0 < 2.0);
  const auto mu = solve_mu(model, t0, 500.0);
  CHECK(mu.clamped_to_support);
  CHECK(mu.mu == doctest::Approx(2.0 / t0 - 1.0).epsilon(1e-10));
}

TEST_CASE("params: aggregate struct is consistent and exports CSV") {
  const auto model = MeasureModel::make("gaussian", 101);
  const auto params = compute_params(model);
  CHECK(params.t0 == doctest::Approx(10.0).epsilon(1e-10));
  CHECK(params.lambda == doctest::Approx(params.lambda_i + params.lambda_o).epsilon(1e-15));
  CHECK(params.mean_norm == doctest::Approx(std::exp(params.log_J_n - params.log_J_nm1)));
  CHECK(params.norm_cv > 0.0);
  CHECK(params.norm_cv < 1.0);
  CHECK(params_csv_header() == "family,n,t0,lambda_i,lambda_o,lambda,E,V,log_J_nm1,log_C_n");
  const std::string row = params_csv_row(params);
  CHECK(row.rfind("gaussian,101,10,", 0) == 0);
}

TEST_CASE("asymptotic windows over the family grid") {
  // J_{n-1} vs its peak approximation, the shell-width identity, the moment
  // ratio, and the width scalings, all kept inside fixed windows.
  const double slack = std::sqrt(2.0 * M_PI) * 1.1;
  for (const char* family : {"gaussian", "power:1", "power:1.5", "power:3", "ball"}) {
    for (int n : {5, 20, 100}) {
      const auto model = MeasureModel::make(family, n);
      const auto params = compute_params(model);
      const double log_peak = log_g(model, n - 1, params.t0);

      const double lower = log_peak + std::log(params.t0) - std::log((double)n);
      const double upper = log_peak + std::log(params.t0) + std::log(slack) -
                           0.5 * std::log(n - 1.0);
      CHECK(params.log_J_nm1 >= lower - 1e-9);
      CHECK(params.log_J_nm1 <= upper + 1e-9);

      const double shell_ratio = std::exp(
          params.log_J_nm1 - std::log(params.lambda * params.t0) - log_peak);
      CHECK(shell_ratio >= 0.2);
      CHECK(shell_ratio <= 5.0);

      const double moment_ratio =
          std::exp(params.log_J_n - params.log_J_nm1) / params.t0;
      CHECK(moment_ratio >= 0.5);
      CHECK(moment_ratio <= 2.0);
    }
  }
  for (int n : {5, 20, 100}) {
    const auto gauss = compute_params(MeasureModel::make("gaussian", n));
    CHECK(gauss.lambda * std::sqrt((double)n) >= 1.0);
    CHECK(gauss.lambda * std::sqrt((double)n) <= 3.0);
    const auto ball = compute_params(MeasureModel::make("ball", n));
    CHECK(ball.lambda * n >= 0.5);
    CHECK(ball.lambda * n <= 2.0);
  }
}

TEST_CASE("far radial tail stays under e^{-n} J_{n-2}") {
  for (const char* family : {"gaussian", "power:1", "ball"}) {
    for (int n : {5, 20, 60}) {
      const auto model = MeasureModel::make(family, n);
      const double t0 = solve_t0(model);
      const double hi = model.potential.support_bound()
                            ? *model.potential.support_bound()
                            : kInf;
      double log_tail = -kInf;
      if (5.0 * t0 < hi) {
        LogIntegrand tail{
            [&model, n](double t) { return log_g(model, n - 2, t); }, 5.0 * t0, hi};
        log_tail = integrate_log(tail);
      }
      CHECK(log_tail <= -n + log_moment(model, n - 2) + 1e-9);
    }
  }
}

TEST_CASE("randomized tail checks over the radial weight") {
  for (const char* family : {"gaussian", "power:1", "power:3", "ball"}) {
    const auto model = MeasureModel::make(family, 15);
    const double t0 = solve_t0(model);
    const double hi =
        model.potential.support_bound() ? *model.potential.support_bound() : kInf;
    LogIntegrand g{[&model](double t) { return log_g(model, 14, t); }, 0.0, hi};
    const double f_t0 = log_g(model, 14, t0);

    RngStream rng = derive_stream(777, 3);
    int checked = 0;
    for (int trial = 0; trial < 100; ++trial) {
      const bool outer = (rng.uniform01() < 0.5);
      const double x = outer ? (0.05 + 1.5 * rng.uniform01())
                             : (0.05 + 0.9 * rng.uniform01());
      const double shifted = outer ? (1.0 + x) * t0 : (1.0 - x) * t0;
      const double gap = f_t0 - log_g(model, 14, shifted);
      if (!(gap > 1e-6)) {
        // weight flat (ball, inner side): hypothesis needs psi <= 0, skip
        continue;
      }
      const double psi = std::isinf(gap) ? 1.0 + 4.0 * rng.uniform01()
                                         : gap * (0.3 + 0.69 * rng.uniform01());
      const auto check = check_logconcave_tail(
          g, t0, x, psi, outer ? TailSide::outer : TailSide::inner);
      CHECK(check.hypothesis_ok);
      CHECK(check.holds);
      ++checked;
    }
    CHECK(checked > 40);
  }
}
