#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "polysurf/harness.hpp"

using namespace polysurf;

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  return cells;
}

std::string write_temp(const std::string& name, const std::string& content) {
  const std::string path = "/tmp/polysurf_test_" + name;
  std::ofstream out(path);
  out << content;
  return path;
}

}  // namespace

TEST_CASE("config file parsing, overrides, and normalization") {
  const std::string path = write_temp("config.cfg",
                                      "# comment line\n"
                                      "family = power:3\n"
                                      "n = 12\n"
                                      "k_list = 64, 4, 16, 16\n"
                                      "trials = 3\n"
                                      "samples = 5000\n"
                                      "seed = 99\n"
                                      "epsilon = 0.01\n"
                                      "c_range = 2\n");
  auto config = ExperimentConfig::from_file(path);
  CHECK(config.family == "power:3");
  CHECK(config.n == 12);
  CHECK(config.k_list == std::vector<long long>{4, 16, 64});  // sorted, deduped
  CHECK(config.trials == 3);
  CHECK(config.samples == 5000);
  CHECK(config.seed == 99);
  CHECK(config.epsilon == 0.01);
  CHECK(config.c_range == 2.0);

  config.apply_kv("k_list", "8,2");
  config.normalize();
  CHECK(config.k_list == std::vector<long long>{2, 8});

  CHECK_THROWS_AS(config.apply_kv("mystery", "1"), Error);
  CHECK_THROWS_AS(config.apply_kv("n", "many"), Error);
  CHECK_THROWS_AS(ExperimentConfig::from_file("/nonexistent/cfg"), Error);

  ExperimentConfig bad;
  bad.samples = 10;
  CHECK_THROWS_AS(bad.normalize(), Error);
  bad = ExperimentConfig{};
  bad.k_list = {0, 4};
  CHECK_THROWS_AS(bad.normalize(), Error);
}

TEST_CASE("line fit recovers exact slopes") {
  std::vector<double> x, y;
  for (double k : {4.0, 16.0, 64.0, 256.0, 1024.0}) {
    x.push_back(std::log(std::log(k)));
    y.push_back(0.5 * std::log(std::log(k)) + 1.25);
  }
  const auto fit = fit_line(x, y);
  CHECK(fit.exponent == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(fit.intercept == doctest::Approx(1.25).epsilon(1e-12));
  CHECK(fit.residual <= 1e-12);
  CHECK(fit.rows_used == 5);
  CHECK_THROWS_AS(fit_line(std::vector<double>{1.0}, std::vector<double>{1.0}), Error);
}

TEST_CASE("params command emits the documented schema") {
  ExperimentConfig config;
  config.family = "gaussian";
  config.n = 101;
  std::ostringstream csv;
  CHECK(cmd_params(config, csv) == 0);
  std::istringstream in(csv.str());
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  CHECK(header == "family,n,t0,lambda_i,lambda_o,lambda,E,V,log_J_nm1,log_C_n");
  const auto cells = split_csv_line(row);
  REQUIRE(cells.size() == 10);
  CHECK(cells[0] == "gaussian");
  CHECK(std::stod(cells[2]) == doctest::Approx(10.0).epsilon(1e-9));
  for (std::size_t i = 2; i < cells.size(); ++i) CHECK(std::isfinite(std::stod(cells[i])));

  config.family = "ball";
  config.n = 10;
  std::ostringstream ball_csv;
  cmd_params(config, ball_csv);
  std::istringstream ball_in(ball_csv.str());
  std::getline(ball_in, header);
  std::getline(ball_in, row);
  CHECK(std::stod(split_csv_line(row)[2]) == doctest::Approx(1.0));
}

TEST_CASE("surface command: lone halfspace reduces to the exact value") {
  const std::string path = write_temp("half.poly", "3 1\n1 0 0 0.5\n");
  ExperimentConfig config;
  config.family = "gaussian";
  config.samples = 20000;
  std::ostringstream csv, log;
  CHECK(cmd_surface(config, path, csv, log) == 0);

  std::istringstream in(csv.str());
  std::string header, facet_row, shell_row;
  std::getline(in, header);
  std::getline(in, facet_row);
  std::getline(in, shell_row);
  CHECK(header == surface_csv_header());

  const auto facet = split_csv_line(facet_row);
  const auto shell = split_csv_line(shell_row);
  REQUIRE(facet.size() == 8);
  CHECK(facet[0] == "exact_1d");  // one facet: the sampler degenerates to exact
  CHECK(shell[0] == "shell_mc");
  const double exact = std_normal_pdf(0.5);
  CHECK(std::stod(facet[4]) == doctest::Approx(exact).epsilon(1e-9));
  CHECK(std::abs(std::stod(shell[4]) - exact) <= 4.0 * std::stod(shell[5]));
  // rows echo identical (family, n, K, seed)
  for (int idx : {1, 2, 3, 7}) CHECK(facet[idx] == shell[idx]);
}

TEST_CASE("surface command: planar polytopes include the exact method row") {
  const std::string path = write_temp(
      "square.poly", serialize_polytope(make_regular_polygon(4, 1.0)));
  ExperimentConfig config;
  config.family = "gaussian";
  config.samples = 16000;
  std::ostringstream csv, log;
  cmd_surface(config, path, csv, log);
  CHECK(csv.str().find("exact_2d") != std::string::npos);
}

TEST_CASE("surface command propagates parse warnings and errors") {
  ExperimentConfig config;
  const std::string warn_path = write_temp("warn.poly", "2 1\n1.0001 0 1\n");
  std::ostringstream csv, log;
  cmd_surface(config, warn_path, csv, log);
  CHECK(log.str().find("renormalized") != std::string::npos);

  const std::string bad_path = write_temp("bad.poly", "2 1\n2 0 1\n");
  std::ostringstream csv2, log2;
  CHECK_THROWS_AS(cmd_surface(config, bad_path, csv2, log2), Error);
}

TEST_CASE("extremal sweep: rows, flags, and the scaling fit") {
  ExperimentConfig config;
  config.family = "gaussian";
  config.n = 50;
  config.k_list = {4, 8, 16, 32, 64, 128};
  config.trials = 0;  // exact column only
  const auto sweep = run_extremal_sweep(config);
  REQUIRE(sweep.rows.size() == 6);

  double prev_rho = 0.0;
  for (const auto& row : sweep.rows) {
    CHECK(row.rho > prev_rho);
    prev_rho = row.rho;
    CHECK(row.expected_exact > 0.0);
    CHECK(row.lower_rhs > 0.0);
  }
  // the range condition at c = 1 keeps K <= exp(1/lambda) ~ 33
  CHECK(sweep.rows[0].in_range);
  CHECK(sweep.rows[3].in_range);
  CHECK_FALSE(sweep.rows[4].in_range);
  CHECK_FALSE(sweep.rows[5].in_range);
  // offset growth carries the square-root-of-log signature
  CHECK(sweep.fit.rows_used == 4);
  CHECK(sweep.fit.exponent == doctest::Approx(0.5).epsilon(0.3));
}

TEST_CASE("extremal sweep: sampled means track the exact column") {
  ExperimentConfig config;
  config.family = "gaussian";
  config.n = 8;
  config.k_list = {4, 16};
  config.trials = 6;
  config.samples = 16000;
  config.seed = 31;
  const auto sweep = run_extremal_sweep(config);
  for (const auto& row : sweep.rows) {
    CHECK(row.mc_std_error > 0.0);
    CHECK(std::abs(row.mc_mean - row.expected_exact) <= 4.0 * row.mc_std_error);
  }
}

TEST_CASE("extremal sweep: byte-identical repeats") {
  ExperimentConfig config;
  config.family = "gaussian";
  config.n = 6;
  config.k_list = {4, 16};
  config.trials = 2;
  config.samples = 4000;
  config.seed = 555;
  const auto a = run_extremal_sweep(config);
  const auto b = run_extremal_sweep(config);
  CHECK(a.csv == b.csv);
  CHECK(!a.csv.empty());

  config.seed = 556;
  const auto c = run_extremal_sweep(config);
  CHECK(a.csv != c.csv);

  std::ostringstream csv_a, log_a, csv_b, log_b;
  config.seed = 555;
  cmd_extremal_sweep(config, csv_a, log_a);
  cmd_extremal_sweep(config, csv_b, log_b);
  CHECK(csv_a.str() == csv_b.str());
  CHECK(log_a.str() == log_b.str());
}

TEST_CASE("verify command: fault injection fails the named check") {
  ExperimentConfig config;
  config.samples = 10000;
  std::ostringstream out;
  const int rc = cmd_verify(config, out, "bad-normal");
  CHECK(rc == 2);
  CHECK(out.str().find("FAIL polytope-unit-normals") != std::string::npos);
}

TEST_CASE("verify report: byte-identical on repeated runs") {
  ExperimentConfig config;
  config.samples = 10000;
  const auto a = run_verify(config);
  const auto b = run_verify(config);
  CHECK(a.text == b.text);
  CHECK(a.all_pass);
}
