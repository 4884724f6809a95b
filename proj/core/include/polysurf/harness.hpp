#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "polysurf/bounds.hpp"
#include "polysurf/extremal.hpp"
#include "polysurf/surface.hpp"

namespace polysurf {

/// Batch experiment knobs. Parsed from `key = value` lines (one per line,
/// `#` comments) and/or command-line flags; flags win. `samples` feeds the
/// facet sampler as a per-polytope budget (split across facets, floor 1000
/// per facet) and the shell/volume samplers directly.
struct ExperimentConfig {
  std::string family = "gaussian";
  int n = 10;
  std::vector<long long> k_list = {4, 16, 64, 256, 1024};
  int trials = 4;
  std::int64_t samples = 20000;
  std::uint64_t seed = 12345;
  double epsilon = 0.0;  // shell half-width; 0 = pick from the measure scale
  double c_range = 1.0;  // c in the K <= exp(c/lambda) range condition
  std::string out;       // CSV destination; empty = stdout

  static ExperimentConfig from_file(const std::string& path);
  void apply_kv(const std::string& key, const std::string& value);
  /// Sorts and dedupes k_list, then checks every count is positive.
  void normalize();
};

/// Least-squares line through (x, y); exponent is the slope.
struct ScalingFit {
  double exponent = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // root-mean-square residual
  int rows_used = 0;
};

ScalingFit fit_line(std::span<const double> x, std::span<const double> y);

struct SweepRow {
  long long K = 0;
  double rho = 0.0;
  double expected_exact = 0.0;
  double mc_mean = 0.0;
  double mc_std_error = 0.0;
  double lower_rhs = 0.0;
  bool in_range = true;
};

/// Sweep output. The fit regresses ln(rho) on ln(ln K) over the unflagged
/// rows: the offset carries the construction's sqrt(log K) growth with the
/// dimension factor absorbed into the intercept, so the testable slope
/// is 1/2.
struct SweepResult {
  std::vector<SweepRow> rows;
  ScalingFit fit;
  std::string csv;
};

SweepResult run_extremal_sweep(const ExperimentConfig& config);

int cmd_params(const ExperimentConfig& config, std::ostream& csv);
int cmd_surface(const ExperimentConfig& config, const std::string& polytope_path,
                std::ostream& csv, std::ostream& log);
int cmd_extremal_sweep(const ExperimentConfig& config, std::ostream& csv,
                       std::ostream& log);

struct VerifyCheck {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct VerifyReport {
  std::vector<VerifyCheck> checks;
  bool all_pass = true;
  std::string text;  // one PASS/FAIL line per check, deterministic
};

/// Runs the whole invariant battery at the config's sample sizes.
/// `inject` deliberately corrupts one input to demonstrate detection:
/// "bad-normal" slips a non-unit facet normal into the fixture set.
VerifyReport run_verify(const ExperimentConfig& config, const std::string& inject = "");

int cmd_verify(const ExperimentConfig& config, std::ostream& out,
               const std::string& inject = "");

}  // namespace polysurf
