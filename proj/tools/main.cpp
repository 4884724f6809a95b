#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "polysurf/harness.hpp"

namespace {

// Exit codes: 0 success / all checks pass, 1 usage error, 2 verification
// failure, 3 numeric divergence or other computation failure.
constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitVerifyFailed = 2;
constexpr int kExitNumeric = 3;

struct CommonOptions {
  std::string config_path;
  std::string family;
  int n = -1;
  std::string k_list;
  int trials = -1;
  long long samples = -1;
  long long seed = -1;
  double epsilon = -1.0;
  double c_range = -1.0;
  std::string out;
};

void add_common_flags(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--config", opts.config_path,
                  "config file of `key = value` lines (flags override it)");
  cmd->add_option("--family", opts.family,
                  "measure family: gaussian, power:<p>, or ball");
  cmd->add_option("--n", opts.n, "ambient dimension");
  cmd->add_option("--k-list", opts.k_list, "comma-separated facet counts");
  cmd->add_option("--trials", opts.trials, "sampled polytopes per facet count");
  cmd->add_option("--samples", opts.samples, "Monte Carlo budget per estimator");
  cmd->add_option("--seed", opts.seed, "random seed");
  cmd->add_option("--epsilon", opts.epsilon,
                  "shell half-width override (0 = from the measure scale)");
  cmd->add_option("--c-range", opts.c_range,
                  "c in the K <= exp(c/lambda) range condition");
  cmd->add_option("--out", opts.out, "CSV output path (default stdout)");
}

polysurf::ExperimentConfig build_config(const CommonOptions& opts) {
  polysurf::ExperimentConfig config;
  if (!opts.config_path.empty()) {
    config = polysurf::ExperimentConfig::from_file(opts.config_path);
  }
  if (!opts.family.empty()) config.family = opts.family;
  if (opts.n >= 0) config.n = opts.n;
  if (!opts.k_list.empty()) config.apply_kv("k_list", opts.k_list);
  if (opts.trials >= 0) config.trials = opts.trials;
  if (opts.samples >= 0) config.samples = opts.samples;
  if (opts.seed >= 0) config.seed = static_cast<std::uint64_t>(opts.seed);
  if (opts.epsilon >= 0.0) config.epsilon = opts.epsilon;
  if (opts.c_range >= 0.0) config.c_range = opts.c_range;
  if (!opts.out.empty()) config.out = opts.out;
  config.normalize();
  return config;
}

// CSV goes to --out when given, stdout otherwise.
class CsvSink {
 public:
  explicit CsvSink(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) {
        polysurf::raise(polysurf::ErrorKind::usage,
                        "cannot open output file '" + path + "'");
      }
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

int exit_code_for(const polysurf::Error& error) {
  switch (error.kind()) {
    case polysurf::ErrorKind::usage:
    case polysurf::ErrorKind::parse:
      return kExitUsage;
    default:
      return kExitNumeric;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "polysurf: surface area of halfspace-intersection polytopes under "
      "rotation-invariant log-concave measures"};
  app.require_subcommand(1);

  CommonOptions opts;
  std::string polytope_path;
  std::string inject;

  auto* params_cmd =
      app.add_subcommand("params", "derived scalar parameters of a measure model");
  add_common_flags(params_cmd, opts);

  auto* surface_cmd = app.add_subcommand(
      "surface", "surface-area estimates for a polytope file, one row per method");
  surface_cmd->add_option("polytope", polytope_path, "polytope text file")->required();
  add_common_flags(surface_cmd, opts);

  auto* sweep_cmd = app.add_subcommand(
      "extremal-sweep",
      "circumscribed random polytopes across facet counts, with a scaling fit");
  add_common_flags(sweep_cmd, opts);

  auto* verify_cmd = app.add_subcommand(
      "verify", "run the invariant battery, one PASS/FAIL line per check");
  add_common_flags(verify_cmd, opts);
  verify_cmd->add_option("--inject", inject,
                         "deliberately corrupt one input (bad-normal) to "
                         "demonstrate detection");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    const polysurf::ExperimentConfig config = build_config(opts);
    CsvSink sink(config.out);
    if (params_cmd->parsed()) {
      return polysurf::cmd_params(config, sink.stream());
    }
    if (surface_cmd->parsed()) {
      return polysurf::cmd_surface(config, polytope_path, sink.stream(), std::cerr);
    }
    if (sweep_cmd->parsed()) {
      return polysurf::cmd_extremal_sweep(config, sink.stream(), std::cerr);
    }
    if (verify_cmd->parsed()) {
      const int rc = polysurf::cmd_verify(config, sink.stream(), inject);
      return rc == 0 ? kExitOk : kExitVerifyFailed;
    }
  } catch (const polysurf::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
  return kExitUsage;
}
