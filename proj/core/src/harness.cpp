#include "polysurf/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "polysurf/rng.hpp"

namespace polysurf {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

std::vector<long long> parse_k_list(const std::string& text) {
  std::vector<long long> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    try {
      out.push_back(std::stoll(item));
    } catch (const std::exception&) {
      raise(ErrorKind::usage, "bad facet count '" + item + "' in k_list");
    }
  }
  if (out.empty()) raise(ErrorKind::usage, "k_list is empty");
  return out;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  std::uint64_t state = seed ^ (a * 0x9E3779B97F4A7C15ULL) ^ (b + 0x165667B19E3779F9ULL);
  return splitmix64(state);
}

}  // namespace

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(ErrorKind::usage, "cannot open config file '" + path + "'");
  ExperimentConfig config;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      raise(ErrorKind::usage,
            path + ":" + std::to_string(line_no) + ": expected `key = value`");
    }
    config.apply_kv(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  config.normalize();
  return config;
}

void ExperimentConfig::apply_kv(const std::string& key, const std::string& value) {
  try {
    if (key == "family") {
      family = value;
    } else if (key == "n") {
      n = std::stoi(value);
    } else if (key == "k_list" || key == "k-list") {
      k_list = parse_k_list(value);
    } else if (key == "trials") {
      trials = std::stoi(value);
    } else if (key == "samples") {
      samples = std::stoll(value);
    } else if (key == "seed") {
      seed = std::stoull(value);
    } else if (key == "epsilon") {
      epsilon = std::stod(value);
    } else if (key == "c_range" || key == "c-range") {
      c_range = std::stod(value);
    } else if (key == "out") {
      out = value;
    } else {
      raise(ErrorKind::usage, "unknown config key '" + key + "'");
    }
  } catch (const Error&) {
    throw;
  } catch (const std::exception&) {
    raise(ErrorKind::usage, "bad value '" + value + "' for config key '" + key + "'");
  }
}

void ExperimentConfig::normalize() {
  std::sort(k_list.begin(), k_list.end());
  k_list.erase(std::unique(k_list.begin(), k_list.end()), k_list.end());
  if (k_list.empty()) raise(ErrorKind::usage, "k_list is empty");
  if (k_list.front() < 1) raise(ErrorKind::usage, "facet counts must be positive");
  if (n < 2) raise(ErrorKind::usage, "dimension must be at least 2");
  if (trials < 0) raise(ErrorKind::usage, "trials must be nonnegative");
  if (samples < 1000) raise(ErrorKind::usage, "samples must be at least 1000");
  if (epsilon < 0.0) raise(ErrorKind::usage, "epsilon must be nonnegative");
  if (!(c_range > 0.0)) raise(ErrorKind::usage, "c_range must be positive");
}

ScalingFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    raise(ErrorKind::usage, "fit needs at least two points");
  }
  const double m = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double denom = m * sxx - sx * sx;
  if (std::abs(denom) < 1e-30) raise(ErrorKind::usage, "degenerate fit abscissae");
  ScalingFit fit;
  fit.exponent = (m * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.exponent * sx) / m;
  double rss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - fit.intercept - fit.exponent * x[i];
    rss += r * r;
  }
  fit.residual = std::sqrt(rss / m);
  fit.rows_used = static_cast<int>(x.size());
  return fit;
}

SweepResult run_extremal_sweep(const ExperimentConfig& config) {
  const auto model = MeasureModel::make(config.family, config.n);
  const auto params = compute_params(model);

  SweepResult result;
  std::string csv = extremal_csv_header() + "\n";
  char buf[420];

  for (std::size_t ki = 0; ki < config.k_list.size(); ++ki) {
    const long long K = config.k_list[ki];
    if (K < 2) raise(ErrorKind::range, "the construction needs K >= 2");

    SweepRow row;
    row.K = K;
    row.in_range = params.lambda * std::log(static_cast<double>(K)) <= config.c_range;
    row.rho = solve_rho(model, params, static_cast<int>(K));
    row.expected_exact =
        expected_surface_exact(model, params, static_cast<int>(K), row.rho);
    row.lower_rhs = lower_bound_rhs(params, static_cast<double>(K));

    if (config.trials > 0) {
      const std::int64_t per_facet = std::max<std::int64_t>(1000, config.samples / K);
      double acc = 0.0, acc_sq = 0.0;
      for (int trial = 0; trial < config.trials; ++trial) {
        const Polytope p = circumscribed_random(
            config.n, static_cast<int>(K), row.rho, mix_seed(config.seed, ki, trial));
        const double s =
            surface_mc(model, p, per_facet, mix_seed(config.seed, ki, 1000 + trial))
                .value;
        acc += s;
        acc_sq += s * s;
      }
      row.mc_mean = acc / config.trials;
      if (config.trials > 1) {
        const double var =
            std::max(0.0, acc_sq / config.trials - row.mc_mean * row.mc_mean);
        row.mc_std_error = std::sqrt(var / (config.trials - 1));
      }
    }

    std::snprintf(buf, sizeof buf, "%s,%d,%lld,%.12g,%.12g,%.12g,%.12g,%.12g,%d\n",
                  params.family.c_str(), params.n, row.K, row.rho, row.expected_exact,
                  row.mc_mean, row.mc_std_error, row.lower_rhs, row.in_range ? 1 : 0);
    csv += buf;
    result.rows.push_back(row);
  }

  std::vector<double> xs, ys;
  for (const auto& row : result.rows) {
    if (!row.in_range) continue;
    xs.push_back(std::log(std::log(static_cast<double>(row.K))));
    ys.push_back(std::log(row.rho));
  }
  if (xs.size() < 2) {  // degraded: too few rows inside the range condition
    xs.clear();
    ys.clear();
    for (const auto& row : result.rows) {
      xs.push_back(std::log(std::log(static_cast<double>(row.K))));
      ys.push_back(std::log(row.rho));
    }
  }
  if (xs.size() >= 2) result.fit = fit_line(xs, ys);

  result.csv = std::move(csv);
  return result;
}

int cmd_params(const ExperimentConfig& config, std::ostream& csv) {
  const auto model = MeasureModel::make(config.family, config.n);
  const auto params = compute_params(model);
  csv << params_csv_header() << "\n" << params_csv_row(params) << "\n";
  return 0;
}

int cmd_surface(const ExperimentConfig& config, const std::string& polytope_path,
                std::ostream& csv, std::ostream& log) {
  std::ifstream in(polytope_path);
  if (!in) raise(ErrorKind::usage, "cannot open polytope file '" + polytope_path + "'");
  std::stringstream text;
  text << in.rdbuf();
  const ParsedPolytope parsed = parse_polytope(text.str());
  for (const auto& warning : parsed.warnings) {
    log << "warning: " << warning << "\n";
  }
  const Polytope& p = parsed.polytope;

  const auto model = MeasureModel::make(config.family, p.dim);
  const auto params = compute_params(model);
  const int k = p.facet_count();

  csv << surface_csv_header() << "\n";

  const std::int64_t per_facet = std::max<std::int64_t>(1000, config.samples / k);
  const auto facet = surface_mc(model, p, per_facet, config.seed);
  csv << surface_csv_row(facet, params.family, p.dim, k, config.seed) << "\n";

  const double eps_small =
      config.epsilon > 0.0 ? config.epsilon : default_shell_eps(params);
  const std::int64_t shell_samples = std::max<std::int64_t>(10000, config.samples);
  const auto shell = shell_oracle_mc(model, params, p, 2.0 * eps_small, eps_small,
                                     shell_samples, config.seed);
  if (!shell.warning.empty()) log << "warning: " << shell.warning << "\n";
  csv << surface_csv_row(shell, params.family, p.dim, k, config.seed) << "\n";

  if (p.dim == 2) {
    const auto exact = polygon_exact_2d(model, p);
    csv << surface_csv_row(exact, params.family, p.dim, k, config.seed) << "\n";
  }
  return 0;
}

int cmd_extremal_sweep(const ExperimentConfig& config, std::ostream& csv,
                       std::ostream& log) {
  const SweepResult result = run_extremal_sweep(config);
  csv << result.csv;
  char buf[220];
  std::snprintf(buf, sizeof buf,
                "fit: ln(rho) ~ exponent*ln(ln K) + intercept | exponent=%.6g "
                "intercept=%.6g residual=%.6g rows=%d\n",
                result.fit.exponent, result.fit.intercept, result.fit.residual,
                result.fit.rows_used);
  log << buf;
  int in_range_rows = 0;
  for (const auto& row : result.rows) {
    in_range_rows += row.in_range;
    if (!row.in_range) {
      log << "note: K=" << row.K << " lies outside the range condition; row flagged\n";
    }
  }
  if (in_range_rows < 2 && result.fit.rows_used > in_range_rows) {
    log << "note: fewer than two rows inside the range condition; the fit used "
           "all rows\n";
  } else if (in_range_rows < static_cast<int>(result.rows.size())) {
    log << "note: the fit used the " << in_range_rows << " unflagged rows\n";
  }
  return 0;
}

int cmd_verify(const ExperimentConfig& config, std::ostream& out,
               const std::string& inject) {
  const VerifyReport report = run_verify(config, inject);
  out << report.text;
  return report.all_pass ? 0 : 2;
}

}  // namespace polysurf
