#include "polysurf/polytope.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "polysurf/rng.hpp"

namespace polysurf {

double dot(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

void validate_polytope(const Polytope& p) {
  if (p.dim < 2) raise(ErrorKind::dimension, "polytope dimension must be >= 2");
  if (p.halfspaces.empty()) {
    raise(ErrorKind::range, "polytope needs at least one halfspace");
  }
  for (const auto& h : p.halfspaces) {
    if (static_cast<int>(h.normal.size()) != p.dim) {
      raise(ErrorKind::dimension, "halfspace normal has the wrong dimension");
    }
    if (std::abs(norm(h.normal) - 1.0) > 1e-10) {
      raise(ErrorKind::domain, "halfspace normal is not unit length");
    }
    if (!std::isfinite(h.offset)) {
      raise(ErrorKind::domain, "halfspace offset is not finite");
    }
  }
}

bool contains(const Polytope& p, std::span<const double> x) {
  return max_violation(p, x) <= 0.0;
}

double max_violation(const Polytope& p, std::span<const double> x) {
  if (static_cast<int>(x.size()) != p.dim) {
    raise(ErrorKind::dimension, "point dimension does not match the polytope");
  }
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& h : p.halfspaces) {
    worst = std::max(worst, dot(h.normal, x) - h.offset);
  }
  return worst;
}

DistanceResult distance(const Polytope& p, std::span<const double> x, double tol,
                        int max_cycles) {
  if (!(tol > 0.0)) raise(ErrorKind::usage, "distance tolerance must be positive");
  const double violation = max_violation(p, x);
  DistanceResult result;
  if (violation <= 0.0) {
    return result;  // inside: distance 0, zero cycles
  }

  const int dim = p.dim;
  const std::size_t k = p.halfspaces.size();
  std::vector<double> point(x.begin(), x.end());
  std::vector<double> corrections(k * dim, 0.0);
  std::vector<double> shifted(dim);

  int cycle = 0;
  bool converged = false;
  for (; cycle < max_cycles; ++cycle) {
    double moved_sq = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      double* corr = corrections.data() + i * dim;
      for (int d = 0; d < dim; ++d) shifted[d] = point[d] + corr[d];
      const auto& h = p.halfspaces[i];
      const double overshoot = dot(h.normal, shifted) - h.offset;
      for (int d = 0; d < dim; ++d) {
        const double projected =
            overshoot > 0.0 ? shifted[d] - overshoot * h.normal[d] : shifted[d];
        corr[d] = shifted[d] - projected;
        moved_sq += (projected - point[d]) * (projected - point[d]);
        point[d] = projected;
      }
    }
    if (std::sqrt(moved_sq) < tol) {
      converged = true;
      ++cycle;
      break;
    }
  }

  double dist_sq = 0.0;
  for (int d = 0; d < dim; ++d) dist_sq += (point[d] - x[d]) * (point[d] - x[d]);
  result.distance = std::max(std::sqrt(dist_sq), violation);
  result.converged = converged;
  result.cycles = cycle;
  return result;
}

Polytope circumscribed_random(int n, int K, double rho, std::uint64_t seed) {
  if (n < 2) raise(ErrorKind::dimension, "dimension must be >= 2");
  if (K < 1) raise(ErrorKind::range, "need at least one halfspace");
  if (!(rho > 0.0)) raise(ErrorKind::range, "inradius must be positive");

  Polytope p;
  p.dim = n;
  p.halfspaces.reserve(K);
  RngStream rng = derive_stream(seed, 0x706f6c79);
  for (int i = 0; i < K; ++i) {
    Halfspace h;
    h.normal.resize(n);
    double norm_sq = 0.0;
    do {
      norm_sq = 0.0;
      for (auto& v : h.normal) {
        v = rng.normal();
        norm_sq += v * v;
      }
    } while (norm_sq < 1e-280);
    const double inv = 1.0 / std::sqrt(norm_sq);
    for (auto& v : h.normal) v *= inv;
    h.offset = rho;
    p.halfspaces.push_back(std::move(h));
  }
  validate_polytope(p);
  return p;
}

Polytope make_cube(int n, double scale) {
  if (n < 2) raise(ErrorKind::dimension, "cube needs n >= 2");
  if (!(scale > 0.0)) raise(ErrorKind::range, "scale must be positive");
  Polytope p;
  p.dim = n;
  p.halfspaces.reserve(2 * n);
  for (int d = 0; d < n; ++d) {
    for (double sign : {1.0, -1.0}) {
      Halfspace h;
      h.normal.assign(n, 0.0);
      h.normal[d] = sign;
      h.offset = scale;
      p.halfspaces.push_back(std::move(h));
    }
  }
  validate_polytope(p);
  return p;
}

Polytope make_simplex(int n, double scale) {
  if (n < 2) raise(ErrorKind::dimension, "simplex needs n >= 2");
  if (!(scale > 0.0)) raise(ErrorKind::range, "scale must be positive");

  // Regular simplex directions: centered unit basis of R^{n+1}, normalized,
  // then reflected so the all-ones axis becomes the dropped last coordinate.
  // Pairwise inner products come out to -1/n.
  const int m = n + 1;
  std::vector<double> householder(m);
  const double inv_sqrt_m = 1.0 / std::sqrt(static_cast<double>(m));
  for (int d = 0; d < m; ++d) householder[d] = inv_sqrt_m;
  householder[m - 1] -= 1.0;
  const double hh = dot(householder, householder);

  Polytope p;
  p.dim = n;
  p.halfspaces.reserve(m);
  std::vector<double> v(m);
  for (int i = 0; i < m; ++i) {
    for (int d = 0; d < m; ++d) v[d] = (d == i ? 1.0 : 0.0) - 1.0 / m;
    const double scale_v = 1.0 / std::sqrt(1.0 - 1.0 / m);
    for (auto& val : v) val *= scale_v;
    const double coeff = 2.0 * dot(v, householder) / hh;
    for (int d = 0; d < m; ++d) v[d] -= coeff * householder[d];

    Halfspace h;
    h.normal.assign(v.begin(), v.begin() + n);
    const double len = norm(h.normal);
    for (auto& val : h.normal) val /= len;  // scrub residual last-coordinate noise
    h.offset = scale;
    p.halfspaces.push_back(std::move(h));
  }
  validate_polytope(p);
  return p;
}

Polytope make_regular_polygon(int K, double scale) {
  if (K < 3) raise(ErrorKind::range, "polygon needs at least 3 sides");
  if (!(scale > 0.0)) raise(ErrorKind::range, "scale must be positive");
  Polytope p;
  p.dim = 2;
  p.halfspaces.reserve(K);
  for (int j = 0; j < K; ++j) {
    const double angle = 2.0 * M_PI * j / K;
    Halfspace h;
    h.normal = {std::cos(angle), std::sin(angle)};
    h.offset = scale;
    p.halfspaces.push_back(std::move(h));
  }
  validate_polytope(p);
  return p;
}

Polytope standard_shape(const std::string& name, int n, double scale) {
  if (name == "cube") return make_cube(n, scale);
  if (name == "simplex") return make_simplex(n, scale);
  for (const char* prefix : {"polygon:", "regular_polygon:"}) {
    const std::string_view p(prefix);
    if (name.rfind(prefix, 0) == 0) {
      if (n != 2) raise(ErrorKind::dimension, "polygon fixtures require n = 2");
      int k = 0;
      try {
        k = std::stoi(name.substr(p.size()));
      } catch (const std::exception&) {
        raise(ErrorKind::parse, "bad side count in '" + name + "'");
      }
      return make_regular_polygon(k, scale);
    }
  }
  raise(ErrorKind::parse, "unknown shape '" + name + "'");
}

ParsedPolytope parse_polytope(std::string_view text) {
  std::istringstream in{std::string(text)};
  ParsedPolytope out;
  int n = 0, k = 0;
  if (!(in >> n >> k)) raise(ErrorKind::parse, "missing `n K` header line");
  if (n < 2 || k < 1) raise(ErrorKind::parse, "header requires n >= 2 and K >= 1");

  out.polytope.dim = n;
  out.polytope.halfspaces.resize(k);
  for (int i = 0; i < k; ++i) {
    auto& h = out.polytope.halfspaces[i];
    h.normal.resize(n);
    for (int d = 0; d < n; ++d) {
      if (!(in >> h.normal[d])) {
        raise(ErrorKind::parse, "halfspace " + std::to_string(i) + ": short line");
      }
    }
    if (!(in >> h.offset)) {
      raise(ErrorKind::parse, "halfspace " + std::to_string(i) + ": missing offset");
    }
    const double len = norm(h.normal);
    const double deviation = std::abs(len - 1.0);
    if (deviation > 1e-3) {
      raise(ErrorKind::parse,
            "halfspace " + std::to_string(i) + ": normal length deviates by " +
                std::to_string(deviation));
    }
    if (deviation > 1e-10) {
      if (deviation > 1e-6) {
        out.warnings.push_back("halfspace " + std::to_string(i) +
                               ": normal renormalized (deviation " +
                               std::to_string(deviation) + ")");
      }
      for (auto& v : h.normal) v /= len;
    }
  }
  double extra;
  if (in >> extra) raise(ErrorKind::parse, "trailing data after the last halfspace");
  validate_polytope(out.polytope);
  return out;
}

std::string serialize_polytope(const Polytope& p) {
  std::string text =
      std::to_string(p.dim) + " " + std::to_string(p.facet_count()) + "\n";
  char buf[40];
  for (const auto& h : p.halfspaces) {
    for (double v : h.normal) {
      std::snprintf(buf, sizeof buf, "%.17g ", v);
      text += buf;
    }
    std::snprintf(buf, sizeof buf, "%.17g\n", h.offset);
    text += buf;
  }
  return text;
}

}  // namespace polysurf
