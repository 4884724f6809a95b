#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "polysurf/common.hpp"

namespace polysurf {

/// One halfspace {x : <x, normal> <= offset} with a unit normal. Offsets
/// may be negative (origin outside).
struct Halfspace {
  std::vector<double> normal;
  double offset = 0.0;
};

/// Intersection of halfspaces. Possibly unbounded; redundant facets are
/// kept (the estimators weight them zero naturally).
struct Polytope {
  int dim = 0;
  std::vector<Halfspace> halfspaces;

  int facet_count() const { return static_cast<int>(halfspaces.size()); }
};

/// Shape checks: dim >= 2, K >= 1, matching normal lengths, unit normals
/// within 1e-10. Generators and the parser run this; hand-built instances
/// can skip it (the verification harness exploits that to show the checks
/// catch corrupted inputs).
void validate_polytope(const Polytope& p);

bool contains(const Polytope& p, std::span<const double> x);

/// max_i <x,u_i> - rho_i; nonpositive exactly when x is inside.
double max_violation(const Polytope& p, std::span<const double> x);

struct DistanceResult {
  double distance = 0.0;
  bool converged = true;
  int cycles = 0;
};

/// Euclidean distance from x to the polytope via Dykstra's cyclic
/// projections. Converged when a full cycle moves the iterate less than
/// tol; capped at max_cycles (returns the best iterate, flag cleared).
/// The result never falls below the max-violation lower bound.
DistanceResult distance(const Polytope& p, std::span<const double> x,
                        double tol = 1e-10, int max_cycles = 10000);

/// K halfspaces at common offset rho with i.i.d. uniform unit normals;
/// deterministic in the seed.
Polytope circumscribed_random(int n, int K, double rho, std::uint64_t seed);

Polytope make_cube(int n, double scale);
Polytope make_simplex(int n, double scale);
Polytope make_regular_polygon(int K, double scale);

/// Dispatcher for fixture names: `cube`, `simplex`, `polygon:<K>`.
Polytope standard_shape(const std::string& name, int n, double scale);

struct ParsedPolytope {
  Polytope polytope;
  std::vector<std::string> warnings;
};

/// Text format: first line `n K`, then K lines `u_1 ... u_n rho`.
/// Normals off unit length by more than 1e-6 are a parse error; those
/// between 1e-10 and 1e-6 are renormalized with a warning.
ParsedPolytope parse_polytope(std::string_view text);
std::string serialize_polytope(const Polytope& p);

// Small dense-vector helpers shared by the samplers.
double dot(std::span<const double> a, std::span<const double> b);
double norm(std::span<const double> a);

}  // namespace polysurf
