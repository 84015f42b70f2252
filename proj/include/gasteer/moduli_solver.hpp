#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "gasteer/carnot_models.hpp"

namespace gasteer {

using GeodesicParams = std::variant<GeodesicParams36, GeodesicParams47>;

double arc_time(const GeodesicParams& p);

// Target invariants: 3 entries (xx, zz, xz_star) for (3,6), 4 entries
// (x, ll, ly_e1, yy) for (4,7).
struct SolveRequest {
  Model model = Model::M36;
  std::vector<double> target;
  double k_max = 10.0;
  double t_max = 20.0;
  double tolerance = 1e-9;
  int max_starts = 256;
  std::uint64_t seed = 1;

  void validate() const;
};

struct Solution {
  GeodesicParams params;
  double residual_norm = 0.0;  // infinity norm
};

struct SolveDiagnostics {
  int starts = 0;
  int converged = 0;
};

struct SolveResult {
  std::vector<Solution> solutions;  // ascending arc time
  SolveDiagnostics diagnostics;
};

// Invariants of the representative geodesic at time t minus the target,
// followed by the level-condition residual.
Eigen::VectorXd residual(const GeodesicParams& params, double t, std::span<const double> target);

// Damped Newton from quasi-random starts in the box K in (0, k_max],
// t in (0, t_max]. Returns every distinct root, sorted by arc time.
// Throws InfeasibleTarget when no start converges.
SolveResult solve(const SolveRequest& request);

// Invariant tuple of a point (3 or 4 entries).
std::vector<double> invariants_of(const Model36Point& q);
std::vector<double> invariants_of(const Model47Point& q);
std::vector<double> geodesic_invariants(const GeodesicParams& params, double t);

// Classical RK4 on the coupled base and fiber systems from the origin, with
// constant fiber coordinates w = k and initial covector h0. Uses the vector
// form of the base equations, independent of the closed forms.
Multivector rk4_endpoint(Model model, const Eigen::Vector3d& k, const Eigen::VectorXd& h0,
                         double t_final, int steps);

// Same integration, recording the state after every step (steps + 1 points,
// first is the origin).
std::vector<Multivector> rk4_trajectory(Model model, const Eigen::Vector3d& k,
                                        const Eigen::VectorXd& h0, double t_final, int steps);

// Observed order of the RK4 oracle against `exact`: least-squares slope of
// -log2(max error on the coarse grid) over steps = base_steps * 2^j,
// j = 0 .. levels-1.
double rk4_observed_order(Model model, const Eigen::Vector3d& k, const Eigen::VectorXd& h0, double t_final,
                          const std::function<Multivector(double)>& exact, int base_steps = 100,
                          int levels = 4);

}  // namespace gasteer
