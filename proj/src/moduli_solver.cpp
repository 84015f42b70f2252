#include "gasteer/moduli_solver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <random>
#include <string>

#include <Eigen/Dense>

#include "gasteer/errors.hpp"

namespace gasteer {

namespace {

constexpr double kConvergedResidual = 1e-10;
constexpr int kMaxIterations = 50;
constexpr int kMaxHalvings = 20;
constexpr double kJacobianStep = 1e-7;
constexpr double kDedupRadius = 1e-6;
constexpr int kDedupGrid = 16;
// Lower edge of the open box (0, k_max] x (0, t_max]; above the Jacobian step
// so central differences never leave the domain.
constexpr double kFloor = 1e-6;
constexpr int kMaxMarquardtTries = 30;
constexpr double kRankThreshold = 1e-7;
constexpr int kGridPhases = 64;
constexpr int kGridAngles = 24;
constexpr double kGridPhaseMax = 8.0 * std::numbers::pi;
constexpr int kGridSeeds = 32;

std::size_t target_size(Model model) { return model == Model::M36 ? 3 : 4; }
// The iteration runs on the level set in angle coordinates, so the system is
// square and the level condition holds by construction:
//   (3,6): u = (theta, phi, t),      K = theta / t, D = cos phi, C3 = sin phi
//   (4,7): u = (theta, phi, psi, t), K = theta / t, C = cos phi,
//          K C1 = sin phi cos psi, K C2 = sin phi sin psi.
// Using the phase theta = K t instead of K decouples the dilation direction,
// and the amplitudes K C_i stay bounded where C_i ~ 1/K blows up; both keep
// short arcs (small K t) tractable.
int unknown_count(Model model) { return model == Model::M36 ? 3 : 4; }

GeodesicParams to_params(Model model, const Eigen::VectorXd& u) {
  const double t = u[u.size() - 1], K = u[0] / t;
  if (model == Model::M36) return GeodesicParams36{K, std::cos(u[1]), std::sin(u[1]), t};
  const double amp = std::sin(u[1]);
  return GeodesicParams47{K, amp * std::cos(u[2]) / K, amp * std::sin(u[2]) / K, std::cos(u[1]), t};
}

double radical_inverse(std::uint64_t index, unsigned base) {
  double inv = 1.0 / base, f = inv, r = 0.0;
  while (index > 0) {
    r += f * static_cast<double>(index % base);
    index /= base;
    f *= inv;
  }
  return r;
}

// Halton point with a seeded Cranley-Patterson shift.
class StartSequence {
 public:
  StartSequence(int dims, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int d = 0; d < dims; ++d) shift_.push_back(u(rng));
  }

  std::vector<double> point(std::uint64_t i) const {
    static constexpr unsigned kPrimes[] = {2, 3, 5, 7, 11};
    std::vector<double> p;
    for (std::size_t d = 0; d < shift_.size(); ++d) {
      double v = radical_inverse(i + 1, kPrimes[d]) + shift_[d];
      v -= std::floor(v);
      p.push_back(std::clamp(v, 1e-6, 1.0 - 1e-6));
    }
    return p;
  }

 private:
  std::vector<double> shift_;
};

// Arc time is at least the Euclidean length of the horizontal endpoint.
double arc_time_floor(const SolveRequest& req) {
  const auto& v = req.target;
  const double len2 = req.model == Model::M36 ? v[0] : v[0] * v[0] + v[1];
  return std::sqrt(std::max(len2, 0.0));
}

// Arc times are denser near the Euclidean floor, where nearly straight short
// arcs sit. Even starts spread K over (0, k_max]; odd starts spread the phase
// K t over (0, 4 pi), which puts more of them at the small K short arcs need.
Eigen::VectorXd start_point(const SolveRequest& req, const std::vector<double>& s, int index) {
  const double pi = std::numbers::pi;
  const double t_lo = std::min(arc_time_floor(req), req.t_max);
  const double t = std::max(t_lo + (req.t_max - t_lo) * s.back() * s.back(), 2.0 * kFloor);
  const double theta = index % 2 == 0 ? req.k_max * t * s[0] : std::min(4.0 * pi * s[0], req.k_max * t);
  if (req.model == Model::M36) {
    Eigen::VectorXd u(3);
    u << theta, pi * (s[1] - 0.5), t;
    return u;
  }
  Eigen::VectorXd u(4);
  u << theta, pi * s[1], 2.0 * pi * s[2], t;
  return u;
}

bool in_box(const SolveRequest& req, const Eigen::VectorXd& u) {
  const double t = u[u.size() - 1], K = u[0] / t;
  return u.allFinite() && t >= kFloor && t <= req.t_max && K >= kFloor && K <= req.k_max;
}

Eigen::VectorXd residual_of(const SolveRequest& req, const Eigen::VectorXd& u) {
  const auto inv = geodesic_invariants(to_params(req.model, u), u[u.size() - 1]);
  Eigen::VectorXd r(inv.size());
  for (std::size_t i = 0; i < inv.size(); ++i) r[i] = inv[i] - req.target[i];
  return r;
}

// Central differences, one-sided at the edge of the box.
Eigen::MatrixXd jacobian(const SolveRequest& req, const Eigen::VectorXd& u, const Eigen::VectorXd& r) {
  const int n = static_cast<int>(u.size());
  Eigen::MatrixXd j(r.size(), n);
  for (int c = 0; c < n; ++c) {
    const double h = kJacobianStep * std::max(1.0, std::abs(u[c]));
    Eigen::VectorXd up = u, um = u;
    up[c] += h;
    um[c] -= h;
    const bool has_up = in_box(req, up), has_um = in_box(req, um);
    if (has_up && has_um) {
      j.col(c) = (residual_of(req, up) - residual_of(req, um)) / (2.0 * h);
    } else if (has_up) {
      j.col(c) = (residual_of(req, up) - r) / h;
    } else {
      j.col(c) = (r - residual_of(req, um)) / h;
    }
  }
  return j;
}

// Newton step with halving line search. The step is the minimum-norm solution
// of a rank-revealing decomposition: in parts of the (4,7) parameter space the
// invariants are locally dependent (numerical rank 3), the roots form a curve,
// and any point of it will do. Where the Jacobian is nearly singular
// (short arcs, small K t) the full step is far outside the region where the
// linearization holds and no halving helps; those iterations fall back to
// Levenberg-Marquardt steps (J^T J + lambda diag(J^T J)) d = -J^T r.
// Returns the final iterate when its residual meets the request tolerance.
std::optional<Eigen::VectorXd> newton(const SolveRequest& req, Eigen::VectorXd u) {
  Eigen::VectorXd r = residual_of(req, u);
  double lambda = 1e-3;
  auto try_step = [&](const Eigen::VectorXd& trial) {
    if (!in_box(req, trial)) return false;
    Eigen::VectorXd tr = residual_of(req, trial);
    if (!tr.allFinite() || !(tr.norm() < r.norm())) return false;
    u = trial;
    r = std::move(tr);
    return true;
  };

  for (int it = 0; it < kMaxIterations && r.lpNorm<Eigen::Infinity>() >= kConvergedResidual; ++it) {
    const Eigen::MatrixXd j = jacobian(req, u, r);
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(j);
    cod.setThreshold(kRankThreshold);
    const Eigen::VectorXd step = cod.solve(-r);
    bool accepted = false;
    if (step.allFinite()) {
      double alpha = 1.0;
      for (int k = 0; k <= kMaxHalvings && !accepted; ++k, alpha *= 0.5) accepted = try_step(u + alpha * step);
    }
    if (!accepted) {
      const Eigen::MatrixXd a = j.transpose() * j;
      const Eigen::VectorXd g = j.transpose() * r;
      for (int k = 0; k < kMaxMarquardtTries && !accepted; ++k) {
        Eigen::MatrixXd m = a;
        m.diagonal() += lambda * a.diagonal().cwiseMax(1e-12);
        const Eigen::VectorXd d = m.ldlt().solve(-g);
        accepted = d.allFinite() && try_step(u + d);
        lambda = accepted ? std::max(lambda / 3.0, 1e-12) : lambda * 4.0;
      }
    }
    if (!accepted) break;
  }
  if (!(r.lpNorm<Eigen::Infinity>() <= req.tolerance)) return std::nullopt;
  return u;
}

// Representative of the orbit-equivalent sign choices.
void canonicalize(GeodesicParams& p) {
  if (auto* p36 = std::get_if<GeodesicParams36>(&p)) {
    p36->D = std::abs(p36->D);
  } else {
    auto& p47 = std::get<GeodesicParams47>(p);
    p47.C = std::abs(p47.C);
  }
}

bool same_orbit_curve(const GeodesicParams& a, const GeodesicParams& b) {
  const double ta = arc_time(a), tb = arc_time(b);
  if (std::abs(ta - tb) > kDedupRadius * std::max(1.0, ta)) return false;
  for (int k = 0; k <= kDedupGrid; ++k) {
    const double s = static_cast<double>(k) / kDedupGrid;
    const auto ia = geodesic_invariants(a, s * ta);
    const auto ib = geodesic_invariants(b, s * tb);
    for (std::size_t i = 0; i < ia.size(); ++i) {
      if (std::abs(ia[i] - ib[i]) > kDedupRadius * std::max(1.0, std::abs(ia[i]))) return false;
    }
  }
  return true;
}

}  // namespace

double arc_time(const GeodesicParams& p) {
  return std::visit([](const auto& q) { return q.t_final; }, p);
}

void SolveRequest::validate() const {
  if (target.size() != target_size(model)) {
    throw ModelDomain("model " + model_name(model) + " needs " + std::to_string(target_size(model)) +
                      " target invariants, got " + std::to_string(target.size()));
  }
  for (double v : target) {
    if (!std::isfinite(v)) throw ModelDomain("target invariants must be finite");
  }
  if (!(k_max > 0.0) || !(t_max > 0.0)) throw ModelDomain("k_max and t_max must be positive");
  if (!(tolerance > 0.0)) throw ModelDomain("tolerance must be positive");
  if (max_starts < 1) throw ModelDomain("max_starts must be at least 1");
}

std::vector<double> invariants_of(const Model36Point& q) {
  const auto a = invariants_36(q).to_array();
  return {a.begin(), a.end()};
}

std::vector<double> invariants_of(const Model47Point& q) {
  const auto a = invariants_47(q).to_array();
  return {a.begin(), a.end()};
}

std::vector<double> geodesic_invariants(const GeodesicParams& params, double t) {
  if (const auto* p = std::get_if<GeodesicParams36>(&params)) {
    return invariants_of(representative_geodesic_36(*p, t));
  }
  return invariants_of(representative_geodesic_47(std::get<GeodesicParams47>(params), t));
}

Eigen::VectorXd residual(const GeodesicParams& params, double t, std::span<const double> target) {
  const auto inv = geodesic_invariants(params, t);
  if (inv.size() != target.size()) throw ModelDomain("target size does not match the model");
  Eigen::VectorXd r(inv.size() + 1);
  for (std::size_t i = 0; i < inv.size(); ++i) r[i] = inv[i] - target[i];
  r[inv.size()] = std::visit([](const auto& p) { return p.level_residual(); }, params);
  return r;
}

namespace {

std::vector<Eigen::VectorXd> multistart(const SolveRequest& req, int count, SolveDiagnostics& diag) {
  const StartSequence starts(unknown_count(req.model), req.seed);
  std::vector<Eigen::VectorXd> roots;
  for (int i = 0; i < count; ++i) {
    ++diag.starts;
    auto root = newton(req, start_point(req, starts.point(static_cast<std::uint64_t>(i)), i));
    if (!root) continue;
    ++diag.converged;
    roots.push_back(std::move(*root));
  }
  return roots;
}

// Dilations rescale arc time by lambda and each invariant by lambda^weight at
// fixed phase K t, so the arc time can be read off the weight-2 invariant
// (x.x or l.l) and the search reduced to phase and direction angles. Used
// when plain multistart finds nothing: near x = 0 on short (4,7) arcs the map
// is close to singular and basins are too small for quasi-random starts.
std::vector<Eigen::VectorXd> grid_starts(const SolveRequest& req, int count) {
  const bool m36 = req.model == Model::M36;
  const std::vector<double> weight = m36 ? std::vector<double>{2, 4, 3} : std::vector<double>{1, 2, 3, 4};
  const std::size_t ref = m36 ? 0 : 1;
  const double target_ref = req.target[ref];
  if (!(target_ref > 0.0)) return {};

  const double pi = std::numbers::pi;
  const double theta_max = std::min(req.k_max * req.t_max, kGridPhaseMax);
  const int n_psi = m36 ? 1 : kGridAngles * 2;
  std::vector<std::pair<double, Eigen::VectorXd>> scored;
  for (int a = 1; a <= kGridPhases; ++a) {
    for (int b = 0; b < kGridAngles; ++b) {
      for (int c = 0; c < n_psi; ++c) {
        Eigen::VectorXd u(m36 ? 3 : 4);
        const double theta = theta_max * a / kGridPhases;
        const double phi = m36 ? pi * ((b + 0.5) / kGridAngles - 0.5) : pi * (b + 0.5) / kGridAngles;
        if (m36) u << theta, phi, 1.0;
        else u << theta, phi, 2.0 * pi * c / n_psi, 1.0;
        SolveRequest unit = req;
        std::fill(unit.target.begin(), unit.target.end(), 0.0);
        const Eigen::VectorXd f = residual_of(unit, u);
        if (!(f[ref] > 0.0)) continue;
        const double t = std::sqrt(target_ref / f[ref]);
        u[u.size() - 1] = t;
        if (!in_box(req, u)) continue;
        double score = 0.0;
        for (std::size_t i = 0; i < weight.size(); ++i) {
          const double unit_scale = std::pow(target_ref, weight[i] / 2.0);
          score = std::max(score, std::abs(f[i] * std::pow(t, weight[i]) - req.target[i]) / unit_scale);
        }
        scored.emplace_back(score, std::move(u));
      }
    }
  }
  const auto keep = std::min<std::size_t>(scored.size(), static_cast<std::size_t>(count));
  std::partial_sort(scored.begin(), scored.begin() + keep, scored.end(),
                    [](const auto& x, const auto& y) { return x.first < y.first; });
  std::vector<Eigen::VectorXd> out;
  for (std::size_t i = 0; i < keep; ++i) out.push_back(std::move(scored[i].second));
  return out;
}

}  // namespace

SolveResult solve(const SolveRequest& req) {
  req.validate();

  SolveResult result;
  std::vector<Eigen::VectorXd> roots = multistart(req, req.max_starts, result.diagnostics);
  if (roots.empty()) {
    for (const auto& u : grid_starts(req, kGridSeeds)) {
      ++result.diagnostics.starts;
      if (auto root = newton(req, u)) {
        ++result.diagnostics.converged;
        roots.push_back(std::move(*root));
      }
    }
  }

  std::vector<Solution> found;
  for (const auto& root : roots) {
    GeodesicParams params = to_params(req.model, root);
    canonicalize(params);
    // Forward check, independent of the Newton bookkeeping.
    const double t = arc_time(params);
    const Eigen::VectorXd r = residual(params, t, req.target);
    const double res = r.lpNorm<Eigen::Infinity>();
    if (!(res <= req.tolerance)) continue;
    found.push_back({params, res});
  }
  if (found.empty()) {
    throw InfeasibleTarget("no start converged; the target may lie outside the reachable set for K <= " +
                           std::to_string(req.k_max) + ", t <= " + std::to_string(req.t_max));
  }

  std::stable_sort(found.begin(), found.end(), [](const Solution& a, const Solution& b) {
    const double ta = arc_time(a.params), tb = arc_time(b.params);
    if (ta != tb) return ta < tb;
    return a.residual_norm < b.residual_norm;
  });
  for (const auto& s : found) {
    const bool dup = std::any_of(result.solutions.begin(), result.solutions.end(),
                                 [&](const Solution& kept) { return same_orbit_curve(kept.params, s.params); });
    if (!dup) result.solutions.push_back(s);
  }
  return result;
}

// ---------------------------------------------------------------------------
// RK4 oracle

namespace {

// State layout: (3,6) -> x[3], z[3], h[3]; (4,7) -> x, l[3], y[3], h[4].
Eigen::VectorXd derivative(Model model, const Eigen::MatrixXd& omega, const Eigen::VectorXd& s) {
  Eigen::VectorXd d(s.size());
  if (model == Model::M36) {
    const Eigen::Vector3d x = s.segment<3>(0);
    const Eigen::Vector3d h = s.segment<3>(6);
    d.segment<3>(0) = h;
    d.segment<3>(3) = 0.5 * x.cross(h);
    d.segment<3>(6) = -omega * h;
    return d;
  }
  const double x = s[0];
  const Eigen::Vector3d ell = s.segment<3>(1);
  const Eigen::Vector4d h = s.segment<4>(7);
  const double h0 = h[0];
  const Eigen::Vector3d hbar = h.tail<3>();
  d[0] = h0;
  d.segment<3>(1) = hbar;
  d.segment<3>(4) = 0.5 * (x * hbar - h0 * ell);
  d.segment<4>(7) = -omega * h;
  return d;
}

Multivector state_point(Model model, const Eigen::VectorXd& s) {
  if (model == Model::M36) {
    return Model36Point::from_coordinates(s.segment<3>(0), s.segment<3>(3)).mv();
  }
  return Model47Point::from_coordinates(s[0], s.segment<3>(1), s.segment<3>(4)).mv();
}

}  // namespace

std::vector<Multivector> rk4_trajectory(Model model, const Eigen::Vector3d& k, const Eigen::VectorXd& h0,
                                        double t_final, int steps) {
  if (steps < 1) throw ModelDomain("RK4 needs at least one step");
  const int m = algebra_dim(model);
  if (h0.size() != m) throw ModelDomain("initial covector must have " + std::to_string(m) + " entries");

  const Eigen::MatrixXd omega = omega_matrix(model, k[0], k[1], k[2]);
  Eigen::VectorXd s = Eigen::VectorXd::Zero(model == Model::M36 ? 9 : 11);
  s.tail(m) = h0;
  const double dt = t_final / steps;

  std::vector<Multivector> out;
  out.reserve(static_cast<std::size_t>(steps) + 1);
  out.push_back(state_point(model, s));
  for (int i = 0; i < steps; ++i) {
    const Eigen::VectorXd k1 = derivative(model, omega, s);
    const Eigen::VectorXd k2 = derivative(model, omega, s + 0.5 * dt * k1);
    const Eigen::VectorXd k3 = derivative(model, omega, s + 0.5 * dt * k2);
    const Eigen::VectorXd k4 = derivative(model, omega, s + dt * k3);
    s += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    out.push_back(state_point(model, s));
  }
  return out;
}

Multivector rk4_endpoint(Model model, const Eigen::Vector3d& k, const Eigen::VectorXd& h0, double t_final,
                         int steps) {
  return rk4_trajectory(model, k, h0, t_final, steps).back();
}

double rk4_observed_order(Model model, const Eigen::Vector3d& k, const Eigen::VectorXd& h0, double t_final,
                          const std::function<Multivector(double)>& exact, int base_steps, int levels) {
  if (levels < 2) throw ModelDomain("order estimate needs at least two levels");
  std::vector<Multivector> reference;
  for (int i = 0; i <= base_steps; ++i) reference.push_back(exact(t_final * i / base_steps));

  // Fit log2(err) = a - p j.
  double sj = 0.0, se = 0.0, sjj = 0.0, sje = 0.0;
  for (int j = 0; j < levels; ++j) {
    const int stride = 1 << j;
    const auto traj = rk4_trajectory(model, k, h0, t_final, base_steps * stride);
    double err = 0.0;
    for (int i = 0; i <= base_steps; ++i) err = std::max(err, max_abs_diff(traj[i * stride], reference[i]));
    const double e = std::log2(err);
    sj += j, se += e, sjj += j * j, sje += j * e;
  }
  const double n = levels;
  return -(n * sje - sj * se) / (n * sjj - sj * sj);
}

}  // namespace gasteer
