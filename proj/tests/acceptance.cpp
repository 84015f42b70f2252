// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "gasteer/errors.hpp"
#include "gasteer/steer.hpp"
#include "test_support.hpp"

using namespace gasteer;
using gasteer::testing::Rng;

namespace {

int failures = 0;

void report(int n, bool pass, const std::string& what, const std::string& detail) {
  std::printf("%s [%d] %s: %s\n", pass ? "PASS" : "FAIL", n, what.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double max_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

std::vector<double> as_vector(const GeodesicParams& p) {
  if (const auto* a = std::get_if<GeodesicParams36>(&p)) return {a->K, a->D, a->C3, a->t_final};
  const auto& b = std::get<GeodesicParams47>(p);
  return {b.K, b.C1, b.C2, b.C, b.t_final};
}

double closest_root(const SolveResult& r, const std::vector<double>& want) {
  double best = INFINITY;
  for (const auto& s : r.solutions) best = std::min(best, max_diff(as_vector(s.params), want));
  return best;
}

const Multivector kTarget36 = Model36Point::from_coordinates({2, -1, 3}, {-2, 2, 1}).mv();
const Multivector kTarget47 = Model47Point::from_coordinates(1.0, {2, 1, 3}, {-1, 2, 2}).mv();
const std::vector<double> kRoot36{0.9886, 0.6885, 0.7252, 5.0236};
const std::vector<double> kRoot47{0.8358, -0.7816, -0.5324, 0.6126, 6.0748};

void criterion_1() {
  const auto inv = point_invariants({Model::M36, kTarget36});
  const double err = max_diff(inv, {14.0, -9.0, 3.0});
  report(1, err <= 1e-12, "(3,6) target invariants = (14, -9, 3)",
         fmt("got (%.15g, %.15g, %.15g), max error %.2e", inv[0], inv[1], inv[2], err));
}

void criterion_2() {
  SolveRequest req;
  req.model = Model::M36;
  req.target = {14.0, -9.0, 3.0};
  const auto t0 = std::chrono::steady_clock::now();
  double dist = INFINITY;
  try {
    dist = closest_root(solve(req), kRoot36);
  } catch (const Error&) {
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  report(2, dist <= 5e-3 && secs < 10.0, "(3,6) solve reaches (K, D, C3, t) = (0.9886, 0.6885, 0.7252, 5.0236)",
         fmt("closest root at distance %.2e, %.3f s", dist, secs));
}

void criterion_3() {
  try {
    const SteerReport r = steer({Model::M36, kTarget36}, {});
    const std::vector<double> printed{0.5216, -0.6741, 3.643, -1.439, 2.082, 1.611};
    const auto& q = r.representative_endpoint;
    const std::vector<double> got{q[0b001], q[0b010], q[0b100], q[0b011], q[0b101], q[0b110]};
    const double qo_err = max_diff(got, printed);
    report(3, r.endpoint_error <= 5e-2 && qo_err <= 5e-3, "(3,6) steering endpoint and q_o",
           fmt("endpoint error %.2e, q_o deviation from printed %.2e", r.endpoint_error, qo_err));
  } catch (const Error& e) {
    report(3, false, "(3,6) steering endpoint and q_o", e.what());
  }
}

void criterion_4() {
  const auto inv = point_invariants({Model::M47, kTarget47});
  const double err = max_diff(inv, {1.0, 14.0, -6.0, -9.0});
  report(4, err <= 1e-12, "(4,7) target invariants = (1, 14, -6, -9)",
         fmt("got (%.15g, %.15g, %.15g, %.15g), max error %.2e", inv[0], inv[1], inv[2], inv[3], err));
}

void criterion_5() {
  try {
    SolveRequest req;
    req.model = Model::M47;
    req.target = {1.0, 14.0, -6.0, -9.0};
    const double dist = closest_root(solve(req), kRoot47);
    const SteerReport r = steer({Model::M47, kTarget47}, {});
    const double e1_err = max_abs_diff(sandwich(r.rotor, Multivector::basis_vector(4, 1)), Multivector::basis_vector(4, 1));
    report(5, dist <= 5e-3 && r.endpoint_error <= 5e-2 && e1_err <= 1e-10, "(4,7) solve and steer",
           fmt("closest root at distance %.2e, endpoint error %.2e, |R e1 R~ - e1| = %.2e", dist, r.endpoint_error,
               e1_err));
  } catch (const Error& e) {
    report(5, false, "(4,7) solve and steer", e.what());
  }
}

std::vector<Multivector> random_frame(Rng& rng, int dim) {
  for (;;) {
    std::vector<Multivector> xs;
    for (int i = 0; i < dim; ++i) xs.push_back(testing::random_vector(rng, dim));
    Multivector top = Multivector::scalar(dim, 1.0);
    for (const auto& x : xs) top = top ^ x;
    if (norm(top) > 1e-3) return xs;
  }
}

void criterion_6() {
  Rng rng(6);
  int generic_fail = 0, antipodal_seen = 0, antipodal_fail = 0;
  double worst = 0.0;
  auto check = [&](const std::vector<Multivector>& xs, const Rotor& s, bool forced) {
    std::vector<Multivector> ys;
    for (const auto& x : xs) ys.push_back(sandwich(s, x));
    double err = INFINITY;
    bool antipodal = false;
    try {
      const Rotor r = align_bases({xs, ys});
      err = 0.0;
      for (std::size_t i = 0; i < xs.size(); ++i) err = std::max(err, norm(sandwich(r, xs[i]) - ys[i]));
      for (const auto& st : align_flags_traced(flag_from_basis(xs), flag_from_basis(ys)).steps) {
        antipodal = antipodal || st.antipodal_path;
      }
    } catch (const Error&) {
    }
    worst = std::max(worst, err);
    const bool ok = err < 1e-9;
    if (antipodal || forced) {
      antipodal_seen += antipodal;
      antipodal_fail += !ok || (forced && !antipodal);
    } else {
      generic_fail += !ok;
    }
  };
  for (int dim : {3, 4}) {
    for (int trial = 0; trial < 1000; ++trial) check(random_frame(rng, dim), testing::random_rotor(rng, dim), false);
    // Half turns in the plane of the first two frame vectors make a step's normals antipodal.
    for (int trial = 0; trial < 100; ++trial) {
      const auto xs = random_frame(rng, dim);
      const Multivector a = normalize(xs[0]);
      const Multivector b = normalize(xs[1] - inner_product(xs[1], a).scalar_part() * a);
      check(xs, half_turn(a, b), true);
    }
  }
  report(6, generic_fail == 0 && antipodal_fail == 0 && antipodal_seen > 0,
         "rotor recovery on 2 x 1000 random congruent frames plus antipodal cases",
         fmt("generic failures %d, antipodal-path cases %d with %d failures, worst error %.2e", generic_fail,
             antipodal_seen, antipodal_fail, worst));
}

void criterion_7() {
  Rng rng(7);
  double worst = 0.0, lo = INFINITY, hi = -INFINITY;
  for (int trial = 0; trial < 100; ++trial) {
    for (Model m : {Model::M36, Model::M47}) {
      GeodesicParams p;
      FiberData f;
      if (m == Model::M36) {
        GeodesicParams36 a = testing::random_params_36(rng, 0.1, 3.0);
        a.t_final = 10.0;
        p = a, f = representative_fiber_36(a);
      } else {
        GeodesicParams47 b = testing::random_params_47(rng, 0.1, 3.0);
        b.t_final = 10.0;
        p = b, f = representative_fiber_47(b);
      }
      auto exact = [&](double t) {
        if (const auto* a = std::get_if<GeodesicParams36>(&p)) return representative_geodesic_36(*a, t).mv();
        return representative_geodesic_47(std::get<GeodesicParams47>(p), t).mv();
      };
      const auto traj = rk4_trajectory(m, f.k, f.h0, 10.0, 4096);
      for (int i = 0; i <= 4096; ++i) worst = std::max(worst, max_abs_diff(traj[i], exact(10.0 * i / 4096)));
      const double order = rk4_observed_order(m, f.k, f.h0, 10.0, exact);
      lo = std::min(lo, order), hi = std::max(hi, order);
    }
  }
  report(7, worst < 1e-6 && lo >= 3.7 && hi <= 4.3, "closed forms vs RK4 (4096 steps, t in [0, 10], 2 x 100 sets)",
         fmt("max deviation %.2e, observed order in [%.3f, %.3f]", worst, lo, hi));
}

void criterion_8() {
  Rng rng(8);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto p = testing::random_point_36(rng);
    const auto q = so3_action(testing::random_rotor(rng, 3), p);
    worst = std::max(worst, max_diff(invariants_of(p), invariants_of(q)));
    const auto a = testing::random_point_47(rng);
    const auto b = so3_action(testing::random_e1_fixing_rotor(rng), a);
    worst = std::max(worst, max_diff(invariants_of(a), invariants_of(b)));
  }
  double speed = 0.0;
  const double h = 1e-5;
  for (int trial = 0; trial < 100; ++trial) {
    const GeodesicParams36 p = testing::random_params_36(rng);
    const GeodesicParams47 g = testing::random_params_47(rng);
    for (int i = 1; i < 20; ++i) {
      const double t = p.t_final * i / 20, u = g.t_final * i / 20;
      const Multivector d36 = grade_project(
          representative_geodesic_36(p, t + h).mv() - representative_geodesic_36(p, t - h).mv(), 1) / (2 * h);
      const Multivector d47 = grade_project(
          representative_geodesic_47(g, u + h).mv() - representative_geodesic_47(g, u - h).mv(), 1) / (2 * h);
      speed = std::max({speed, std::abs(norm(d36) - 1.0), std::abs(norm(d47) - 1.0)});
    }
  }
  report(8, worst < 1e-9 && speed < 1e-6, "invariance on 2 x 1000 (point, rotor) pairs and unit speed",
         fmt("max invariant change %.2e, max | |xdot| - 1 | %.2e", worst, speed));
}

void criterion_9() {
  Rng rng(9);
  SteerOptions opts;
  opts.acceptance_bound = 1e-6;
  int fails[2] = {0, 0};
  double worst = 0.0;
  std::string first_error;
  std::vector<std::string> failed;
  for (int trial = 0; trial < 200; ++trial) {
    const GeodesicParams36 p = testing::random_params_36(rng);
    const GeodesicParams47 g = testing::random_params_47(rng);
    const TargetPoint targets[2] = {
        {Model::M36, so3_action(testing::random_rotor(rng, 3), representative_geodesic_36(p, p.t_final)).mv()},
        {Model::M47,
         so3_action(testing::random_e1_fixing_rotor(rng), representative_geodesic_47(g, g.t_final)).mv()}};
    for (int k = 0; k < 2; ++k) {
      try {
        worst = std::max(worst, steer(targets[k], opts).endpoint_error);
      } catch (const Error& e) {
        ++fails[k];
        if (first_error.empty()) first_error = e.what();
        const auto inv = k == 0 ? geodesic_invariants(p, p.t_final) : geodesic_invariants(g, g.t_final);
        std::string line = k == 0 ? fmt("(3,6) K=%.4f D=%.4f C3=%.4f t=%.4f", p.K, p.D, p.C3, p.t_final)
                                  : fmt("(4,7) K=%.4f C1=%.4f C2=%.4f C=%.4f t=%.4f, K t=%.3f", g.K, g.C1,
                                        g.C2, g.C, g.t_final, g.K * g.t_final);
        line += ", invariants (";
        for (std::size_t i = 0; i < inv.size(); ++i) line += fmt(i ? ", %.3g" : "%.3g", inv[i]);
        failed.push_back(line + ")");
      }
    }
  }
  report(9, fails[0] == 0 && fails[1] == 0, "round trip of 2 x 200 generated targets at 1e-6",
         fmt("failures (3,6) %d, (4,7) %d, worst endpoint error %.2e%s%s", fails[0], fails[1], worst,
             first_error.empty() ? "" : "; first error: ", first_error.c_str()));
  for (const auto& line : failed) std::printf("     failed target %s\n", line.c_str());
}

void criterion_10() {
  // Agreement of the printed invariant curves with the GA path on a grid of
  // 20 parameter sets x 20 times. Informational: never fails.
  const char* names36[] = {"x.x", "z.z", "(x^z)*"};
  const char* names47[] = {"x", "l.l", "(l.y)e1", "y.y"};
  std::printf("     audit of printed invariant curves (20 params x 20 times, agreement at 1e-9):\n");
  for (Model m : {Model::M36, Model::M47}) {
    const int n = m == Model::M36 ? 3 : 4;
    std::vector<double> worst(n, 0.0);
    std::vector<int> agree(n, 0);
    for (int i = 0; i < 20; ++i) {
      const double K = 0.2 + 0.1 * i, phi = -1.2 + 0.12 * i;
      for (int j = 0; j < 20; ++j) {
        const double t = 0.5 * (j + 1);
        std::vector<double> printed, ga;
        if (m == Model::M36) {
          const GeodesicParams36 p{K, std::cos(phi), std::sin(phi), 10.0};
          const auto a = invariant_closed_forms_36(p, t).to_array();
          printed.assign(a.begin(), a.end());
          ga = invariants_of(representative_geodesic_36(p, t));
        } else {
          const double c = std::cos(0.15 + 0.06 * i), r = std::sin(0.15 + 0.06 * i) / K;
          const GeodesicParams47 p{K, r * std::cos(3.0 * phi), r * std::sin(3.0 * phi), c, 10.0};
          const auto a = invariant_closed_forms_47(p, t).to_array();
          printed.assign(a.begin(), a.end());
          ga = invariants_of(representative_geodesic_47(p, t));
        }
        for (int k = 0; k < n; ++k) {
          const double d = std::abs(printed[k] - ga[k]);
          worst[k] = std::max(worst[k], d);
          agree[k] += d <= 1e-9 * std::max(1.0, std::abs(ga[k]));
        }
      }
    }
    for (int k = 0; k < n; ++k) {
      std::printf("     %s %-8s agree %3d/400, max |printed - GA| %.3e%s\n", model_name(m).c_str(),
                  m == Model::M36 ? names36[k] : names47[k], agree[k], worst[k],
                  agree[k] == 400 ? "" : "  (systematic discrepancy, GA path is canonical)");
    }
  }
  report(10, true, "printed-formula audit", "report above");
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  std::printf("%s: %d criterion(s) failed\n", failures ? "FAILED" : "ALL PASSED", failures);
  return failures ? 1 : 0;
}
