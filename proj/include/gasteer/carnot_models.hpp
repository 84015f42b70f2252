#pragma once

#include <array>
#include <string>
#include <string_view>

#include <Eigen/Core>

#include "gasteer/ga.hpp"

namespace gasteer {

// The two step-2 Carnot groups: growth vector (3,6) lives in G_3, growth
// vector (4,7) in G_4.
enum class Model { M36, M47 };

std::string model_name(Model model);  // "36" or "47"
Model parse_model(std::string_view name);
int algebra_dim(Model model);

// Point (x, z) of the (3,6) group stored as q = x + z in G_3.
//
// The vector coordinates z = (z1, z2, z3) of the group law correspond to the
// bivector z1 e23 - z2 e13 + z3 e12 = z I, so that the vector product term
// x x x' becomes x ^ x'.
class Model36Point {
 public:
  static Model36Point origin() { return Model36Point(Multivector(3)); }
  // Throws ModelDomain when grades other than 1 and 2 are populated.
  static Model36Point from_multivector(const Multivector& q, double tol = 1e-9);
  static Model36Point from_coordinates(const Eigen::Vector3d& x, const Eigen::Vector3d& z);

  const Multivector& mv() const { return q_; }
  Multivector x() const { return grade_project(q_, 1); }
  Multivector z() const { return grade_project(q_, 2); }
  Eigen::Vector3d x_coordinates() const;
  Eigen::Vector3d z_coordinates() const;
  // (x1, x2, x3, z1, z2, z3)
  std::array<double, 6> coordinates() const;

 private:
  explicit Model36Point(Multivector q) : q_(std::move(q)) {}
  Multivector q_;
};

// Point (x, l, y) of the (4,7) group stored as q = x e1 + l + y in G_4, with
// l in span(e2, e3, e4) and y = e1 ^ (y1 e2 + y2 e3 + y3 e4).
class Model47Point {
 public:
  static Model47Point origin() { return Model47Point(Multivector(4)); }
  static Model47Point from_multivector(const Multivector& q, double tol = 1e-9);
  static Model47Point from_coordinates(double x, const Eigen::Vector3d& ell, const Eigen::Vector3d& y);

  const Multivector& mv() const { return q_; }
  double x() const { return q_[0b0001]; }
  Multivector ell() const;
  Multivector y() const { return grade_project(q_, 2); }
  Eigen::Vector3d ell_coordinates() const;
  Eigen::Vector3d y_coordinates() const;
  // (x, l1, l2, l3, y1, y2, y3)
  std::array<double, 7> coordinates() const;

 private:
  explicit Model47Point(Multivector q) : q_(std::move(q)) {}
  Multivector q_;
};

// Representative (3,6) geodesic constants. K = 0 selects the straight line.
struct GeodesicParams36 {
  double K = 1.0;
  double D = 1.0;
  double C3 = 0.0;
  double t_final = 1.0;

  double level_residual() const { return D * D + C3 * C3 - 1.0; }
  // Throws ModelDomain unless K >= 0, D > 0, t_final > 0 and D^2 + C3^2 = 1.
  void validate(double tol = 1e-9) const;
};

// Representative (4,7) geodesic constants. K = 0 selects the straight line.
struct GeodesicParams47 {
  double K = 1.0;
  double C1 = 1.0;
  double C2 = 0.0;
  double C = 0.0;
  double t_final = 1.0;

  double level_residual() const { return K * K * (C1 * C1 + C2 * C2) + C * C - 1.0; }
  void validate(double tol = 1e-9) const;
};

struct Invariants36 {
  double xx = 0.0;       // x . x
  double zz = 0.0;       // z . z, <= 0
  double xz_star = 0.0;  // (x ^ z)*

  std::array<double, 3> to_array() const { return {xx, zz, xz_star}; }
};

struct Invariants47 {
  double x = 0.0;
  double ll = 0.0;     // l . l
  double ly_e1 = 0.0;  // (l . y) e1
  double yy = 0.0;     // y . y

  std::array<double, 4> to_array() const { return {x, ll, ly_e1, yy}; }
};

Model36Point group_product_36(const Model36Point& p, const Model36Point& q);
Model36Point group_inverse_36(const Model36Point& p);
Model47Point group_product_47(const Model47Point& p, const Model47Point& q);
Model47Point group_inverse_47(const Model47Point& p);

// Skew matrix of the fiber system hdot = -Omega h: 3x3 for (3,6), 4x4 for (4,7).
Eigen::MatrixXd omega_matrix(Model model, double K1, double K2, double K3);

// h(t) = (C1 cos Kt - C2 sin Kt) v1 + (C1 sin Kt + C2 cos Kt) v2 + C3 v3 with
// (v1, v2, v3) a right-handed basis adapted to ker Omega. K = 0 gives the
// constant h = (C1, C2, C3).
Eigen::Vector3d fiber_solution_36(const Eigen::Vector3d& k, const Eigen::Vector3d& c, double t);

// (h0, h1, h2, h3) with h0 = K(C2 cos Kt - C1 sin Kt) and
// hbar = K(C2 sin Kt + C1 cos Kt) r1 + C3 a + C4 b, where r1 = k / K and
// a, b span ker Omega. K = 0 gives the constant h = (C1, C2, C3, C4).
Eigen::Vector4d fiber_solution_47(const Eigen::Vector3d& k, const Eigen::Vector4d& c, double t);

// Closed-form representative geodesic from the origin, 0 <= t <= t_final.
Model36Point representative_geodesic_36(const GeodesicParams36& p, double t);
Model47Point representative_geodesic_47(const GeodesicParams47& p, double t);

// Fiber data (w = K-vector, h(0)) under which the representative geodesic
// solves the base and fiber systems.
struct FiberData {
  Eigen::Vector3d k;
  Eigen::VectorXd h0;
};
FiberData representative_fiber_36(const GeodesicParams36& p);
FiberData representative_fiber_47(const GeodesicParams47& p);

Invariants36 invariants_36(const Model36Point& q);
Invariants47 invariants_47(const Model47Point& q);

// (x, z) -> (R x R~, R z R~).
Model36Point so3_action(const Rotor& r, const Model36Point& q);
// (x, l, y) -> (x, R l R~, R y R~). Throws RotorDomain if R moves e1.
Model47Point so3_action(const Rotor& r, const Model47Point& q);

inline constexpr double kFixesE1Tolerance = 1e-10;
bool fixes_e1(const Rotor& r, double tol = kFixesE1Tolerance);

// Invariant curves as printed in closed form. Kept only to audit against
// invariants_36/47 of the representative geodesic, which are canonical.
Invariants36 invariant_closed_forms_36(const GeodesicParams36& p, double t);
Invariants47 invariant_closed_forms_47(const GeodesicParams47& p, double t);

}  // namespace gasteer
