#include "gasteer/carnot_models.hpp"

#include <cmath>
#include <string>

#include <Eigen/Geometry>

#include "gasteer/errors.hpp"

namespace gasteer {

namespace {

constexpr unsigned kE1 = 0b0001;
constexpr unsigned kE2 = 0b0010;
constexpr unsigned kE3 = 0b0100;
constexpr unsigned kE4 = 0b1000;
constexpr unsigned kE12 = 0b0011;
constexpr unsigned kE13 = 0b0101;
constexpr unsigned kE23 = 0b0110;
constexpr unsigned kE14 = 0b1001;

void require_grades(const Multivector& q, std::initializer_list<int> allowed, double tol,
                    const char* what) {
  const double scale = std::max(1.0, norm(q));
  for (unsigned i = 0; i < q.size(); ++i) {
    bool ok = false;
    for (int g : allowed) ok = ok || grade_of(i) == g;
    if (!ok && std::abs(q[i]) > tol * scale) {
      throw ModelDomain(std::string(what) + " has a component on " + blade_name(i));
    }
  }
}

// Unit vector orthogonal to the unit vector n, built from the coordinate axis
// least aligned with n.
Eigen::Vector3d orthogonal_unit(const Eigen::Vector3d& n) {
  Eigen::Index axis = 0;
  n.cwiseAbs().minCoeff(&axis);
  Eigen::Vector3d e = Eigen::Vector3d::Unit(axis);
  return (e - e.dot(n) * n).normalized();
}

void check_time(double t, double t_final) {
  if (!(t >= 0.0) || t > t_final * (1.0 + 1e-12) + 1e-12) {
    throw ModelDomain("geodesic time " + std::to_string(t) + " outside [0, " +
                      std::to_string(t_final) + "]");
  }
}

}  // namespace

std::string model_name(Model model) { return model == Model::M36 ? "36" : "47"; }

Model parse_model(std::string_view name) {
  if (name == "36" || name == "3,6" || name == "(3,6)") return Model::M36;
  if (name == "47" || name == "4,7" || name == "(4,7)") return Model::M47;
  throw ParseError("unknown model '" + std::string(name) + "', expected 36 or 47");
}

int algebra_dim(Model model) { return model == Model::M36 ? 3 : 4; }

// ---------------------------------------------------------------------------
// Points

Model36Point Model36Point::from_multivector(const Multivector& q, double tol) {
  if (q.dim() != 3) throw ModelDomain("(3,6) points live in G_3");
  require_grades(q, {1, 2}, tol, "(3,6) point");
  Multivector clean = grade_project(q, 1) + grade_project(q, 2);
  return Model36Point(clean);
}

Model36Point Model36Point::from_coordinates(const Eigen::Vector3d& x, const Eigen::Vector3d& z) {
  Multivector q = Multivector::vector({x[0], x[1], x[2]});
  q += dual(Multivector::vector({z[0], z[1], z[2]}));
  return Model36Point(q);
}

Eigen::Vector3d Model36Point::x_coordinates() const { return {q_[kE1], q_[kE2], q_[kE3]}; }

Eigen::Vector3d Model36Point::z_coordinates() const {
  // z I = z1 e23 - z2 e13 + z3 e12
  return {q_[kE23], -q_[kE13], q_[kE12]};
}

std::array<double, 6> Model36Point::coordinates() const {
  const Eigen::Vector3d x = x_coordinates();
  const Eigen::Vector3d z = z_coordinates();
  return {x[0], x[1], x[2], z[0], z[1], z[2]};
}

Model47Point Model47Point::from_multivector(const Multivector& q, double tol) {
  if (q.dim() != 4) throw ModelDomain("(4,7) points live in G_4");
  require_grades(q, {1, 2}, tol, "(4,7) point");
  const double scale = std::max(1.0, norm(q));
  for (unsigned mask : {0b0110u, 0b1010u, 0b1100u}) {
    if (std::abs(q[mask]) > tol * scale) {
      throw ModelDomain("(4,7) bivector part has a component on " + blade_name(mask) +
                        " outside e1 ^ span(e2, e3, e4)");
    }
  }
  Multivector clean(4);
  for (unsigned mask : {kE1, kE2, kE3, kE4, kE12, kE13, kE14}) clean[mask] = q[mask];
  return Model47Point(clean);
}

Model47Point Model47Point::from_coordinates(double x, const Eigen::Vector3d& ell,
                                            const Eigen::Vector3d& y) {
  Multivector q(4);
  q[kE1] = x;
  q[kE2] = ell[0];
  q[kE3] = ell[1];
  q[kE4] = ell[2];
  q[kE12] = y[0];
  q[kE13] = y[1];
  q[kE14] = y[2];
  return Model47Point(q);
}

Multivector Model47Point::ell() const {
  Multivector l = grade_project(q_, 1);
  l[kE1] = 0.0;
  return l;
}

Eigen::Vector3d Model47Point::ell_coordinates() const { return {q_[kE2], q_[kE3], q_[kE4]}; }

Eigen::Vector3d Model47Point::y_coordinates() const { return {q_[kE12], q_[kE13], q_[kE14]}; }

std::array<double, 7> Model47Point::coordinates() const {
  const Eigen::Vector3d l = ell_coordinates();
  const Eigen::Vector3d y = y_coordinates();
  return {x(), l[0], l[1], l[2], y[0], y[1], y[2]};
}

// ---------------------------------------------------------------------------
// Parameters

void GeodesicParams36::validate(double tol) const {
  if (!std::isfinite(K) || !std::isfinite(D) || !std::isfinite(C3) || !std::isfinite(t_final)) {
    throw ModelDomain("(3,6) geodesic constants must be finite");
  }
  if (K < 0.0) throw ModelDomain("(3,6) frequency K must be >= 0");
  if (!(D > 0.0)) throw ModelDomain("(3,6) amplitude D must be > 0 (D = 0 is a constant control)");
  if (!(t_final > 0.0)) throw ModelDomain("(3,6) arc time must be > 0");
  if (std::abs(level_residual()) > tol) {
    throw ModelDomain("(3,6) level set D^2 + C3^2 = 1 violated by " + std::to_string(level_residual()));
  }
}

void GeodesicParams47::validate(double tol) const {
  if (!std::isfinite(K) || !std::isfinite(C1) || !std::isfinite(C2) || !std::isfinite(C) ||
      !std::isfinite(t_final)) {
    throw ModelDomain("(4,7) geodesic constants must be finite");
  }
  if (K < 0.0) throw ModelDomain("(4,7) frequency K must be >= 0");
  if (C1 == 0.0 && C2 == 0.0) throw ModelDomain("(4,7) constants C1, C2 must not both vanish");
  if (!(t_final > 0.0)) throw ModelDomain("(4,7) arc time must be > 0");
  if (std::abs(level_residual()) > tol) {
    throw ModelDomain("(4,7) level condition K^2(C1^2 + C2^2) + C^2 = 1 violated by " +
                      std::to_string(level_residual()));
  }
}

// ---------------------------------------------------------------------------
// Group structure

Model36Point group_product_36(const Model36Point& p, const Model36Point& q) {
  const Multivector x = p.x();
  const Multivector xp = q.x();
  return Model36Point::from_multivector(p.mv() + q.mv() + 0.5 * (x ^ xp));
}

Model36Point group_inverse_36(const Model36Point& p) { return Model36Point::from_multivector(-p.mv()); }

Model47Point group_product_47(const Model47Point& p, const Model47Point& q) {
  const Multivector e1 = Multivector::basis_vector(4, 1);
  const Multivector bracket = e1 ^ (p.x() * q.ell() - q.x() * p.ell());
  return Model47Point::from_multivector(p.mv() + q.mv() + 0.5 * bracket);
}

Model47Point group_inverse_47(const Model47Point& p) { return Model47Point::from_multivector(-p.mv()); }

Eigen::MatrixXd omega_matrix(Model model, double K1, double K2, double K3) {
  if (model == Model::M36) {
    Eigen::MatrixXd m(3, 3);
    m << 0, K1, K2,  //
        -K1, 0, K3,  //
        -K2, -K3, 0;
    return m;
  }
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(4, 4);
  m(0, 1) = K1;
  m(0, 2) = K2;
  m(0, 3) = K3;
  m(1, 0) = -K1;
  m(2, 0) = -K2;
  m(3, 0) = -K3;
  return m;
}

// ---------------------------------------------------------------------------
// Fiber systems

Eigen::Vector3d fiber_solution_36(const Eigen::Vector3d& k, const Eigen::Vector3d& c, double t) {
  const double K = k.norm();
  if (K == 0.0) return c;
  const double K1 = k[0], K2 = k[1], K3 = k[2];
  const double s = std::hypot(K2, K3);

  const Eigen::Vector3d v3 = Eigen::Vector3d(K3, -K2, K1) / K;
  Eigen::Vector3d v1, v2;
  if (s > 1e-12 * K) {
    v1 = Eigen::Vector3d(-K1 * K3, K1 * K2, s * s) / (K * s);
    v2 = Eigen::Vector3d(-K2, -K3, 0.0) / s;
  } else {
    v1 = orthogonal_unit(v3);
    v2 = v3.cross(v1);
  }
  const double ct = std::cos(K * t), st = std::sin(K * t);
  return (c[0] * ct - c[1] * st) * v1 + (c[0] * st + c[1] * ct) * v2 + c[2] * v3;
}

Eigen::Vector4d fiber_solution_47(const Eigen::Vector3d& k, const Eigen::Vector4d& c, double t) {
  const double K = k.norm();
  if (K == 0.0) return c;
  const double K1 = k[0], K2 = k[1], K3 = k[2];
  const Eigen::Vector3d r1 = k / K;

  Eigen::Vector3d kernel_part;
  if (std::abs(K1) > 1e-12 * K) {
    kernel_part = c[2] * Eigen::Vector3d(-K3, 0.0, K1) + c[3] * Eigen::Vector3d(-K2, K1, 0.0);
  } else {
    const Eigen::Vector3d a = orthogonal_unit(r1);
    kernel_part = c[2] * a + c[3] * r1.cross(a);
  }
  const double ct = std::cos(K * t), st = std::sin(K * t);
  Eigen::Vector4d h;
  h[0] = K * (c[1] * ct - c[0] * st);
  h.tail<3>() = K * (c[1] * st + c[0] * ct) * r1 + kernel_part;
  return h;
}

// ---------------------------------------------------------------------------
// Representative geodesics

Model36Point representative_geodesic_36(const GeodesicParams36& p, double t) {
  if (p.K < 0.0) throw ModelDomain("(3,6) frequency K must be >= 0");
  check_time(t, p.t_final);
  const double D = p.D, C3 = p.C3, K = p.K;
  Multivector q(3);
  if (K == 0.0) {
    q[kE2] = D * t;
    q[kE3] = C3 * t;
    return Model36Point::from_multivector(q);
  }
  const double kt = K * t, c = std::cos(kt), s = std::sin(kt);
  const double a = C3 * D / (2.0 * K * K);
  q[kE1] = D / K * (1.0 - c);
  q[kE2] = D / K * s;
  q[kE3] = C3 * t;
  q[kE12] = -D * D / (2.0 * K * K) * (kt - s);
  // -a (...) e3^e1 = +a (...) e1^e3
  q[kE13] = a * (kt - 2.0 * s + kt * c);
  q[kE23] = a * (2.0 - kt * s - 2.0 * c);
  return Model36Point::from_multivector(q);
}

Model47Point representative_geodesic_47(const GeodesicParams47& p, double t) {
  if (p.K < 0.0) throw ModelDomain("(4,7) frequency K must be >= 0");
  check_time(t, p.t_final);
  const double K = p.K, C1 = p.C1, C2 = p.C2, C = p.C;
  Multivector q(4);
  q[kE3] = C * t;
  if (K == 0.0) return Model47Point::from_multivector(q);
  const double kt = K * t, c = std::cos(kt), s = std::sin(kt);
  q[kE1] = C1 * c + C2 * s - C1;
  q[kE2] = C1 * s - C2 * c + C2;
  q[kE12] = 0.5 * (C1 * C1 + C2 * C2) * (kt - s);
  q[kE13] = C / (2.0 * K) * ((2.0 * C1 - C2 * kt) * s - (C1 * kt + 2.0 * C2) * c + 2.0 * C2 - C1 * kt);
  return Model47Point::from_multivector(q);
}

FiberData representative_fiber_36(const GeodesicParams36& p) {
  Eigen::VectorXd h0(3);
  h0 << 0.0, p.D, p.C3;
  return {Eigen::Vector3d(-p.K, 0.0, 0.0), h0};
}

FiberData representative_fiber_47(const GeodesicParams47& p) {
  Eigen::VectorXd h0(4);
  h0 << p.K * p.C2, p.K * p.C1, p.C, 0.0;
  return {Eigen::Vector3d(p.K, 0.0, 0.0), h0};
}

// ---------------------------------------------------------------------------
// Invariants and symmetry

Invariants36 invariants_36(const Model36Point& q) {
  const Multivector x = q.x();
  const Multivector z = q.z();
  return {inner_product(x, x).scalar_part(), inner_product(z, z).scalar_part(),
          dual(x ^ z).scalar_part()};
}

Invariants47 invariants_47(const Model47Point& q) {
  const Multivector l = q.ell();
  const Multivector y = q.y();
  const Multivector e1 = Multivector::basis_vector(4, 1);
  return {q.x(), inner_product(l, l).scalar_part(), (inner_product(l, y) * e1).scalar_part(),
          inner_product(y, y).scalar_part()};
}

Model36Point so3_action(const Rotor& r, const Model36Point& q) {
  if (r.dim() != 3) throw DimensionMismatch("(3,6) action needs a rotor of G_3");
  return Model36Point::from_multivector(sandwich(r, q.mv()));
}

bool fixes_e1(const Rotor& r, double tol) {
  const Multivector e1 = Multivector::basis_vector(r.dim(), 1);
  return max_abs_diff(sandwich(r, e1), e1) <= tol;
}

Model47Point so3_action(const Rotor& r, const Model47Point& q) {
  if (r.dim() != 4) throw DimensionMismatch("(4,7) action needs a rotor of G_4");
  if (!fixes_e1(r)) throw RotorDomain("(4,7) action needs a rotor fixing e1");
  return Model47Point::from_multivector(sandwich(r, q.mv()));
}

Invariants36 invariant_closed_forms_36(const GeodesicParams36& p, double t) {
  const double K = p.K, D = p.D, C3 = p.C3;
  const double c = std::cos(K * t), s = std::sin(K * t);
  const double D2 = D * D, C32 = C3 * C3, K2 = K * K;
  Invariants36 out;
  out.xx = -2.0 * D2 / K2 * (c - 1.0) + C32 * t * t;
  out.zz = -D2 / (4.0 * K2 * K2) *
           ((4.0 * C32 * K2 - 4.0 * C32 - D2) * c * c +
            2.0 * K * C32 * (2.0 * t * (K - 1.0) * s + t * t * K - 4.0) * c -
            2.0 * K * t * (4.0 * C32 + D2) * s + t * t * (2.0 * C32 + D2) * K2 + D2 + 8.0 * C32);
  out.xz_star = D2 * C3 / (2.0 * K2 * K) *
                ((-2.0 * K + 2.0) * c * c + (2.0 * K + 2.0) * c + K2 * t * t + K * t * s - 4.0);
  return out;
}

Invariants47 invariant_closed_forms_47(const GeodesicParams47& p, double t) {
  const double K = p.K, C1 = p.C1, C2 = p.C2, C = p.C;
  const double kt = K * t, c = std::cos(kt), s = std::sin(kt);
  const double amp = C1 * C1 + C2 * C2;
  const double ell1 = C1 * s + C2 * (1.0 - c);
  const double bracket = C1 * (2.0 * s - kt * c - kt) + C2 * (2.0 - 2.0 * c - kt * s);
  Invariants47 out;
  out.x = C1 * (c - 1.0) + C2 * s;
  out.ll = ell1 * ell1 + (C * t) * (C * t);
  out.ly_e1 = 0.5 * (amp * ell1 * (kt - c) + C * C / K * t * bracket);
  out.yy = 0.25 * (amp * amp * (kt - c) * (kt - c) + C * C / (K * K) * bracket * bracket);
  return out;
}

}  // namespace gasteer
