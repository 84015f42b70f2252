#include "gasteer/rotor_align.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gasteer/errors.hpp"

namespace gasteer {

namespace {

bool is_unit_vector(const Multivector& v) {
  return is_homogeneous(v, 1, 1e-9) && std::abs(norm(v) - 1.0) <= kFrameTolerance;
}

// Unit vector inside the subspace NO(blade), taken as the largest orthogonal
// projection of a basis vector onto it.
Multivector vector_in_blade(const Multivector& blade) {
  const Multivector inv = reverse(blade) / (norm(blade) * norm(blade));
  Multivector best(blade.dim());
  double best_norm = -1.0;
  for (int k = 1; k <= blade.dim(); ++k) {
    const Multivector e = Multivector::basis_vector(blade.dim(), k);
    const Multivector p = grade_project(inner_product(e, blade) * inv, 1);
    const double n = norm(p);
    if (n > best_norm) {
      best_norm = n;
      best = p;
    }
  }
  return normalize(best);
}

}  // namespace

Flag Flag::from_blades(std::vector<Multivector> blades) {
  if (blades.empty()) throw FlagMismatch("empty flag");
  const int dim = blades.front().dim();
  for (std::size_t i = 0; i < blades.size(); ++i) {
    Multivector& b = blades[i];
    const int grade = static_cast<int>(i) + 1;
    if (b.dim() != dim) throw FlagMismatch("flag blades live in different algebras");
    if (grade > dim) throw FlagMismatch("flag longer than the dimension");
    if (!(norm(b) > kNormEpsilon)) {
      throw FlagMismatch("flag blade V_" + std::to_string(grade) + " vanishes");
    }
    if (!is_homogeneous(b, grade, 1e-9)) {
      throw FlagMismatch("flag blade V_" + std::to_string(grade) + " is not of grade " +
                         std::to_string(grade));
    }
    b = normalize(grade_project(b, grade));
  }
  return Flag(std::move(blades));
}

Rotor rotor_between_vectors(const Multivector& x, const Multivector& y) {
  if (x.dim() != y.dim()) throw DimensionMismatch("rotor endpoints live in different algebras");
  if (!is_unit_vector(x) || !is_unit_vector(y)) {
    throw DimensionMismatch("rotor_between_vectors expects unit vectors");
  }
  const double cos_theta = inner_product(x, y).scalar_part();
  if (1.0 + cos_theta <= kAntipodalTolerance) {
    throw AntipodalVectors("vectors are antipodal; 1 + yx has no direction");
  }
  return Rotor::normalized(Multivector::scalar(x.dim(), 1.0) + y * x);
}

Rotor half_turn(const Multivector& x, const Multivector& u) {
  return rotor_between_vectors(u, -x) * rotor_between_vectors(x, u);
}

Flag flag_from_basis(const std::vector<Multivector>& vectors) {
  if (vectors.empty()) throw DependentVectors("empty basis");
  const int dim = vectors.front().dim();
  if (static_cast<int>(vectors.size()) != dim) {
    throw DimensionMismatch("basis of G_" + std::to_string(dim) + " needs " + std::to_string(dim) +
                            " vectors, got " + std::to_string(vectors.size()));
  }
  std::vector<Multivector> blades;
  blades.reserve(vectors.size());
  Multivector partial = Multivector::scalar(dim, 1.0);
  double scale = 1.0;
  for (const auto& v : vectors) {
    if (v.dim() != dim) throw DimensionMismatch("basis vectors live in different algebras");
    if (!is_homogeneous(v, 1)) throw DimensionMismatch("basis element is not a vector");
    partial = partial ^ v;
    scale *= norm(v);
    if (!(norm(partial) > kNormEpsilon * std::max(scale, kNormEpsilon))) {
      throw DependentVectors("basis vectors are linearly dependent at stage " +
                             std::to_string(blades.size() + 1));
    }
    blades.push_back(partial);
  }
  return Flag::from_blades(std::move(blades));
}

Alignment align_flags_traced(const Flag& v, const Flag& w) {
  const int m = v.dim();
  if (w.dim() != m) throw FlagMismatch("flags live in different algebras");
  if (static_cast<int>(v.length()) != m || static_cast<int>(w.length()) != m) {
    throw FlagMismatch("align_flags needs complete flags of length " + std::to_string(m));
  }
  if (max_abs_diff(v[m], w[m]) > kFrameTolerance) {
    throw FlagMismatch("top blades differ: the flags have opposite orientation");
  }

  Alignment out{Rotor::identity(m), {}};
  for (int i = m - 1; i >= 1; --i) {
    const Multivector vi = sandwich(out.rotor, v[i]);
    const Multivector w_next_dual = dual(w[i + 1]);
    const Multivector normal_v = normalize(grade_project(dual(normalize(vi ^ w_next_dual)), 1));
    const Multivector normal_w = normalize(grade_project(dual(normalize(w[i] ^ w_next_dual)), 1));

    const bool antipodal = 1.0 + inner_product(normal_v, normal_w).scalar_part() <= kAntipodalTolerance;
    Rotor step = antipodal ? half_turn(normal_v, vector_in_blade(vi))
                           : rotor_between_vectors(normal_v, normal_w);
    out.rotor = step * out.rotor;
    out.steps.push_back({i, step, antipodal});
  }
  return out;
}

Rotor align_flags(const Flag& v, const Flag& w) { return align_flags_traced(v, w).rotor; }

Rotor align_bases(const FramePair& pair) {
  const auto& xs = pair.xs;
  const auto& ys = pair.ys;
  if (xs.size() != ys.size() || xs.empty()) throw FlagMismatch("frames have different sizes");
  const int dim = xs.front().dim();
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (xs[i].dim() != dim || ys[i].dim() != dim) throw FlagMismatch("frames live in different algebras");
    for (std::size_t j = 0; j <= i; ++j) {
      const double gx = inner_product(xs[i], xs[j]).scalar_part();
      const double gy = inner_product(ys[i], ys[j]).scalar_part();
      const double scale = std::max(1.0, norm(xs[i]) * norm(xs[j]));
      if (std::abs(gx - gy) > kFrameTolerance * scale) {
        throw FlagMismatch("Gram matrices differ at (" + std::to_string(i + 1) + ", " +
                           std::to_string(j + 1) + ")");
      }
    }
  }
  Multivector px = Multivector::scalar(dim, 1.0);
  Multivector py = Multivector::scalar(dim, 1.0);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    px = px ^ xs[i];
    py = py ^ ys[i];
  }
  if (max_abs_diff(px, py) > kFrameTolerance * std::max(1.0, norm(px))) {
    throw FlagMismatch("pseudoscalars differ: the frames are not related by a rotation");
  }
  return align_flags(flag_from_basis(xs), flag_from_basis(ys));
}

Flag frame_flag_36(const Multivector& q) {
  if (q.dim() != 3) throw DimensionMismatch("frame_flag_36 expects a point of G_3");
  const Multivector x = grade_project(q, 1);
  const Multivector z = grade_project(q, 2);
  if (!(norm(x) > kDegenerateTolerance) || !(norm(z) > kDegenerateTolerance)) {
    throw DegenerateConfiguration("vector or bivector part vanishes");
  }
  const Multivector z_star = dual(z);
  if (!(norm(normalize(x) ^ normalize(z_star)) > kDegenerateTolerance)) {
    throw DegenerateConfiguration("x is parallel to z*; the flag plane is undefined");
  }
  return Flag::from_blades({x, x ^ z_star, Multivector::pseudoscalar(3)});
}

Flag frame_flag_47(const Multivector& q) {
  if (q.dim() != 4) throw DimensionMismatch("frame_flag_47 expects a point of G_4");
  Multivector ell = grade_project(q, 1);
  ell[0b0001] = 0.0;
  const Multivector y = grade_project(q, 2);
  for (unsigned mask : {0b0110u, 0b1010u, 0b1100u}) {
    if (std::abs(y[mask]) > 1e-12 * std::max(1.0, norm(y))) {
      throw ModelDomain("bivector part of a (4,7) point must lie in e1 ^ span(e2, e3, e4)");
    }
  }
  if (!(norm(ell) > kDegenerateTolerance) || !(norm(y) > kDegenerateTolerance)) {
    throw DegenerateConfiguration("l or y part vanishes");
  }
  const Multivector l_dot_y = inner_product(ell, y);
  const Multivector ell_hat = normalize(ell);
  if (!(norm(l_dot_y) > kDegenerateTolerance * norm(ell) * norm(y)) ||
      !(norm(ell_hat ^ normalize(l_dot_y)) > kDegenerateTolerance)) {
    throw DegenerateConfiguration("l is orthogonal to the plane of y; l ^ (l . y) vanishes");
  }
  if (!(norm(ell_hat ^ normalize(y)) > kDegenerateTolerance)) {
    throw DegenerateConfiguration("l lies in the plane of y; l ^ y vanishes");
  }
  return Flag::from_blades({ell, ell ^ l_dot_y, ell ^ y, Multivector::pseudoscalar(4)});
}

}  // namespace gasteer
