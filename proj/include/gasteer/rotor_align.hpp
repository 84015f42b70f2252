#pragma once

#include <vector>

#include "gasteer/ga.hpp"

namespace gasteer {

// Complete flag V_1 subset V_2 subset ... subset V_k encoded by blades, V_i of
// grade i. Blades are stored normalized.
class Flag {
 public:
  // Validates grades and non-vanishing norms, normalizes each blade.
  static Flag from_blades(std::vector<Multivector> blades);

  int dim() const { return blades_.front().dim(); }
  std::size_t length() const { return blades_.size(); }
  // 1-based, V_i.
  const Multivector& operator[](std::size_t i) const { return blades_.at(i - 1); }
  const std::vector<Multivector>& blades() const { return blades_; }

 private:
  explicit Flag(std::vector<Multivector> blades) : blades_(std::move(blades)) {}
  std::vector<Multivector> blades_;
};

// Two ordered bases expected to be congruent under a rotation.
struct FramePair {
  std::vector<Multivector> xs;
  std::vector<Multivector> ys;
};

inline constexpr double kFrameTolerance = 1e-9;
// Stage norm below which a model flag is rejected.
inline constexpr double kDegenerateTolerance = 1e-9;
// 1 + x.y at or below this is treated as antipodal.
inline constexpr double kAntipodalTolerance = 1e-12;

// hat(1 + y x): rotation in the plane x^y taking unit x to unit y.
// Throws AntipodalVectors when x = -y.
Rotor rotor_between_vectors(const Multivector& x, const Multivector& y);

// Rotation by pi in the plane of unit x and unit u (u orthogonal to x),
// composed from two quarter turns x -> u -> -x.
Rotor half_turn(const Multivector& x, const Multivector& u);

// [x1, x1^x2, ..., x1^...^xm]. Throws DependentVectors on near-dependence.
Flag flag_from_basis(const std::vector<Multivector>& vectors);

struct AlignmentStep {
  int index;            // i of the step, m-1 down to 1
  Rotor rotor;          // R_i
  bool antipodal_path;  // hyperplane normals were antipodal
};

struct Alignment {
  Rotor rotor;
  std::vector<AlignmentStep> steps;
};

// Rotor R with R V_i reverse(R) = W_i for all i, built by sweeping i from
// m-1 down to 1 and rotating the hyperplane V_i + W_{i+1}^perp onto
// W_i + W_{i+1}^perp at each step.
Alignment align_flags_traced(const Flag& v, const Flag& w);
Rotor align_flags(const Flag& v, const Flag& w);

// Rotor with R x_i reverse(R) = y_i. Throws FlagMismatch when the Gram
// matrices or pseudoscalars differ.
Rotor align_bases(const FramePair& pair);

// [x^, (x ^ z*)^, I] for q = x + z in G_3.
Flag frame_flag_36(const Multivector& q);

// [l^, (l ^ (l.y))^, (l ^ y)^, I] for q = x e1 + l + y in G_4.
Flag frame_flag_47(const Multivector& q);

}  // namespace gasteer
