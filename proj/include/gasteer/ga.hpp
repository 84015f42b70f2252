#pragma once

#include <array>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>

namespace gasteer {

// Dense multivector of the Euclidean geometric algebra G_m, m <= 6.
//
// Coefficients are indexed by basis-blade bitmask: bit i set means e_{i+1} is
// a factor. Every basis blade is taken in ascending index order, so
// index 0b011 is e1^e2 and index 0b101 is e1^e3.
class Multivector {
 public:
  static constexpr int kMaxDim = 6;
  static constexpr std::size_t kMaxSize = std::size_t{1} << kMaxDim;

  // Zero multivector of G_dim.
  explicit Multivector(int dim);

  static Multivector scalar(int dim, double value);
  // e_index, 1-based.
  static Multivector basis_vector(int dim, int index);
  static Multivector blade(int dim, unsigned mask, double coeff = 1.0);
  static Multivector vector(std::span<const double> components);
  static Multivector vector(std::initializer_list<double> components);
  static Multivector pseudoscalar(int dim);

  int dim() const { return dim_; }
  std::size_t size() const { return std::size_t{1} << dim_; }

  double operator[](unsigned mask) const { return coeffs_[mask]; }
  double& operator[](unsigned mask) { return coeffs_[mask]; }

  std::span<const double> coeffs() const { return {coeffs_.data(), size()}; }
  std::span<double> coeffs() { return {coeffs_.data(), size()}; }

  double scalar_part() const { return coeffs_[0]; }
  bool is_finite() const;

  Multivector& operator+=(const Multivector& o);
  Multivector& operator-=(const Multivector& o);
  Multivector& operator*=(double k);

  friend Multivector operator+(Multivector a, const Multivector& b) { return a += b; }
  friend Multivector operator-(Multivector a, const Multivector& b) { return a -= b; }
  friend Multivector operator-(Multivector a) { return a *= -1.0; }
  friend Multivector operator*(Multivector a, double k) { return a *= k; }
  friend Multivector operator*(double k, Multivector a) { return a *= k; }
  friend Multivector operator/(Multivector a, double k) { return a *= 1.0 / k; }

 private:
  int dim_;
  std::array<double, kMaxSize> coeffs_{};
};

int grade_of(unsigned mask);

// Sign of the geometric product of basis blades e_a e_b on a positive-definite
// metric; the resulting blade is e_{a xor b}.
int blade_product_sign(unsigned a, unsigned b);

Multivector geometric_product(const Multivector& a, const Multivector& b);
Multivector outer_product(const Multivector& a, const Multivector& b);

// Left contraction. For a vector e_j and blade e_A,
//   e_j . e_A = sum_k (-1)^(k-1) B(e_j, e_{i_k}) e_{A \ i_k}.
// A scalar contracted onto a blade of grade >= 1 gives 0; scalar . scalar is
// the ordinary product.
Multivector inner_product(const Multivector& a, const Multivector& b);

inline Multivector operator*(const Multivector& a, const Multivector& b) {
  return geometric_product(a, b);
}
inline Multivector operator^(const Multivector& a, const Multivector& b) {
  return outer_product(a, b);
}

// a I with I = e1 e2 ... em.
Multivector dual(const Multivector& a);
Multivector reverse(const Multivector& a);
Multivector grade_project(const Multivector& a, int grade);

// Euclidean norm of the coefficient vector, sqrt(<a reverse(a)>_0). On blades
// this is sqrt(A . reverse(A)).
double norm(const Multivector& a);

inline constexpr double kNormEpsilon = 1e-12;

// Throws NearZeroNorm when norm(a) <= kNormEpsilon.
Multivector normalize(const Multivector& a);

// Largest |coefficient| of a - b.
double max_abs_diff(const Multivector& a, const Multivector& b);

// True when every coefficient outside `grade` is within tol * max(1, norm(a)).
bool is_homogeneous(const Multivector& a, int grade, double tol = 1e-12);

// Name of a basis blade: "1", "e1", "e12", "e134", ...
std::string blade_name(unsigned mask);

std::string to_string(const Multivector& a, int precision = 6);

// Unit even-grade multivector acting on G_m by conjugation R a reverse(R).
class Rotor {
 public:
  static constexpr double kTolerance = 1e-12;

  static Rotor identity(int dim);
  // Checks that mv is even and that mv reverse(mv) = 1 within tol.
  static Rotor from_multivector(const Multivector& mv, double tol = kTolerance);
  // Drops odd-grade parts, rescales to unit norm.
  static Rotor normalized(const Multivector& mv);

  int dim() const { return mv_.dim(); }
  const Multivector& mv() const { return mv_; }
  Rotor reverse() const;

  friend Rotor operator*(const Rotor& a, const Rotor& b);

 private:
  explicit Rotor(Multivector mv) : mv_(std::move(mv)) {}
  Multivector mv_;
};

// Largest |coefficient| of R reverse(R) - 1.
double unitality_error(const Multivector& r);

Multivector sandwich(const Rotor& r, const Multivector& a);

}  // namespace gasteer
