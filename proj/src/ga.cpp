#include "gasteer/ga.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>

#include "gasteer/errors.hpp"

namespace gasteer {

namespace {

void check_dim(int dim) {
  if (dim < 1 || dim > Multivector::kMaxDim) {
    throw DimensionMismatch("multivector dimension must be in [1, 6], got " + std::to_string(dim));
  }
}

void check_same_dim(const Multivector& a, const Multivector& b) {
  if (a.dim() != b.dim()) {
    throw DimensionMismatch("operands live in G_" + std::to_string(a.dim()) + " and G_" +
                            std::to_string(b.dim()));
  }
}

Multivector checked(Multivector r, const char* op) {
  if (!r.is_finite()) throw NonFiniteValue(std::string(op) + " produced a non-finite coefficient");
  return r;
}

// Accumulate sum over basis pairs accepted by `keep` of sign * a_i * b_j into
// blade i xor j.
template <typename Keep>
Multivector bilinear(const Multivector& a, const Multivector& b, Keep keep) {
  check_same_dim(a, b);
  Multivector r(a.dim());
  const auto n = static_cast<unsigned>(a.size());
  for (unsigned i = 0; i < n; ++i) {
    const double ai = a[i];
    if (ai == 0.0) continue;
    for (unsigned j = 0; j < n; ++j) {
      const double bj = b[j];
      if (bj == 0.0 || !keep(i, j)) continue;
      r[i ^ j] += blade_product_sign(i, j) * ai * bj;
    }
  }
  return r;
}

}  // namespace

Multivector::Multivector(int dim) : dim_(dim) { check_dim(dim); }

Multivector Multivector::scalar(int dim, double value) {
  Multivector r(dim);
  r[0] = value;
  return r;
}

Multivector Multivector::basis_vector(int dim, int index) {
  if (index < 1 || index > dim) {
    throw DimensionMismatch("basis vector e" + std::to_string(index) + " not in G_" +
                            std::to_string(dim));
  }
  return blade(dim, 1u << (index - 1));
}

Multivector Multivector::blade(int dim, unsigned mask, double coeff) {
  Multivector r(dim);
  if (mask >= r.size()) throw DimensionMismatch("blade mask out of range for G_" + std::to_string(dim));
  r[mask] = coeff;
  return r;
}

Multivector Multivector::vector(std::span<const double> components) {
  Multivector r(static_cast<int>(components.size()));
  for (std::size_t i = 0; i < components.size(); ++i) r[1u << i] = components[i];
  return r;
}

Multivector Multivector::vector(std::initializer_list<double> components) {
  return vector(std::span<const double>(components.begin(), components.size()));
}

Multivector Multivector::pseudoscalar(int dim) {
  Multivector r(dim);
  r[static_cast<unsigned>(r.size() - 1)] = 1.0;
  return r;
}

bool Multivector::is_finite() const {
  return std::all_of(coeffs().begin(), coeffs().end(), [](double c) { return std::isfinite(c); });
}

Multivector& Multivector::operator+=(const Multivector& o) {
  check_same_dim(*this, o);
  for (std::size_t i = 0; i < size(); ++i) coeffs_[i] += o.coeffs_[i];
  return *this;
}

Multivector& Multivector::operator-=(const Multivector& o) {
  check_same_dim(*this, o);
  for (std::size_t i = 0; i < size(); ++i) coeffs_[i] -= o.coeffs_[i];
  return *this;
}

Multivector& Multivector::operator*=(double k) {
  for (std::size_t i = 0; i < size(); ++i) coeffs_[i] *= k;
  return *this;
}

int grade_of(unsigned mask) { return std::popcount(mask); }

int blade_product_sign(unsigned a, unsigned b) {
  // Count transpositions needed to move each factor of b past the factors of
  // a with a larger index.
  int swaps = 0;
  for (a >>= 1; a != 0; a >>= 1) swaps += std::popcount(a & b);
  return (swaps & 1) ? -1 : 1;
}

Multivector geometric_product(const Multivector& a, const Multivector& b) {
  return checked(bilinear(a, b, [](unsigned, unsigned) { return true; }), "geometric product");
}

Multivector outer_product(const Multivector& a, const Multivector& b) {
  return checked(bilinear(a, b, [](unsigned i, unsigned j) { return (i & j) == 0; }),
                 "outer product");
}

Multivector inner_product(const Multivector& a, const Multivector& b) {
  return checked(bilinear(a, b,
                          [](unsigned i, unsigned j) {
                            if (i == 0) return j == 0;
                            return (i & j) == i;
                          }),
                 "inner product");
}

Multivector dual(const Multivector& a) {
  return geometric_product(a, Multivector::pseudoscalar(a.dim()));
}

Multivector reverse(const Multivector& a) {
  Multivector r = a;
  for (unsigned i = 0; i < r.size(); ++i) {
    const int g = grade_of(i);
    if ((g * (g - 1) / 2) % 2 == 1) r[i] = -r[i];
  }
  return r;
}

Multivector grade_project(const Multivector& a, int grade) {
  if (grade < 0 || grade > a.dim()) {
    throw GradeOutOfRange("grade " + std::to_string(grade) + " outside [0, " +
                          std::to_string(a.dim()) + "]");
  }
  Multivector r(a.dim());
  for (unsigned i = 0; i < r.size(); ++i) {
    if (grade_of(i) == grade) r[i] = a[i];
  }
  return r;
}

double norm(const Multivector& a) {
  double s = 0.0;
  for (double c : a.coeffs()) s += c * c;
  return std::sqrt(s);
}

Multivector normalize(const Multivector& a) {
  const double n = norm(a);
  if (!(n > kNormEpsilon)) {
    throw NearZeroNorm("cannot normalize multivector of norm " + std::to_string(n));
  }
  return a / n;
}

double max_abs_diff(const Multivector& a, const Multivector& b) {
  check_same_dim(a, b);
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.coeffs()[i] - b.coeffs()[i]));
  return m;
}

bool is_homogeneous(const Multivector& a, int grade, double tol) {
  const double scale = std::max(1.0, norm(a));
  for (unsigned i = 0; i < a.size(); ++i) {
    if (grade_of(i) != grade && std::abs(a[i]) > tol * scale) return false;
  }
  return true;
}

std::string blade_name(unsigned mask) {
  if (mask == 0) return "1";
  std::string s = "e";
  for (int i = 0; mask != 0; ++i, mask >>= 1) {
    if (mask & 1u) s += std::to_string(i + 1);
  }
  return s;
}

std::string to_string(const Multivector& a, int precision) {
  std::ostringstream os;
  os.precision(precision);
  bool first = true;
  for (unsigned i = 0; i < a.size(); ++i) {
    if (a[i] == 0.0) continue;
    if (!first) os << (a[i] < 0 ? " - " : " + ");
    else if (a[i] < 0) os << "-";
    os << std::abs(a[i]);
    if (i != 0) os << "*" << blade_name(i);
    first = false;
  }
  if (first) os << "0";
  return os.str();
}

Rotor Rotor::identity(int dim) { return Rotor(Multivector::scalar(dim, 1.0)); }

double unitality_error(const Multivector& r) {
  return max_abs_diff(geometric_product(r, gasteer::reverse(r)), Multivector::scalar(r.dim(), 1.0));
}

Rotor Rotor::from_multivector(const Multivector& mv, double tol) {
  for (unsigned i = 0; i < mv.size(); ++i) {
    if (grade_of(i) % 2 == 1 && std::abs(mv[i]) > tol) {
      throw InvalidRotor("rotor has odd-grade coefficient on " + blade_name(i));
    }
  }
  const double err = unitality_error(mv);
  if (!(err <= tol)) {
    throw InvalidRotor("R reverse(R) deviates from 1 by " + std::to_string(err));
  }
  return Rotor(mv);
}

Rotor Rotor::normalized(const Multivector& mv) {
  Multivector even(mv.dim());
  for (unsigned i = 0; i < mv.size(); ++i) {
    if (grade_of(i) % 2 == 0) even[i] = mv[i];
  }
  return Rotor(normalize(even));
}

Rotor Rotor::reverse() const { return Rotor(gasteer::reverse(mv_)); }

Rotor operator*(const Rotor& a, const Rotor& b) { return Rotor(geometric_product(a.mv_, b.mv_)); }

Multivector sandwich(const Rotor& r, const Multivector& a) {
  return geometric_product(geometric_product(r.mv(), a), gasteer::reverse(r.mv()));
}

}  // namespace gasteer
