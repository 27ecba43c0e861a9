// Multivariate polynomials over Scalar (the coefficient ring of forms and
// vector fields) and fractions of them.
//
// Symbols are ordered alphabetically and monomials degree-lexicographically,
// so iteration order and printing are deterministic. All symbols stand for
// real quantities: coordinates, Fourier indices, the exponent m, the real
// and imaginary parts of a deformation parameter.
#pragma once

#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "kod/scalars.hpp"

namespace kod {

class Monomial {
 public:
  Monomial() = default;
  static Monomial var(const std::string& name, int exponent = 1);

  int degree() const { return degree_; }
  int exponent(const std::string& name) const;
  bool is_one() const { return factors_.empty(); }
  const std::vector<std::pair<std::string, int>>& factors() const { return factors_; }

  Monomial operator*(const Monomial& o) const;
  /// Removes the given symbol, returning its exponent.
  std::pair<Monomial, int> split(const std::string& name) const;

  friend bool operator==(const Monomial& a, const Monomial& b) { return a.factors_ == b.factors_; }
  /// Degree-lexicographic order with symbols sorted by name.
  friend bool deglex_less(const Monomial& a, const Monomial& b);

 private:
  std::vector<std::pair<std::string, int>> factors_;  // sorted by name, exponents > 0
  int degree_ = 0;
};

struct DegLexGreater {
  bool operator()(const Monomial& a, const Monomial& b) const { return deglex_less(b, a); }
};

/// Polynomial in named real symbols with Scalar coefficients.
class Poly {
 public:
  using Terms = std::map<Monomial, Scalar, DegLexGreater>;

  Poly() = default;
  Poly(long v) : Poly(Scalar(v)) {}  // NOLINT
  Poly(const Scalar& c);  // NOLINT
  static Poly var(const std::string& name, int exponent = 1);
  static Poly term(const Scalar& c, const Monomial& m);

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  /// The constant value, if the polynomial has no symbols.
  std::optional<Scalar> constant() const;
  int degree() const;
  int degree_in(const std::string& name) const;
  std::set<std::string> symbols() const;
  bool depends_on(const std::string& name) const;
  Scalar coefficient(const Monomial& m) const;

  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  Poly& operator*=(const Poly& o);
  Poly& operator*=(const Scalar& s);
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(const Poly& a, const Poly& b);
  friend Poly operator*(Poly a, const Scalar& s) { return a *= s; }
  friend Poly operator*(const Scalar& s, Poly a) { return a *= s; }
  friend Poly operator-(const Poly& a);
  friend bool operator==(const Poly& a, const Poly& b) { return a.terms_ == b.terms_; }
  friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }
  /// Division by a nonzero constant.
  Poly& operator/=(const Scalar& s);
  friend Poly operator/(Poly a, const Scalar& s) { return a /= s; }

  Poly derivative(const std::string& name) const;
  Poly conj() const;
  /// p = re + i*im where re and im have real coefficients.
  std::pair<Poly, Poly> real_imag() const;
  /// Replaces symbols by polynomials (simultaneously); unbound symbols remain.
  Poly substitute(const std::map<std::string, Poly>& bindings) const;
  /// Coefficients as a polynomial in one symbol: power -> coefficient.
  std::map<int, Poly> coefficients_in(const std::string& name) const;
  /// Least common multiple of the coefficient denominators (a monic pi-polynomial).
  PiPoly denominator_lcm() const;

  std::complex<double> evaluate(const std::map<std::string, double>& values) const;

 private:
  void add_term(const Monomial& m, const Scalar& c);
  Terms terms_;
};

Poly pow(const Poly& base, int exponent);

std::string to_string(const Monomial& m);
std::string to_string(const Poly& p);

/// Quotient of two polynomials with nonzero denominator. Only trivially
/// normalized (constant denominators are absorbed, the denominator's leading
/// coefficient is made 1); equality is decided by cross multiplication.
class RatFn {
 public:
  RatFn() : den_(1) {}
  RatFn(long v) : num_(v), den_(1) {}  // NOLINT
  RatFn(const Scalar& c) : num_(c), den_(1) {}  // NOLINT
  RatFn(Poly p) : num_(std::move(p)), den_(1) {}  // NOLINT
  RatFn(Poly num, Poly den);

  const Poly& num() const { return num_; }
  const Poly& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_polynomial() const { return den_.is_constant(); }
  Poly as_polynomial() const;

  RatFn& operator+=(const RatFn& o);
  RatFn& operator-=(const RatFn& o);
  RatFn& operator*=(const RatFn& o);
  RatFn& operator/=(const RatFn& o);
  friend RatFn operator+(RatFn a, const RatFn& b) { return a += b; }
  friend RatFn operator-(RatFn a, const RatFn& b) { return a -= b; }
  friend RatFn operator*(RatFn a, const RatFn& b) { return a *= b; }
  friend RatFn operator/(RatFn a, const RatFn& b) { return a /= b; }
  friend RatFn operator-(const RatFn& a) { return RatFn(-a.num_, a.den_); }
  friend bool operator==(const RatFn& a, const RatFn& b) { return (a.num_ * b.den_ - b.num_ * a.den_).is_zero(); }
  friend bool operator!=(const RatFn& a, const RatFn& b) { return !(a == b); }

  RatFn substitute(const std::map<std::string, Poly>& bindings) const;

 private:
  void normalize();
  Poly num_;
  Poly den_;
};

RatFn pow(const RatFn& base, int exponent);
std::string to_string(const RatFn& r);

inline std::ostream& operator<<(std::ostream& o, const Scalar& s) { return o << to_string(s); }
inline std::ostream& operator<<(std::ostream& o, const Poly& p) { return o << to_string(p); }
inline std::ostream& operator<<(std::ostream& o, const RatFn& r) { return o << to_string(r); }

inline bool is_zero(const Scalar& s) { return s.is_zero(); }
inline bool is_zero(const Poly& p) { return p.is_zero(); }
inline bool is_zero(const RatFn& r) { return r.is_zero(); }

}  // namespace kod
