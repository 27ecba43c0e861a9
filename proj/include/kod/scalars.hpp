// Exact arithmetic in Q(i)(pi).
//
// GaussRational is an element of Q(i). PiPoly is a polynomial in the
// transcendental symbol pi with Q(i) coefficients, and Scalar is a reduced
// fraction of two PiPolys. Because pi is transcendental a Scalar is zero iff
// its numerator polynomial is zero, so every equality test here is exact.
#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "kod/errors.hpp"

namespace kod {

using Rational = mpq_class;
using Integer = mpz_class;

inline Rational make_rational(const Integer& p, const Integer& q) {
  Rational r(p, q);
  r.canonicalize();
  return r;
}

class GaussRational {
 public:
  GaussRational() = default;
  GaussRational(long v) : re_(v) {}  // NOLINT: implicit by design of a numeric type
  GaussRational(Rational re, Rational im = 0) : re_(std::move(re)), im_(std::move(im)) {}

  static GaussRational imaginary_unit() { return {0, 1}; }

  const Rational& re() const { return re_; }
  const Rational& im() const { return im_; }

  bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
  bool is_real() const { return sgn(im_) == 0; }
  GaussRational conj() const { return {re_, -im_}; }
  GaussRational inverse() const;

  GaussRational& operator+=(const GaussRational& o);
  GaussRational& operator-=(const GaussRational& o);
  GaussRational& operator*=(const GaussRational& o);
  GaussRational& operator/=(const GaussRational& o);

  friend GaussRational operator+(GaussRational a, const GaussRational& b) { return a += b; }
  friend GaussRational operator-(GaussRational a, const GaussRational& b) { return a -= b; }
  friend GaussRational operator*(GaussRational a, const GaussRational& b) { return a *= b; }
  friend GaussRational operator/(GaussRational a, const GaussRational& b) { return a /= b; }
  friend GaussRational operator-(const GaussRational& a) { return {-a.re_, -a.im_}; }
  friend bool operator==(const GaussRational& a, const GaussRational& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }

  std::complex<double> to_complex() const { return {re_.get_d(), im_.get_d()}; }

 private:
  Rational re_{0};
  Rational im_{0};
};

/// Polynomial in pi over Q(i); coefficient k multiplies pi^k. Never has
/// trailing zero coefficients, so the zero polynomial is the empty vector.
class PiPoly {
 public:
  PiPoly() = default;
  PiPoly(GaussRational c);  // NOLINT
  PiPoly(long v) : PiPoly(GaussRational(v)) {}  // NOLINT
  explicit PiPoly(std::vector<GaussRational> coeffs);

  static PiPoly pi() { return PiPoly(std::vector<GaussRational>{0, 1}); }

  bool is_zero() const { return c_.empty(); }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  const std::vector<GaussRational>& coeffs() const { return c_; }
  GaussRational coeff(int k) const { return k < static_cast<int>(c_.size()) ? c_[k] : GaussRational(); }
  const GaussRational& leading() const { return c_.back(); }
  bool is_one() const { return c_.size() == 1 && c_[0] == GaussRational(1); }

  PiPoly conj() const;
  PiPoly real_part() const;
  PiPoly imag_part() const;
  PiPoly scaled(const GaussRational& s) const;
  PiPoly monic() const;

  PiPoly& operator+=(const PiPoly& o);
  PiPoly& operator-=(const PiPoly& o);
  friend PiPoly operator+(PiPoly a, const PiPoly& b) { return a += b; }
  friend PiPoly operator-(PiPoly a, const PiPoly& b) { return a -= b; }
  friend PiPoly operator*(const PiPoly& a, const PiPoly& b);
  friend PiPoly operator-(const PiPoly& a) { return a.scaled(-1); }
  friend bool operator==(const PiPoly& a, const PiPoly& b) { return a.c_ == b.c_; }

  /// Euclidean division; divisor must be nonzero.
  static std::pair<PiPoly, PiPoly> divmod(const PiPoly& a, const PiPoly& b);
  static PiPoly gcd(PiPoly a, PiPoly b);

  std::complex<double> evaluate(double pi_value) const;

 private:
  void trim();
  std::vector<GaussRational> c_;
};

class Scalar {
 public:
  Scalar() : den_(1) {}
  Scalar(long v) : num_(v), den_(1) {}  // NOLINT
  Scalar(GaussRational v) : num_(std::move(v)), den_(1) {}  // NOLINT
  Scalar(PiPoly v) : num_(std::move(v)), den_(1) {}  // NOLINT
  Scalar(PiPoly num, PiPoly den);

  static Scalar pi() { return Scalar(PiPoly::pi()); }
  static Scalar i() { return Scalar(GaussRational::imaginary_unit()); }
  static Scalar rational(long p, long q) { return Scalar(GaussRational(make_rational(p, q))); }

  const PiPoly& num() const { return num_; }
  const PiPoly& den() const { return den_; }

  bool is_zero() const { return num_.is_zero(); }
  bool is_one() const { return num_.is_one() && den_.is_one(); }
  /// True when the value lies in Q(i), i.e. no pi dependence.
  bool is_gauss_rational() const { return num_.degree() <= 0 && den_.degree() == 0; }
  GaussRational as_gauss_rational() const;
  bool is_rational() const { return is_gauss_rational() && as_gauss_rational().is_real(); }
  Rational as_rational() const;
  bool is_real() const { return imag().is_zero(); }

  Scalar conj() const;
  Scalar real() const;
  Scalar imag() const;
  Scalar inverse() const;

  Scalar& operator+=(const Scalar& o);
  Scalar& operator-=(const Scalar& o);
  Scalar& operator*=(const Scalar& o);
  Scalar& operator/=(const Scalar& o);
  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
  friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }
  friend Scalar operator-(const Scalar& a) { return Scalar(-a.num_, a.den_, Raw{}); }
  friend bool operator==(const Scalar& a, const Scalar& b) { return a.num_ == b.num_ && a.den_ == b.den_; }
  friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }

  std::complex<double> to_complex() const;

 private:
  struct Raw {};
  Scalar(PiPoly num, PiPoly den, Raw) : num_(std::move(num)), den_(std::move(den)) {}
  void normalize();

  PiPoly num_;
  PiPoly den_;
};

Scalar pow(const Scalar& base, int exponent);

/// Rational enclosure lo < pi < hi with hi - lo < 2^-bits.
std::pair<Rational, Rational> pi_enclosure(unsigned bits);

/// Exact sign of a real Scalar (-1, 0, +1). Throws MathError if the value
/// has a nonzero imaginary part.
int sign(const Scalar& s);

/// Exact comparison of two real Scalars.
int compare(const Scalar& a, const Scalar& b);

/// If s = q * pi for a rational q, returns q.
bool is_pi_rational(const Scalar& s, Rational* quotient = nullptr);

std::string to_string(const GaussRational& g);
std::string to_string(const PiPoly& p);
std::string to_string(const Scalar& s);

/// True if the printed form of s is a single factor that needs no
/// parentheses when multiplied by something else.
bool is_atomic_factor(const Scalar& s);

}  // namespace kod
