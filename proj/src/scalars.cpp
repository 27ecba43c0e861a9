#include "kod/scalars.hpp"

#include <algorithm>
#include <sstream>

namespace kod {

// ---------------------------------------------------------------- Q(i)

GaussRational GaussRational::inverse() const {
  if (is_zero()) throw MathError("division by zero: 1 / 0");
  Rational n = re_ * re_ + im_ * im_;
  return {re_ / n, -im_ / n};
}

GaussRational& GaussRational::operator+=(const GaussRational& o) {
  re_ += o.re_;
  im_ += o.im_;
  return *this;
}

GaussRational& GaussRational::operator-=(const GaussRational& o) {
  re_ -= o.re_;
  im_ -= o.im_;
  return *this;
}

GaussRational& GaussRational::operator*=(const GaussRational& o) {
  if (is_real() && o.is_real()) {
    re_ *= o.re_;
    return *this;
  }
  Rational r = re_ * o.re_ - im_ * o.im_;
  Rational i = re_ * o.im_ + im_ * o.re_;
  re_ = std::move(r);
  im_ = std::move(i);
  return *this;
}

GaussRational& GaussRational::operator/=(const GaussRational& o) {
  if (o.is_zero()) throw MathError("division by zero: " + to_string(*this) + " / 0");
  if (o.is_real()) {
    re_ /= o.re_;
    im_ /= o.re_;
    return *this;
  }
  return *this *= o.inverse();
}

// ---------------------------------------------------------------- Q(i)[pi]

PiPoly::PiPoly(GaussRational c) {
  if (!c.is_zero()) c_.push_back(std::move(c));
}

PiPoly::PiPoly(std::vector<GaussRational> coeffs) : c_(std::move(coeffs)) { trim(); }

void PiPoly::trim() {
  while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

PiPoly PiPoly::conj() const {
  PiPoly r = *this;
  for (auto& c : r.c_) c = c.conj();
  return r;
}

PiPoly PiPoly::real_part() const {
  std::vector<GaussRational> c;
  c.reserve(c_.size());
  for (const auto& x : c_) c.emplace_back(x.re());
  return PiPoly(std::move(c));
}

PiPoly PiPoly::imag_part() const {
  std::vector<GaussRational> c;
  c.reserve(c_.size());
  for (const auto& x : c_) c.emplace_back(x.im());
  return PiPoly(std::move(c));
}

PiPoly PiPoly::scaled(const GaussRational& s) const {
  if (s.is_zero()) return {};
  PiPoly r = *this;
  for (auto& c : r.c_) c *= s;
  return r;
}

PiPoly PiPoly::monic() const {
  if (is_zero()) return *this;
  return scaled(leading().inverse());
}

PiPoly& PiPoly::operator+=(const PiPoly& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
  for (size_t k = 0; k < o.c_.size(); ++k) c_[k] += o.c_[k];
  trim();
  return *this;
}

PiPoly& PiPoly::operator-=(const PiPoly& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
  for (size_t k = 0; k < o.c_.size(); ++k) c_[k] -= o.c_[k];
  trim();
  return *this;
}

PiPoly operator*(const PiPoly& a, const PiPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<GaussRational> c(a.c_.size() + b.c_.size() - 1);
  for (size_t i = 0; i < a.c_.size(); ++i) {
    if (a.c_[i].is_zero()) continue;
    for (size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
  }
  return PiPoly(std::move(c));
}

std::pair<PiPoly, PiPoly> PiPoly::divmod(const PiPoly& a, const PiPoly& b) {
  if (b.is_zero()) throw MathError("division by zero: (" + to_string(a) + ") / 0");
  if (a.degree() < b.degree()) return {PiPoly(), a};
  std::vector<GaussRational> q(a.degree() - b.degree() + 1);
  std::vector<GaussRational> r = a.c_;
  GaussRational inv = b.leading().inverse();
  for (int k = a.degree() - b.degree(); k >= 0; --k) {
    GaussRational f = r[k + b.degree()] * inv;
    q[k] = f;
    if (f.is_zero()) continue;
    for (int j = 0; j <= b.degree(); ++j) r[k + j] -= f * b.c_[j];
  }
  return {PiPoly(std::move(q)), PiPoly(std::move(r))};
}

PiPoly PiPoly::gcd(PiPoly a, PiPoly b) {
  while (!b.is_zero()) {
    PiPoly r = divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

std::complex<double> PiPoly::evaluate(double pi_value) const {
  std::complex<double> acc = 0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * pi_value + it->to_complex();
  return acc;
}

// ---------------------------------------------------------------- Q(i)(pi)

Scalar::Scalar(PiPoly num, PiPoly den) : num_(std::move(num)), den_(std::move(den)) {
  if (den_.is_zero()) throw MathError("division by zero: (" + to_string(num_) + ") / 0");
  normalize();
}

void Scalar::normalize() {
  if (num_.is_zero()) {
    den_ = PiPoly(1);
    return;
  }
  if (den_.degree() > 0 && num_.degree() >= 0) {
    PiPoly g = PiPoly::gcd(num_, den_);
    if (g.degree() > 0) {
      num_ = PiPoly::divmod(num_, g).first;
      den_ = PiPoly::divmod(den_, g).first;
    }
  }
  if (!den_.is_one()) {
    GaussRational lead_inv = den_.leading().inverse();
    num_ = num_.scaled(lead_inv);
    den_ = den_.scaled(lead_inv);
  }
}

GaussRational Scalar::as_gauss_rational() const {
  if (!is_gauss_rational()) throw MathError("value depends on pi: " + to_string(*this));
  return num_.coeff(0);
}

Rational Scalar::as_rational() const {
  GaussRational g = as_gauss_rational();
  if (!g.is_real()) throw MathError("value is not real: " + to_string(*this));
  return g.re();
}

Scalar Scalar::conj() const { return Scalar(num_.conj(), den_.conj()); }

Scalar Scalar::real() const {
  if (den_.is_one()) return Scalar(num_.real_part());
  PiPoly norm = den_ * den_.conj();  // real-coefficient polynomial in pi
  PiPoly n = num_ * den_.conj();
  return Scalar(n.real_part(), norm);
}

Scalar Scalar::imag() const {
  if (den_.is_one()) return Scalar(num_.imag_part());
  PiPoly norm = den_ * den_.conj();
  PiPoly n = num_ * den_.conj();
  return Scalar(n.imag_part(), norm);
}

Scalar Scalar::inverse() const {
  if (is_zero()) throw MathError("division by zero: 1 / 0");
  return Scalar(den_, num_);
}

Scalar& Scalar::operator+=(const Scalar& o) {
  if (den_.is_one() && o.den_.is_one()) {
    num_ += o.num_;
    return *this;
  }
  if (den_ == o.den_) {
    num_ += o.num_;
    normalize();
    return *this;
  }
  num_ = num_ * o.den_ + o.num_ * den_;
  den_ = den_ * o.den_;
  normalize();
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) { return *this += -o; }

Scalar& Scalar::operator*=(const Scalar& o) {
  if (is_zero() || o.is_zero()) {
    *this = Scalar();
    return *this;
  }
  bool simple = den_.is_one() && o.den_.is_one();
  num_ = num_ * o.num_;
  if (simple) return *this;
  den_ = den_ * o.den_;
  normalize();
  return *this;
}

Scalar& Scalar::operator/=(const Scalar& o) {
  if (o.is_zero()) throw MathError("division by zero: (" + to_string(*this) + ") / (" + to_string(o) + ")");
  if (o.is_gauss_rational()) {
    num_ = num_.scaled(o.as_gauss_rational().inverse());
    return *this;
  }
  return *this *= o.inverse();
}

std::complex<double> Scalar::to_complex() const {
  constexpr double kPi = 3.14159265358979323846;
  return num_.evaluate(kPi) / den_.evaluate(kPi);
}

Scalar pow(const Scalar& base, int exponent) {
  if (exponent < 0) return pow(base.inverse(), -exponent);
  Scalar result(1);
  Scalar b = base;
  while (exponent > 0) {
    if (exponent & 1) result *= b;
    exponent >>= 1;
    if (exponent) b *= b;
  }
  return result;
}

// ---------------------------------------------------------------- sign of real values

namespace {

// Bounds on arctan(1/x) from the alternating Taylor series, good to 2^-bits.
std::pair<Rational, Rational> arctan_inv(long x, unsigned bits) {
  Rational eps(1);
  eps /= Rational(Integer(1) << bits);
  Rational sum = 0;
  Integer xpow = x;  // x^(2n+1)
  Integer x2 = Integer(x) * x;
  for (long n = 0;; ++n) {
    Rational term(1);
    term /= Rational(Integer(2 * n + 1) * xpow);
    if (term < eps) {
      // the remainder of an alternating decreasing series is bounded by the next term
      if (n % 2 == 0) return {sum, sum + term};
      return {sum - term, sum};
    }
    if (n % 2 == 0) sum += term;
    else sum -= term;
    xpow *= x2;
  }
}

// Interval image of a real-coefficient polynomial at pi in [lo, hi], lo > 0.
std::pair<Rational, Rational> interval_eval(const PiPoly& p, const Rational& lo, const Rational& hi) {
  Rational a = 0, b = 0;
  Rational plo = 1, phi = 1;
  for (int k = 0; k <= p.degree(); ++k) {
    const Rational c = p.coeff(k).re();
    if (sgn(c) > 0) {
      a += c * plo;
      b += c * phi;
    } else if (sgn(c) < 0) {
      a += c * phi;
      b += c * plo;
    }
    plo *= lo;
    phi *= hi;
  }
  return {a, b};
}

}  // namespace

std::pair<Rational, Rational> pi_enclosure(unsigned bits) {
  // Machin: pi = 16 atan(1/5) - 4 atan(1/239)
  auto a = arctan_inv(5, bits + 6);
  auto b = arctan_inv(239, bits + 6);
  return {16 * a.first - 4 * b.second, 16 * a.second - 4 * b.first};
}

int sign(const Scalar& s) {
  if (s.is_zero()) return 0;
  if (!s.is_real()) throw MathError("sign of non-real value: " + to_string(s));
  // sign(num/den) = sign(num * conj(den)) because den * conj(den) > 0.
  PiPoly p = (s.num() * s.den().conj()).real_part();
  if (p.degree() == 0) return sgn(p.coeff(0).re());
  for (unsigned bits = 64;; bits *= 2) {
    auto [lo, hi] = pi_enclosure(bits);
    auto [a, b] = interval_eval(p, lo, hi);
    if (sgn(a) > 0) return 1;
    if (sgn(b) < 0) return -1;
    // p(pi) != 0 by transcendence, so refinement terminates
    if (bits > (1u << 20)) throw InvariantError("sign refinement did not terminate");
  }
}

int compare(const Scalar& a, const Scalar& b) { return sign(a - b); }

bool is_pi_rational(const Scalar& s, Rational* quotient) {
  Scalar q = s / Scalar::pi();
  if (!q.is_rational()) return false;
  if (quotient) *quotient = q.as_rational();
  return true;
}

// ---------------------------------------------------------------- printing

namespace {

std::string rational_str(const Rational& r) { return r.get_str(); }

// Prints c * suffix where suffix is "i", "pi^k" or similar, dropping unit factors.
std::string coeff_times(const Rational& c, const std::string& suffix) {
  if (suffix.empty()) return rational_str(c);
  if (c == 1) return suffix;
  if (c == -1) return "-" + suffix;
  return rational_str(c) + "*" + suffix;
}

}  // namespace

std::string to_string(const GaussRational& g) {
  if (g.is_zero()) return "0";
  if (sgn(g.im()) == 0) return rational_str(g.re());
  if (sgn(g.re()) == 0) return coeff_times(g.im(), "i");
  std::string im = coeff_times(abs(g.im()), "i");
  return "(" + rational_str(g.re()) + (sgn(g.im()) < 0 ? " - " : " + ") + im + ")";
}

std::string to_string(const PiPoly& p) {
  if (p.is_zero()) return "0";
  std::ostringstream out;
  bool first = true;
  for (int k = p.degree(); k >= 0; --k) {
    const GaussRational& c = p.coeff(k);
    if (c.is_zero()) continue;
    std::string pw = k == 0 ? "" : (k == 1 ? "pi" : "pi^" + std::to_string(k));
    std::string term;
    bool negative = false;
    if (c.is_real()) {
      negative = sgn(c.re()) < 0;
      term = coeff_times(abs(c.re()), pw);
    } else if (sgn(c.re()) == 0) {
      negative = sgn(c.im()) < 0;
      std::string base = coeff_times(abs(c.im()), "i");
      term = pw.empty() ? base : base + "*" + pw;
    } else {
      term = pw.empty() ? to_string(c) : to_string(c) + "*" + pw;
    }
    if (first) out << (negative ? "-" : "") << term;
    else out << (negative ? " - " : " + ") << term;
    first = false;
  }
  return out.str();
}

std::string to_string(const Scalar& s) {
  if (s.den().is_one()) return to_string(s.num());
  auto wrap = [](const PiPoly& p) {
    std::string t = to_string(p);
    int terms = 0;
    for (const auto& c : p.coeffs()) terms += c.is_zero() ? 0 : 1;
    bool compound = terms > 1 || (terms == 1 && t.find('*') != std::string::npos) || t[0] == '-';
    return compound ? "(" + t + ")" : t;
  };
  return wrap(s.num()) + "/" + wrap(s.den());
}

bool is_atomic_factor(const Scalar& s) {
  if (!s.den().is_one()) return false;
  int terms = 0;
  for (const auto& c : s.num().coeffs()) {
    if (c.is_zero()) continue;
    ++terms;
    if (!c.is_real() && sgn(c.re()) != 0) return false;
  }
  return terms <= 1;
}

}  // namespace kod
