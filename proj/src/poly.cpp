#include "kod/poly.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace kod {

// ---------------------------------------------------------------- monomials

Monomial Monomial::var(const std::string& name, int exponent) {
  Monomial m;
  if (exponent > 0) {
    m.factors_.emplace_back(name, exponent);
    m.degree_ = exponent;
  }
  return m;
}

int Monomial::exponent(const std::string& name) const {
  for (const auto& [n, e] : factors_)
    if (n == name) return e;
  return 0;
}

Monomial Monomial::operator*(const Monomial& o) const {
  Monomial r;
  r.factors_.reserve(factors_.size() + o.factors_.size());
  auto a = factors_.begin();
  auto b = o.factors_.begin();
  while (a != factors_.end() || b != o.factors_.end()) {
    if (b == o.factors_.end() || (a != factors_.end() && a->first < b->first)) {
      r.factors_.push_back(*a++);
    } else if (a == factors_.end() || b->first < a->first) {
      r.factors_.push_back(*b++);
    } else {
      r.factors_.emplace_back(a->first, a->second + b->second);
      ++a;
      ++b;
    }
  }
  r.degree_ = degree_ + o.degree_;
  return r;
}

std::pair<Monomial, int> Monomial::split(const std::string& name) const {
  Monomial r;
  int e = 0;
  for (const auto& f : factors_) {
    if (f.first == name) e = f.second;
    else r.factors_.push_back(f);
  }
  r.degree_ = degree_ - e;
  return {r, e};
}

bool deglex_less(const Monomial& a, const Monomial& b) {
  if (a.degree_ != b.degree_) return a.degree_ < b.degree_;
  auto x = a.factors_.begin();
  auto y = b.factors_.begin();
  while (x != a.factors_.end() && y != b.factors_.end()) {
    if (x->first != y->first) return x->first > y->first;  // b has the earlier symbol
    if (x->second != y->second) return x->second < y->second;
    ++x;
    ++y;
  }
  return x == a.factors_.end() && y != b.factors_.end();
}

// ---------------------------------------------------------------- polynomials

Poly::Poly(const Scalar& c) {
  if (!c.is_zero()) terms_.emplace(Monomial(), c);
}

Poly Poly::var(const std::string& name, int exponent) {
  Poly p;
  p.terms_.emplace(Monomial::var(name, exponent), Scalar(1));
  return p;
}

Poly Poly::term(const Scalar& c, const Monomial& m) {
  Poly p;
  if (!c.is_zero()) p.terms_.emplace(m, c);
  return p;
}

bool Poly::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_one());
}

std::optional<Scalar> Poly::constant() const {
  if (terms_.empty()) return Scalar(0);
  if (is_constant()) return terms_.begin()->second;
  return std::nullopt;
}

int Poly::degree() const { return terms_.empty() ? -1 : terms_.begin()->first.degree(); }

int Poly::degree_in(const std::string& name) const {
  int d = terms_.empty() ? -1 : 0;
  for (const auto& [m, c] : terms_) d = std::max(d, m.exponent(name));
  return d;
}

std::set<std::string> Poly::symbols() const {
  std::set<std::string> s;
  for (const auto& [m, c] : terms_)
    for (const auto& f : m.factors()) s.insert(f.first);
  return s;
}

bool Poly::depends_on(const std::string& name) const {
  for (const auto& [m, c] : terms_)
    if (m.exponent(name) > 0) return true;
  return false;
}

Scalar Poly::coefficient(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? Scalar() : it->second;
}

void Poly::add_term(const Monomial& m, const Scalar& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (inserted) return;
  it->second += c;
  if (it->second.is_zero()) terms_.erase(it);
}

Poly& Poly::operator+=(const Poly& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

Poly& Poly::operator-=(const Poly& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

Poly operator*(const Poly& a, const Poly& b) {
  Poly r;
  for (const auto& [ma, ca] : a.terms_)
    for (const auto& [mb, cb] : b.terms_) r.add_term(ma * mb, ca * cb);
  return r;
}

Poly& Poly::operator*=(const Poly& o) { return *this = *this * o; }

Poly& Poly::operator*=(const Scalar& s) {
  if (s.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, c] : terms_) c *= s;
  return *this;
}

Poly& Poly::operator/=(const Scalar& s) {
  if (s.is_zero()) throw MathError("division by zero: (" + to_string(*this) + ") / 0");
  for (auto& [m, c] : terms_) c /= s;
  return *this;
}

Poly operator-(const Poly& a) {
  Poly r = a;
  for (auto& [m, c] : r.terms_) c = -c;
  return r;
}

Poly Poly::derivative(const std::string& name) const {
  Poly r;
  for (const auto& [m, c] : terms_) {
    auto [rest, e] = m.split(name);
    if (e == 0) continue;
    r.add_term(rest * Monomial::var(name, e - 1), c * Scalar(e));
  }
  return r;
}

Poly Poly::conj() const {
  Poly r;
  for (const auto& [m, c] : terms_) r.add_term(m, c.conj());
  return r;
}

std::pair<Poly, Poly> Poly::real_imag() const {
  Poly re, im;
  for (const auto& [m, c] : terms_) {
    if (c.is_real()) {
      re.add_term(m, c);
      continue;
    }
    re.add_term(m, c.real());
    im.add_term(m, c.imag());
  }
  return {re, im};
}

Poly Poly::substitute(const std::map<std::string, Poly>& bindings) const {
  if (bindings.count("pi") || bindings.count("i"))
    throw MathError("pi and i are constants and cannot be substituted");
  Poly r;
  for (const auto& [m, c] : terms_) {
    Monomial kept;
    Poly factor(c);
    for (const auto& [name, e] : m.factors()) {
      auto it = bindings.find(name);
      if (it == bindings.end()) kept = kept * Monomial::var(name, e);
      else factor *= pow(it->second, e);
    }
    r += factor * Poly::term(Scalar(1), kept);
  }
  return r;
}

std::map<int, Poly> Poly::coefficients_in(const std::string& name) const {
  std::map<int, Poly> out;
  for (const auto& [m, c] : terms_) {
    auto [rest, e] = m.split(name);
    out[e].add_term(rest, c);
  }
  for (auto it = out.begin(); it != out.end();) {
    if (it->second.is_zero()) it = out.erase(it);
    else ++it;
  }
  return out;
}

PiPoly Poly::denominator_lcm() const {
  PiPoly l(1);
  for (const auto& [m, c] : terms_) {
    if (c.den().is_one()) continue;
    PiPoly g = PiPoly::gcd(l, c.den());
    l = PiPoly::divmod(l * c.den(), g).first.monic();
  }
  return l;
}

std::complex<double> Poly::evaluate(const std::map<std::string, double>& values) const {
  std::complex<double> acc = 0;
  for (const auto& [m, c] : terms_) {
    std::complex<double> t = c.to_complex();
    for (const auto& [name, e] : m.factors()) {
      auto it = values.find(name);
      if (it == values.end()) throw MathError("no value for symbol '" + name + "'");
      t *= std::pow(it->second, e);
    }
    acc += t;
  }
  return acc;
}

Poly pow(const Poly& base, int exponent) {
  if (exponent < 0) throw MathError("negative power of a polynomial");
  Poly result(1);
  Poly b = base;
  while (exponent > 0) {
    if (exponent & 1) result *= b;
    exponent >>= 1;
    if (exponent) b *= b;
  }
  return result;
}

std::string to_string(const Monomial& m) {
  std::string s;
  for (const auto& [name, e] : m.factors()) {
    if (!s.empty()) s += "*";
    s += name;
    if (e != 1) s += "^" + std::to_string(e);
  }
  return s.empty() ? "1" : s;
}

std::string to_string(const Poly& p) {
  if (p.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [m, c] : p.terms()) {
    std::string term;
    if (m.is_one()) {
      term = to_string(c);
    } else if (c.is_one()) {
      term = to_string(m);
    } else if (c == Scalar(-1)) {
      term = "-" + to_string(m);
    } else if (is_atomic_factor(c)) {
      term = to_string(c) + "*" + to_string(m);
    } else {
      term = "(" + to_string(c) + ")*" + to_string(m);
    }
    if (first) {
      out = term;
    } else if (term[0] == '-') {
      out += " - " + term.substr(1);
    } else {
      out += " + " + term;
    }
    first = false;
  }
  return out;
}

// ---------------------------------------------------------------- fractions

RatFn::RatFn(Poly num, Poly den) : num_(std::move(num)), den_(std::move(den)) {
  if (den_.is_zero()) throw MathError("division by zero: (" + to_string(num_) + ") / 0");
  normalize();
}

void RatFn::normalize() {
  if (num_.is_zero()) {
    den_ = Poly(1);
    return;
  }
  if (auto c = den_.constant()) {
    num_ /= *c;
    den_ = Poly(1);
    return;
  }
  Scalar lead = den_.terms().begin()->second;
  if (!lead.is_one()) {
    num_ /= lead;
    den_ /= lead;
  }
  if (num_ == den_) {
    num_ = Poly(1);
    den_ = Poly(1);
  }
}

Poly RatFn::as_polynomial() const {
  if (!is_polynomial()) throw MathError("not a polynomial: " + to_string(*this));
  return num_;
}

RatFn& RatFn::operator+=(const RatFn& o) {
  if (den_ == o.den_) {
    num_ += o.num_;
  } else {
    num_ = num_ * o.den_ + o.num_ * den_;
    den_ = den_ * o.den_;
  }
  normalize();
  return *this;
}

RatFn& RatFn::operator-=(const RatFn& o) { return *this += -o; }

RatFn& RatFn::operator*=(const RatFn& o) {
  // cancel an identical factor across the product before multiplying out
  if (num_ == o.den_) {
    num_ = o.num_;
  } else if (o.num_ == den_) {
    den_ = o.den_;
  } else {
    num_ = num_ * o.num_;
    den_ = den_ * o.den_;
  }
  normalize();
  return *this;
}

RatFn& RatFn::operator/=(const RatFn& o) {
  if (o.is_zero()) throw MathError("division by zero: (" + to_string(*this) + ") / 0");
  return *this *= RatFn(o.den_, o.num_);
}

RatFn RatFn::substitute(const std::map<std::string, Poly>& bindings) const {
  return RatFn(num_.substitute(bindings), den_.substitute(bindings));
}

RatFn pow(const RatFn& base, int exponent) {
  if (exponent < 0) return pow(RatFn(base.den(), base.num()), -exponent);
  RatFn result(1);
  for (int k = 0; k < exponent; ++k) result *= base;
  return result;
}

std::string to_string(const RatFn& r) {
  if (r.is_polynomial()) return to_string(r.num());
  return "(" + to_string(r.num()) + ")/(" + to_string(r.den()) + ")";
}

}  // namespace kod
