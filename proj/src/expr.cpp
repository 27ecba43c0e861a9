#include "kod/expr.hpp"

#include <cctype>

namespace kod {

namespace {

class Parser {
 public:
  Parser(std::string_view text, const std::set<std::string>* declared)
      : text_(text), declared_(declared) {}

  RatFn parse() {
    skip_space();
    if (pos_ == text_.size()) fail("empty expression");
    RatFn r = expr();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return r;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { fail_at(pos_, what); }

  [[noreturn]] void fail_at(size_t at, const std::string& what) const {
    int line = 1, col = 1;
    for (size_t k = 0; k < at && k < text_.size(); ++k) {
      if (text_[k] == '\n') {
        ++line;
        col = 1;
      } else if ((static_cast<unsigned char>(text_[k]) & 0xC0) != 0x80) {
        ++col;
      }
    }
    throw ParseError(what + " at " + std::to_string(line) + ":" + std::to_string(col), line, col);
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  RatFn expr() {
    RatFn acc = term();
    for (;;) {
      if (accept('+')) acc += term();
      else if (accept('-')) acc -= term();
      else return acc;
    }
  }

  RatFn term() {
    RatFn acc = unary();
    for (;;) {
      if (accept('*')) {
        acc *= unary();
      } else if (accept('/')) {
        size_t at = pos_;
        RatFn d = unary();
        if (d.is_zero()) fail_at(at, "division by zero");
        acc /= d;
      } else {
        return acc;
      }
    }
  }

  RatFn unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return power();
  }

  RatFn power() {
    RatFn base = atom();
    if (!accept('^')) return base;
    bool negative = accept('-');
    skip_space();
    size_t at = pos_;
    if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
      fail("expected integer exponent");
    long e = 0;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      e = e * 10 + (text_[pos_++] - '0');
      if (e > 1000) fail_at(at, "exponent too large");
    }
    if (negative && base.is_zero()) fail_at(at, "division by zero");
    return pow(base, negative ? -static_cast<int>(e) : static_cast<int>(e));
  }

  RatFn atom() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of expression");
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      RatFn r = expr();
      if (!accept(')')) fail("expected ')'");
      return r;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      Integer v(std::string(text_.substr(start, pos_ - start)));
      return RatFn(Scalar(GaussRational(Rational(v))));
    }
    if (text_.substr(pos_, 2) == "\xCF\x80") {  // UTF-8 pi
      pos_ += 2;
      return RatFn(Scalar::pi());
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        ++pos_;
      std::string name(text_.substr(start, pos_ - start));
      if (name == "i") return RatFn(Scalar::i());
      if (name == "pi") return RatFn(Scalar::pi());
      if (declared_ && !declared_->count(name)) fail_at(start, "undeclared symbol '" + name + "'");
      return RatFn(Poly::var(name));
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::string_view text_;
  const std::set<std::string>* declared_;
  size_t pos_ = 0;
};

}  // namespace

RatFn parse_expression(std::string_view text, const std::set<std::string>* declared) {
  return Parser(text, declared).parse();
}

Poly parse_polynomial(std::string_view text, const std::set<std::string>* declared) {
  RatFn r = parse_expression(text, declared);
  if (!r.is_polynomial()) throw ParseError("expected a polynomial, got " + to_string(r), 1, 1);
  return r.as_polynomial();
}

Scalar parse_scalar(std::string_view text) {
  static const std::set<std::string> none;
  RatFn r = parse_expression(text, &none);
  return *r.as_polynomial().constant();
}

}  // namespace kod
