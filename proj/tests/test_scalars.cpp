#include <doctest.h>

#include "helpers.hpp"

using namespace kod;
using namespace kod::test;

TEST_SUITE("scalars") {

TEST_CASE("gaussian rational products") {
  Scalar q = Scalar::rational(1, 4) * Scalar::i();
  CHECK(q * q == Scalar::rational(-1, 16));
  CHECK(Scalar::pi() * Scalar::pi().inverse() == Scalar(1));
  CHECK(make_rational(2, 4) == make_rational(1, 2));
  CHECK_THROWS_AS(Scalar(1) / Scalar(0), MathError);
  try {
    (void)(Scalar::pi() / Scalar(0));
  } catch (const MathError& e) {
    CHECK(std::string(e.what()).find("pi") != std::string::npos);
  }
}

TEST_CASE("square of m + 2 i pi c") {
  Poly m = Poly::var("m"), c = Poly::var("c");
  Poly s = m + Scalar(2) * Scalar::i() * Scalar::pi() * c;
  Poly sq = s * s;
  CHECK(sq == P("m^2 - 4*pi^2*c^2 + 4*i*pi*c*m"));
  CHECK(sq.real_imag().second == P("4*pi*c*m"));
}

TEST_CASE("conjugation") {
  CHECK((Scalar::rational(1, 4) * Scalar::i()).conj() == Scalar::rational(-1, 4) * Scalar::i());
  CHECK(P("m + 2*i*pi*c").conj() == P("m - 2*i*pi*c"));
  std::mt19937_64 rng(7);
  for (int k = 0; k < 100; ++k) {
    Scalar s = random_scalar(rng);
    CHECK(s.conj().conj() == s);
    Poly p = random_poly(rng, {"a", "x", "m"}, 4, 3, true);
    CHECK(p.conj().conj() == p);
  }
}

TEST_CASE("real and imaginary parts of the Fourier determinant") {
  Poly det = P("-4*pi^2*(a + b*x + 1/2*c*x^2)^2 + (m + 2*i*pi*c)^2");
  auto [re, im] = det.real_imag();
  CHECK(im == P("4*pi*m*c"));
  CHECK(re + Scalar::i() * im == det);
  auto [re0, im0] = det.substitute({{"c", Poly(0)}}).real_imag();
  CHECK(im0.is_zero());
  CHECK(re0 == P("-4*pi^2*(a + b*x)^2 + m^2"));

  std::mt19937_64 rng(11);
  for (int k = 0; k < 100; ++k) {
    Poly p = random_poly(rng, {"a", "c", "x"}, 5, 3, true);
    auto [r, i] = p.real_imag();
    CHECK(r + Scalar::i() * i == p);
    for (const auto& [mono, coeff] : r.terms()) CHECK(coeff.is_real());
    for (const auto& [mono, coeff] : i.terms()) CHECK(coeff.is_real());
  }
}

TEST_CASE("substitution") {
  CHECK(P("a + b*x").substitute({{"a", Poly(1)}, {"b", Poly(0)}}) == Poly(1));
  Poly det = P("-4*pi^2*(a + b*x + 1/2*c*x^2)^2 + (m + 2*i*pi*c)^2");
  Poly at = det.substitute({{"c", Poly(0)}, {"m", Poly(1)}, {"a", Poly(0)}, {"b", Poly(1)}});
  // by hand: -4 pi^2 x^2 + 1
  Poly expected = Poly(-Scalar(4) * Scalar::pi() * Scalar::pi()) * Poly::var("x", 2) + Poly(1);
  CHECK(at == expected);
  CHECK(P("a + x").substitute({{"a", Poly(3)}}) == P("x + 3"));
  CHECK_THROWS_AS(P("x").substitute({{"pi", Poly(3)}}), MathError);
}

TEST_CASE("field axioms on random triples") {
  std::mt19937_64 rng(2024);
  for (int k = 0; k < 200; ++k) {
    Scalar a = random_scalar(rng), b = random_scalar(rng), c = random_scalar(rng);
    CHECK((a + b) + c == a + (b + c));
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
    CHECK(a + b == b + a);
    CHECK(a * b == b * a);
    CHECK(a - a == Scalar(0));
    if (!a.is_zero()) CHECK(a * a.inverse() == Scalar(1));
  }
}

TEST_CASE("transcendence of pi") {
  std::mt19937_64 rng(5);
  for (int k = 0; k < 100; ++k) {
    std::vector<GaussRational> coeffs;
    int deg = static_cast<int>(rng() % 5);
    for (int j = 0; j <= deg; ++j)
      coeffs.emplace_back(make_rational(static_cast<long>(rng() % 13) - 6, 1 + rng() % 4),
                          make_rational(static_cast<long>(rng() % 7) - 3, 1 + rng() % 4));
    PiPoly q(coeffs);
    CHECK(Scalar(q).is_zero() == q.is_zero());
  }
  CHECK_FALSE((Scalar::pi() * Scalar::pi() - Scalar(10)).is_zero());
}

TEST_CASE("exact signs and pi-rationality") {
  CHECK(sign(Scalar::pi() - Scalar::rational(355, 113)) < 0);
  CHECK(sign(Scalar::pi() - Scalar::rational(333, 106)) > 0);
  CHECK(sign(Scalar::pi() * Scalar::pi() - Scalar::rational(98696, 10000)) > 0);
  CHECK(sign(Scalar(0)) == 0);
  CHECK(sign(Scalar(1) / (Scalar::pi() - Scalar(3))) > 0);
  CHECK_THROWS_AS(sign(Scalar::i()), MathError);
  Rational q;
  CHECK(is_pi_rational(Scalar::pi() * Scalar::rational(3, 4), &q));
  CHECK(q == make_rational(3, 4));
  CHECK(is_pi_rational(Scalar(0)));
  CHECK_FALSE(is_pi_rational(Scalar::rational(1, 2)));
  CHECK_FALSE(is_pi_rational(Scalar::pi() + Scalar(1)));
}

TEST_CASE("printing round trips") {
  std::mt19937_64 rng(99);
  for (int k = 0; k < 200; ++k) {
    Scalar s = random_scalar(rng);
    CHECK(parse_scalar(to_string(s)) == s);
    Poly p = random_poly(rng, {"a", "b", "x", "m"}, 5, 3, true);
    CHECK(parse_polynomial(to_string(p)) == p);
  }
  CHECK(to_string(Scalar::rational(1, 4) * Scalar::i()) == "1/4*i");
  CHECK(to_string(P("x^2 + 2*x*y + a")) == "x^2 + 2*x*y + a");
}

TEST_CASE("deg-lex order") {
  // leading term first: higher total degree, then earlier symbol with larger exponent
  Poly p = P("b + a + a*b + a^2 + 1");
  std::vector<std::string> order;
  for (const auto& [m, c] : p.terms()) order.push_back(to_string(m));
  CHECK(order == std::vector<std::string>{"a^2", "a*b", "a", "b", "1"});
}

}
