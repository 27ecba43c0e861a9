#include <doctest.h>

#include "helpers.hpp"

using namespace kod;
using namespace kod::test;

TEST_SUITE("exterior") {

TEST_CASE("wedge signs") {
  Form e1 = Form::basis(4, BasisKind::Frame, 0), e2 = Form::basis(4, BasisKind::Frame, 1);
  CHECK(wedge(e1, e1).is_zero());
  CHECK(wedge(e1, e2) == -wedge(e2, e1));
  // (phi1 ^ phi2) ^ conj(phi2): bits 0,1 then 3 -> no transpositions
  Form p12 = Form::monomial(4, BasisKind::Complex, bits({1, 2}), Poly(1));
  Form pb2 = Form::basis(4, BasisKind::Complex, 3);
  CHECK(wedge(p12, pb2) == Form::monomial(4, BasisKind::Complex, bits({1, 2, 4}), Poly(1)));
  // conj(phi1) ^ phi2 = -(phi2 ^ conj(phi1)) in ascending order
  Form pb1 = Form::basis(4, BasisKind::Complex, 2), p2 = Form::basis(4, BasisKind::Complex, 1);
  CHECK(wedge(pb1, p2) == Form::monomial(4, BasisKind::Complex, bits({2, 3}), Poly(-1)));
  CHECK(wedge_sign(bits({3}), bits({1, 2})) == 1);
  CHECK(wedge_sign(bits({2}), bits({1, 3})) == -1);
  Form other = Form::basis(6, BasisKind::Frame, 0);
  CHECK_THROWS_AS(wedge(e1, other), MathError);
}

TEST_CASE("structure equations of N from coordinates") {
  const auto& n = manifold("nilmanifold_N");
  auto de = structure_equations(n);
  CHECK(de[0].is_zero());
  CHECK(de[1].is_zero());
  CHECK(de[2] == form(4, BasisKind::Frame, 2, {{bits({1, 2}), "-1"}}));
  CHECK(de[3] == form(4, BasisKind::Frame, 2, {{bits({1, 3}), "-1"}}));
}

TEST_CASE("flat torus coframe is closed") {
  const auto& t = manifold("torus4");
  for (const auto& f : structure_equations(t)) CHECK(f.is_zero());
}

TEST_CASE("Kodaira-Thurston structure equations") {
  const auto& kt = manifold("kodaira_thurston");
  auto de = structure_equations(kt);
  // e^4 = dz - x dy: de^4 = -dx ^ dy = -e^2 ^ e^3
  CHECK(de[3] == form(4, BasisKind::Frame, 2, {{bits({2, 3}), "-1"}}));
  for (int k = 0; k < 3; ++k) CHECK(de[k].is_zero());
}

TEST_CASE("frame and coframe duality and lattice invariance") {
  for (const char* name : {"torus4", "nilmanifold_N", "kodaira_thurston"}) {
    const auto& m = manifold(name);
    CHECK(is_zero_matrix<Poly>(PolyMatrix(mul<Poly>(m.coframe, m.frame.transpose()) - identity<Poly>(m.dimension))));
    for (const auto& s : m.lattice_shifts) CHECK_FALSE(first_difference<Poly>(pullback_coframe(m, s), m.coframe));
  }
}

TEST_CASE("d squares to zero") {
  std::mt19937_64 rng(31);
  int checked = 0;
  for (const char* name : {"nilmanifold_N", "kodaira_thurston", "torus4"}) {
    const auto& m = manifold(name);
    for (int k = 0; k < 40; ++k) {
      int degree = static_cast<int>(rng() % 4);
      Form a = random_form(rng, m, BasisKind::Frame, degree);
      CHECK(d(d(a, m), m).is_zero());
      ++checked;
    }
  }
  const auto& nak = manifold("nakamura");
  for (int k = 0; k < 40; ++k) {
    Form a = random_form(rng, nak, BasisKind::Frame, static_cast<int>(rng() % 5), true);
    CHECK(d(d(a, nak), nak).is_zero());
    ++checked;
  }
  CHECK(checked >= 100);
}

TEST_CASE("graded Leibniz rule") {
  std::mt19937_64 rng(37);
  int checked = 0;
  for (const char* name : {"nilmanifold_N", "kodaira_thurston"}) {
    const auto& m = manifold(name);
    for (int k = 0; k < 60; ++k) {
      int p = static_cast<int>(rng() % 3), q = static_cast<int>(rng() % 3);
      Form a = random_form(rng, m, BasisKind::Frame, p), b = random_form(rng, m, BasisKind::Frame, q);
      Form lhs = d(wedge(a, b), m);
      Form rhs = wedge(d(a, m), b) + (p % 2 ? -wedge(a, d(b, m)) : wedge(a, d(b, m)));
      CHECK(lhs == rhs);
      ++checked;
    }
  }
  CHECK(checked >= 100);
}

TEST_CASE("Nakamura structure equations are those of phi_2 = phi_1 ^ phi_2, phi_3 = -phi_1 ^ phi_3") {
  const auto& acs = builtin_acs("nakamura");
  Form d1 = d_complex(acs.phi(0), acs), d2 = d_complex(acs.phi(1), acs), d3 = d_complex(acs.phi(2), acs);
  CHECK(d1.is_zero());
  CHECK(d2 == wedge(acs.phi(0), acs.phi(1)));
  CHECK(d3 == -wedge(acs.phi(0), acs.phi(2)));
}

TEST_CASE("bidegree splitting on N") {
  const auto& acs = builtin_acs("nilmanifold_N");
  Form dphi1 = d_complex(acs.phi(0), acs);
  auto parts = bidegree_split(dphi1, acs);
  // -1/4 i phi1 ^ conj(phi2) + 1/4 i phi2 ^ conj(phi1)
  Form expected(4, BasisKind::Complex, 2);
  expected.add(bits({1, 4}), Poly(Scalar::rational(-1, 4) * Scalar::i()));
  expected.add(bits({2, 3}), Poly(Scalar::rational(1, 4) * Scalar::i()));
  CHECK(parts.at({1, 1}) == expected);
  auto one = bidegree_split(acs.phi(1), acs);
  CHECK(one.size() == 1);
  CHECK(one.begin()->first == std::make_pair(1, 0));

  std::mt19937_64 rng(41);
  for (int k = 0; k < 30; ++k) {
    Form a = random_form(rng, acs.manifold, BasisKind::Frame, static_cast<int>(rng() % 5));
    Form sum(4, BasisKind::Complex, a.degree());
    for (const auto& [pq, part] : bidegree_split(a, acs)) sum += part;
    CHECK(to_frame(sum, acs) == a);
  }
}

TEST_CASE("four components of d") {
  const auto& acs = builtin_acs("nilmanifold_N");
  Form expected(4, BasisKind::Complex, 2);
  expected.add(bits({1, 3}), Poly(Scalar::rational(1, 2)));
  CHECK(delbar(acs.phi(1), acs) == expected);
  // mubar(phi1) is the (0,2)-part of d phi1, derived by hand: -i/4 conj(phi1) ^ conj(phi2)
  Form mb(4, BasisKind::Complex, 2);
  mb.add(bits({3, 4}), Poly(Scalar::rational(-1, 4) * Scalar::i()));
  CHECK(mubar(acs.phi(0), acs) == mb);
  CHECK(mubar(acs.phi(0), acs) == bidegree_split(d_complex(acs.phi(0), acs), acs).at({0, 2}));
  const auto& torus = builtin_acs("torus4");
  for (int k = 0; k < 2; ++k) CHECK(mubar(torus.phi(k), torus).is_zero());
  CHECK_THROWS_AS(mu(acs.phi(0) + acs.phibar(0), acs), MathError);
}

TEST_CASE("bidegree shift table") {
  std::mt19937_64 rng(43);
  int checked = 0;
  for (const char* name : {"nilmanifold_N", "kodaira_thurston", "torus4"}) {
    const auto& acs = builtin_acs(name);
    const int n = acs.n();
    for (int k = 0; k < 40; ++k) {
      // random homogeneous (p, q)-form with polynomial coefficients
      int p = static_cast<int>(rng() % (n + 1)), q = static_cast<int>(rng() % (n + 1));
      Form a(2 * n, BasisKind::Complex, p + q);
      for (Mask mask = 0; mask < (Mask(1) << 2 * n); ++mask)
        if (bidegree(mask, n) == std::make_pair(p, q) && rng() % 2)
          a.add(mask, random_poly(rng, acs.manifold.coordinates, 2, 2));
      Form parts[4] = {mu(a, acs), del(a, acs), delbar(a, acs), mubar(a, acs)};
      std::pair<int, int> want[4] = {{p + 2, q - 1}, {p + 1, q}, {p, q + 1}, {p - 1, q + 2}};
      for (int j = 0; j < 4; ++j)
        for (const auto& [mask, c] : parts[j].terms()) CHECK(bidegree(mask, n) == want[j]);
      CHECK(parts[0] + parts[1] + parts[2] + parts[3] == d_complex(a, acs));
      ++checked;
    }
  }
  CHECK(checked >= 100);
}

}
