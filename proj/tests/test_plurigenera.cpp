#include <doctest.h>

#include "helpers.hpp"
#include "kod/plurigenera.hpp"

using namespace kod;
using namespace kod::test;

namespace {

const char* kToyTorus = R"({
  "name": "torus2",
  "dimension": 2,
  "coordinates": ["x", "y"],
  "periodic": {"x": "1", "y": "1"},
  "frame_vectors": [["1", "0"], ["0", "1"]],
  "coframe": [["1", "0"], ["0", "1"]]
})";

// exp(g) is invariant under every period and lattice shift: the change of g
// is 2 pi i times an integer.
bool lattice_invariant(const ExpSection& s, const ManifoldSpec& m) {
  auto multiple_of_2pi_i = [](const Poly& diff) {
    auto c = diff.constant();
    if (!c) return false;
    Scalar q = *c / (Scalar(2) * Scalar::pi() * Scalar::i());
    return q.is_rational() && q.as_rational().get_den() == 1;
  };
  for (const auto& [coord, period] : m.periodic) {
    Poly moved = s.exponent.substitute({{coord, Poly::var(coord) + Poly(Scalar(GaussRational(period)))}});
    if (!multiple_of_2pi_i(moved - s.exponent)) return false;
  }
  for (const auto& shift : m.lattice_shifts) {
    std::map<std::string, Poly> b;
    for (size_t k = 0; k < m.coordinates.size(); ++k) b[m.coordinates[k]] = shift.images[k];
    if (!multiple_of_2pi_i(s.exponent.substitute(b) - s.exponent)) return false;
  }
  return true;
}

}  // namespace

TEST_SUITE("plurigenera") {

TEST_CASE("section equation of N") {
  const auto& acs = builtin_acs("nilmanifold_N");
  SectionEquation eq = build_section_equation(acs);
  CHECK(eq.a[0].is_zero());
  CHECK(eq.a[1] == P("1/4*i"));
  // Xbar_1 = (e1 + i e3)/2 with e3 = d/dz + x d/dt
  CHECK(eq.coord_coeffs[0] == std::vector<Poly>{P("1/2"), P("0"), P("1/2*i"), P("1/2*i*x")});
  auto real = real_form(eq);
  REQUIRE(real.size() == 4);
  CHECK(to_string(real[0]) == "e1(u) - e3(v) = 0");
  CHECK(to_string(real[1]) == "e3(u) + e1(v) = 0");
  CHECK(to_string(real[2]) == "2*e2(u) - 2*e4(v) - m*v = 0");
  // derived from the complex form: the last row carries e4(u), not e4(v)
  CHECK(to_string(real[3]) == "2*e4(u) + 2*e2(v) + m*u = 0");
}

TEST_CASE("section equation of the flat torus") {
  SectionEquation eq = build_section_equation(builtin_acs("torus4"));
  for (const auto& a : eq.a) CHECK(a.is_zero());
}

TEST_CASE("Fourier system and determinant of N") {
  const auto& acs = builtin_acs("nilmanifold_N");
  FourierSystem sys = fourier_reduce(build_section_equation(acs), acs.manifold, true);
  CHECK(sys.x == "x");
  CHECK(sys.index == std::vector<std::string>{"a", "b", "c"});
  PolyMatrix alg = sys.algebraic();
  REQUIRE(alg.rows() == 2);
  REQUIRE(alg.cols() == 2);
  Poly A = P("a + b*x + 1/2*c*x^2");
  Poly two_i_pi = P("2*i*pi");
  CHECK(alg(0, 0) == two_i_pi * A);
  CHECK(alg(0, 1) == -(two_i_pi * P("c") + P("m")));
  CHECK(alg(1, 0) == two_i_pi * P("c") + P("m"));
  CHECK(alg(1, 1) == two_i_pi * A);
  // 2x2 determinant by hand, against the closed form
  Poly det = alg(0, 0) * alg(1, 1) - alg(0, 1) * alg(1, 0);
  Poly closed = P("-4*pi^2") * A * A + pow(P("m + 2*i*pi*c"), 2);
  CHECK(det == closed);
  REQUIRE(sys.forcing_polynomials().size() == 1);
  CHECK(sys.forcing_polynomials()[0] == closed);
  auto [re, im] = closed.real_imag();
  CHECK(im == P("4*pi*m*c"));
}

TEST_CASE("torus Fourier system is purely algebraic") {
  const auto& acs = builtin_acs("torus4");
  FourierSystem sys = fourier_reduce(build_section_equation(acs), acs.manifold, false);
  CHECK(sys.x.empty());
  for (const auto& row : sys.N)
    for (const auto& e : row) CHECK(e.is_zero());
  CaseNode tree = strategy_algebraic_forcing(sys, true);
  CHECK_FALSE(all_forced(tree));
  auto escaped = leaves(tree, CaseNode::Kind::Escape);
  REQUIRE(escaped.size() == 1);
  for (const char* v : {"a", "b", "c", "d"}) CHECK(escaped[0]->region.fixed.at(v) == 0);
}

TEST_CASE("case tree of N is uniform in m") {
  const auto& acs = builtin_acs("nilmanifold_N");
  SectionEquation eq = build_section_equation(acs);
  CaseNode real = strategy_algebraic_forcing(fourier_reduce(eq, acs.manifold, true), true);
  CHECK(all_forced(real));
  auto forced = leaves(real, CaseNode::Kind::Forced);
  REQUIRE(forced.size() == 2);
  // c != 0 through the imaginary part 4 pi m c, then c = 0 through m^2
  CHECK(forced[0]->region.nonzero.count("c"));
  CHECK(forced[0]->witness == P("4*c*m"));
  CHECK(forced[1]->region.fixed.at("c") == 0);
  CHECK(forced[1]->witness == P("m^2"));
  CHECK(all_forced(strategy_algebraic_forcing(fourier_reduce(eq, acs.manifold, false), true)));
  for (long m = 1; m <= 4; ++m) CHECK(all_forced(strategy_algebraic_forcing(fourier_reduce(eq, acs.manifold, true), false, m)));
}

TEST_CASE("N with m = 0 escapes at the zero index") {
  // m = 0 admits the constants, so forcing must fail exactly there
  const auto& acs = builtin_acs("nilmanifold_N");
  FourierSystem sys = fourier_reduce(build_section_equation(acs), acs.manifold, true);
  CaseNode tree = strategy_algebraic_forcing(sys, false, 0);
  CHECK_FALSE(all_forced(tree));
  bool zero_escapes = false;
  for (const auto* leaf : leaves(tree, CaseNode::Kind::Escape))
    zero_escapes = zero_escapes || leaf->region.contains({{"a", 0}, {"b", 0}, {"c", 0}});
  CHECK(zero_escapes);
}

TEST_CASE("maximum principle") {
  ManifoldSpec toy = parse_manifold(kToyTorus);
  PolyMatrix j = zeros<Poly>(2, 2);
  j(0, 1) = Poly(-1);
  j(1, 0) = Poly(1);
  AcsData t2 = make_acs(toy, j);
  auto r = strategy_max_principle(build_section_equation(t2), toy);
  CHECK(r.outcome == MaxPrincipleResult::Outcome::Constant);
  // Xbar = (V + iW)/2 with V = d/dx, W = d/dy: symbol V V^T + W W^T
  CHECK(r.symbol == identity<Poly>(2));

  const auto& n = builtin_acs("nilmanifold_N");
  auto rn = strategy_max_principle(build_section_equation(n), n.manifold);
  CHECK(rn.outcome == MaxPrincipleResult::Outcome::Unknown);
  CHECK(rn.pure_equations == std::vector<int>{0});
  // Xbar_1 involves only e1 and e3: no second derivatives in the e2 (x) direction
  for (int k = 0; k < 4; ++k) CHECK(rn.symbol(1, k).is_zero());

  const auto& torus = builtin_acs("torus4");
  CHECK(strategy_max_principle(build_section_equation(torus), torus.manifold).outcome ==
        MaxPrincipleResult::Outcome::Constant);
}

TEST_CASE("verdicts") {
  const auto& n = builtin_acs("nilmanifold_N");
  auto all = plurigenus(n, 0);
  CHECK(all.kind == VerdictKind::VanishAllM);
  CHECK(all.certified);
  for (long m = 1; m <= 3; ++m) {
    auto r = plurigenus(n, m);
    CHECK(r.kind == VerdictKind::ExactDim);
    CHECK(r.dim == 0);
  }
  const auto& torus = builtin_acs("torus4");
  for (long m = 1; m <= 5; ++m) {
    auto r = plurigenus(torus, m);
    CHECK(r.kind == VerdictKind::ExactDim);
    CHECK(r.dim == 1);
    CHECK(r.basis.size() == 1);
  }
  // Kodaira-Thurston at t = 0: P_m = 1 exactly when 4 divides m
  const auto& kt = builtin_acs("kodaira_thurston");
  auto periodic = plurigenus(kt, 0);
  CHECK(periodic.kind == VerdictKind::PeriodicDim);
  CHECK(periodic.period == 4);
  CHECK(periodic.counts == std::vector<int>{0, 0, 0, 1});
  for (long m = 1; m <= 8; ++m) {
    auto r = plurigenus(kt, m);
    CHECK(r.kind == VerdictKind::ExactDim);
    CHECK(r.dim == (m % 4 == 0 ? 1 : 0));
    CHECK(r.value_at(m) == periodic.value_at(m));
  }
}

TEST_CASE("bases satisfy the section equation exactly") {
  for (const char* name : {"torus4", "kodaira_thurston"}) {
    const auto& acs = builtin_acs(name);
    SectionEquation eq = build_section_equation(acs);
    for (long m : {4L, 8L}) {
      auto r = plurigenus(acs, m);
      REQUIRE_FALSE(r.basis.empty());
      for (const auto& s : r.basis) {
        for (int j = 0; j < eq.n; ++j) CHECK(eq.apply_exp(j, s.exponent, Poly(m)).is_zero());
        CHECK(lattice_invariant(s, acs.manifold));
      }
    }
  }
}

TEST_CASE("structure-only and non-constant structures") {
  // complex parallelizable: all equations are pure, the operator is elliptic
  // and the sections are the constants
  auto nak = plurigenus(builtin_acs("nakamura"), 2);
  CHECK(nak.kind == VerdictKind::ExactDim);
  CHECK(nak.dim == 1);
  PolyMatrix j = zeros<Poly>(4, 4);
  j(0, 0) = P("y");
  j(0, 1) = P("-1 - y^2");
  j(1, 0) = P("1");
  j(1, 1) = P("-y");
  j(2, 3) = P("-1");
  j(3, 2) = P("1");
  CHECK_THROWS_AS(make_acs(manifold("torus4"), j), UnsupportedError);
}

TEST_CASE("components and integer roots") {
  auto comps = components(P("i*pi*c*x + i*pi*b - c"), "x");
  // imaginary part first: coefficient of x^1 pi^1 and x^0 pi^1; real part x^0 pi^0
  CHECK(comps.at({0, 1, 1}) == P("c"));
  CHECK(comps.at({0, 0, 1}) == P("b"));
  CHECK(comps.at({1, 0, 0}) == P("-c"));
  CHECK(comps.size() == 3);
  CHECK(integer_roots(P("m^2 - 5*m + 6"), "m") == std::vector<Integer>{2, 3});
  CHECK(integer_roots(P("2*a^2 + 1"), "a").empty());
  CHECK(integer_roots(P("a^3"), "a") == std::vector<Integer>{0});
  CHECK(integer_roots(P("3*a + 1"), "a").empty());
}

TEST_CASE("regions") {
  Region r;
  r.nonzero.insert("a");
  r.excluded["b"] = {1, 2};
  r.not_all_zero.push_back({"c", "d"});
  CHECK(r.contains({{"a", 1}, {"b", 0}, {"c", 0}, {"d", 3}}));
  CHECK_FALSE(r.contains({{"a", 0}, {"b", 0}, {"c", 0}, {"d", 3}}));
  CHECK_FALSE(r.contains({{"a", 1}, {"b", 2}, {"c", 0}, {"d", 3}}));
  CHECK_FALSE(r.contains({{"a", 1}, {"b", 0}, {"c", 0}, {"d", 0}}));
}

}
