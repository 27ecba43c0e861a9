#include <doctest.h>

#include "helpers.hpp"

using namespace kod;
using namespace kod::test;

namespace {

PolyMatrix poly_matrix(std::initializer_list<std::initializer_list<const char*>> rows) {
  PolyMatrix m(rows.size(), rows.begin()->size());
  int i = 0;
  for (const auto& r : rows) {
    int j = 0;
    for (const char* e : r) m(i, j++) = P(e);
    ++i;
  }
  return m;
}

/// Random J = A J0 A^-1 with A a random unimodular-ish constant matrix.
PolyMatrix random_conjugate_structure(std::mt19937_64& rng, int dim) {
  PolyMatrix j0 = zeros<Poly>(dim, dim);
  for (int k = 0; k < dim; k += 2) {
    j0(k + 1, k) = Poly(1);
    j0(k, k + 1) = Poly(-1);
  }
  for (;;) {
    ScalarMatrix a(dim, dim);
    for (int r = 0; r < dim; ++r)
      for (int c = 0; c < dim; ++c) a(r, c) = Scalar(static_cast<long>(rng() % 5) - 2);
    if (determinant(a).is_zero()) continue;
    PolyMatrix ap = convert<Poly>(a), ai = convert<Poly>(inverse(a));
    return mul<Poly>(mul<Poly>(ap, j0), ai);
  }
}

}  // namespace

TEST_SUITE("acs") {

TEST_CASE("validation of J^2 = -I") {
  CHECK_NOTHROW(validate_square_minus_identity(builtin_acs("nilmanifold_N").J));
  CHECK_THROWS_AS(validate_square_minus_identity(identity<Poly>(4)), ValidationError);
  RatMatrix kt(4, 4);
  const char* rows[4][4] = {{"0", "-1", "0", "0"}, {"1", "0", "0", "0"}, {"0", "0", "0", "-(t + pi)"}, {"0", "0", "1/(t + pi)", "0"}};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) kt(i, j) = parse_expression(rows[i][j]);
  CHECK_NOTHROW(validate_square_minus_identity(kt));
  try {
    validate_square_minus_identity(identity<Poly>(4));
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("(1,1)") != std::string::npos);
  }
  std::mt19937_64 rng(3);
  int checked = 0;
  for (int k = 0; k < 100; ++k) {
    PolyMatrix j = random_conjugate_structure(rng, 4);
    CHECK_NOTHROW(validate_square_minus_identity(j));
    PolyMatrix broken = j;
    int r = static_cast<int>(rng() % 4), c = static_cast<int>(rng() % 4);
    broken(r, c) += Poly(1);
    CHECK_THROWS_AS(validate_square_minus_identity(broken), ValidationError);
    ++checked;
  }
  CHECK(checked >= 100);
}

TEST_CASE("(1,0)-coframes") {
  const auto& n = builtin_acs("nilmanifold_N");
  CHECK(n.Q.topRows(2) == poly_matrix({{"1", "0", "i", "0"}, {"0", "1", "0", "i"}}));
  const auto& t = builtin_acs("torus4");
  CHECK(t.Q.topRows(2) == poly_matrix({{"1", "i", "0", "0"}, {"0", "0", "1", "i"}}));
  const auto& kt = builtin_acs("kodaira_thurston");
  CHECK(kt.Q.topRows(2) == poly_matrix({{"1", "i", "0", "0"}, {"0", "0", "1", "i*pi"}}));

  // every phi^k kills v + iJv and the coframe with its conjugate has full rank
  std::mt19937_64 rng(17);
  for (int k = 0; k < 30; ++k) {
    PolyMatrix j = random_conjugate_structure(rng, 4 + 2 * (k % 2));
    PolyMatrix phi = coframe10(j);
    PolyMatrix v = identity<Poly>(j.rows()) + Poly(Scalar::i()) * j;  // columns v + iJv
    CHECK(is_zero_matrix<Poly>(mul<Poly>(phi, v)));
    PolyMatrix q(j.rows(), j.rows());
    q.topRows(phi.rows()) = phi;
    q.bottomRows(phi.rows()) = conj(phi);
    ScalarMatrix qs(q.rows(), q.cols());
    for (int r = 0; r < q.rows(); ++r)
      for (int c = 0; c < q.cols(); ++c) qs(r, c) = *q(r, c).constant();
    CHECK(rank(qs) == j.rows());
  }
}

TEST_CASE("alpha") {
  const auto& n = builtin_acs("nilmanifold_N");
  CHECK(n.alpha == std::vector<Poly>{Poly(0), Poly(Scalar::rational(1, 4) * Scalar::i())});
  CHECK(builtin_acs("torus4").alpha == std::vector<Poly>(2, Poly(0)));
  CHECK(builtin_acs("nakamura").alpha == std::vector<Poly>(3, Poly(0)));
  const auto& kt = builtin_acs("kodaira_thurston");
  CHECK(kt.alpha == std::vector<Poly>{Poly(Scalar::pi() / Scalar(4)), Poly(0)});
  for (const char* name : {"nilmanifold_N", "torus4", "nakamura", "kodaira_thurston"}) {
    const auto& a = builtin_acs(name);
    CHECK(delbar(a.psi, a) == wedge(a.alpha_form(), a.psi));
  }
}

TEST_CASE("integrability") {
  CHECK(is_integrable(builtin_acs("torus4")).integrable);
  CHECK(is_integrable(builtin_acs("nakamura")).integrable);
  auto r = is_integrable(builtin_acs("nilmanifold_N"));
  CHECK_FALSE(r.integrable);
  CHECK(r.witness_index == 0);
  CHECK_FALSE(r.witness.is_zero());
  CHECK_FALSE(is_integrable(builtin_acs("kodaira_thurston")).integrable);
  // cross-check: integrable iff d maps (1,0)-forms into (2,0)+(1,1)
  for (const char* name : {"nilmanifold_N", "torus4", "nakamura", "kodaira_thurston"}) {
    const auto& a = builtin_acs(name);
    bool only_low = true;
    for (int k = 0; k < a.n(); ++k)
      for (const auto& [pq, part] : bidegree_split(d_complex(a.phi(k), a), a))
        if (pq.first == 0) only_low = false;
    CHECK(only_low == is_integrable(a).integrable);
  }
}

TEST_CASE("pseudoholomorphic maps") {
  const auto& n = builtin_acs("nilmanifold_N");
  CHECK(pseudoholomorphic_check<Poly>(identity<Poly>(4), n.J, n.J));
  const auto& t = builtin_acs("torus4");
  PolyMatrix other = t.J;
  other.topLeftCorner(2, 2) *= Poly(-1);
  CHECK_FALSE(pseudoholomorphic_check<Poly>(identity<Poly>(4), t.J, other));
  CHECK(pseudoholomorphic_check<Poly>(zeros<Poly>(4, 4), t.J, other));
  CHECK_THROWS_AS(pseudoholomorphic_check<Poly>(zeros<Poly>(2, 3), t.J, t.J), MathError);
}

TEST_CASE("generalized Calabi-Yau conditions on the flat torus") {
  const auto& t = builtin_acs("torus4");
  Form sigma = form(4, BasisKind::Frame, 2, {{bits({1, 2}), "1"}, {bits({3, 4}), "1"}});
  Form eps = Form::monomial(4, BasisKind::Complex, bits({1, 2}), Poly(Scalar::rational(1, 2)));
  auto ok = gcy_check(t, sigma, eps);
  CHECK(ok.metric.verdict == Verdict::Pass);
  CHECK(ok.volume.verdict == Verdict::Pass);
  CHECK(ok.parallel.verdict == Verdict::Pass);
  auto scaled = gcy_check(t, sigma, eps * Poly(2));
  CHECK(scaled.metric.verdict == Verdict::Pass);
  CHECK(scaled.volume.verdict == Verdict::Fail);
  CHECK(scaled.parallel.verdict == Verdict::Pass);
  auto flipped = gcy_check(t, -sigma, eps);
  CHECK(flipped.metric.verdict == Verdict::Fail);
  CHECK(flipped.volume.verdict == Verdict::Pass);
  CHECK(flipped.parallel.verdict == Verdict::Pass);  // -g has the same connection
  CHECK_THROWS_AS(gcy_check(t, form(4, BasisKind::Frame, 2, {{bits({1, 2}), "1"}}), eps), ValidationError);
  // non-constant data is never guessed
  Form wobbly = form(4, BasisKind::Frame, 2, {{bits({1, 2}), "1"}, {bits({3, 4}), "1"}, {bits({1, 3}), "y"}});
  CHECK_THROWS_AS(gcy_check(t, wobbly, eps), ValidationError);  // not closed
}

TEST_CASE("generalized Calabi-Yau conditions on N") {
  // sigma = e1^e3 + e2^e4 is not closed on N (d(e2^e4) = e2^e1^e3)
  const auto& n = builtin_acs("nilmanifold_N");
  Form sigma = form(4, BasisKind::Frame, 2, {{bits({1, 3}), "1"}, {bits({2, 4}), "1"}});
  CHECK_THROWS_AS(gcy_check(n, sigma, n.psi), ValidationError);
}

}
