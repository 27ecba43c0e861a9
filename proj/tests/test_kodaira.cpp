#include <doctest.h>

#include <cmath>
#include <limits>

#include "helpers.hpp"
#include "kod/kodaira.hpp"

using namespace kod;
using namespace kod::test;

namespace {

PlurigenusReport exact_report(long m, long dim, bool certified = true) {
  PlurigenusReport r;
  r.m = m;
  r.kind = VerdictKind::ExactDim;
  r.dim = dim;
  r.certified = certified;
  return r;
}

std::vector<PlurigenusReport> table(long M, const std::function<long(long)>& P) {
  std::vector<PlurigenusReport> out;
  for (long m = 1; m <= M; ++m) out.push_back(exact_report(m, P(m)));
  return out;
}

}  // namespace

TEST_SUITE("kodaira") {

TEST_CASE("N is -inf with a certificate") {
  auto r = plurigenus(builtin_acs("nilmanifold_N"), 0);
  auto v = kod_from_reports({r});
  CHECK(v.kind == KodKind::NegInfinity);
  CHECK(v.certified);
  CHECK(to_string(v) == "kod = −∞ (certified)");
  CHECK(short_string(v) == "-inf");
}

TEST_CASE("torus and KT at t = 0 are 0 with a certificate") {
  for (const char* name : {"torus4", "kodaira_thurston"}) {
    auto v = kod_from_reports({plurigenus(builtin_acs(name), 0)});
    CHECK(v.kind == KodKind::Exact);
    CHECK(v.value == 0);
    CHECK(v.certified);
  }
}

TEST_CASE("symbolic reports") {
  PlurigenusReport per;
  per.kind = VerdictKind::PeriodicDim;
  per.period = 3;
  per.counts = {0, 0, 2};
  per.certified = true;
  auto v = kod_from_reports({per});
  CHECK(v.kind == KodKind::Exact);
  CHECK(v.value == 0);

  per.counts = {0, 0, 0};
  CHECK(kod_from_reports({per}).kind == KodKind::NegInfinity);

  // uncertified symbolic reports fall through to the concrete ones
  PlurigenusReport weak = exact_report(0, 0, false);
  auto rs = table(8, [](long) { return 1L; });
  rs.push_back(weak);
  auto w = kod_from_reports(rs);
  CHECK(w.kind == KodKind::Exact);
  CHECK_FALSE(w.certified);
}

TEST_CASE("growth from concrete tables") {
  auto one = kod_from_reports(table(32, [](long) { return 1L; }));
  CHECK(one.kind == KodKind::Exact);
  CHECK(one.value == 0);
  CHECK_FALSE(one.certified);
  CHECK(to_string(one) == "kod = 0 (from growth of P_m, m = 1..32)");

  auto lin = kod_from_reports(table(32, [](long m) { return m + 1; }));
  CHECK(lin.kind == KodKind::Exact);
  CHECK(lin.value == 1);

  auto zero = kod_from_reports(table(12, [](long) { return 0L; }));
  CHECK(zero.kind == KodKind::NegInfinity);
  CHECK_FALSE(zero.certified);
  CHECK(to_string(zero) == "kod = −∞ (evidence only, m = 1..12)");

  // sparse resonance: P_m = 1 on multiples of 4
  auto sparse = kod_from_reports(table(40, [](long m) { return m % 4 == 0 ? 1L : 0L; }));
  CHECK(sparse.kind == KodKind::Exact);
  CHECK(sparse.value == 0);
}

TEST_CASE("malformed report lists") {
  CHECK_THROWS_AS(kod_from_reports({}), ValidationError);
  CHECK_THROWS_AS(kod_from_reports({exact_report(1, 1), exact_report(3, 1)}), ValidationError);
  CHECK_THROWS_AS(kod_from_reports({exact_report(2, 1), exact_report(3, 1)}), ValidationError);
  CHECK_THROWS_AS(kod_from_reports({exact_report(1, 1), exact_report(1, 1)}), ValidationError);
  CHECK_THROWS_AS(kod_from_reports({exact_report(0, 0, false)}), ValidationError);
  CHECK_THROWS_AS(growth_exponent({{1, 0.0}, {2, 0.0}}), ValidationError);
  CHECK_THROWS_AS(growth_exponent({{0, 1.0}}), ValidationError);
}

TEST_CASE("bounds enter as lower bounds") {
  auto rs = table(16, [](long m) { return m; });
  rs[3].kind = VerdictKind::Bounds;
  rs[3].lower = 4;
  rs[3].upper = 6;
  auto v = kod_from_reports(rs);
  CHECK(v.kind == KodKind::Exact);
  CHECK(v.value == 1);
  CHECK(v.rationale.find("lower bounds") != std::string::npos);
}

TEST_CASE("growth recovers the exponent of c m^k + lower order") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> coeff(0.2, 5.0), low(0.0, 3.0);
  int instances = 0;
  for (int k = 0; k <= 4; ++k) {
    for (int rep = 0; rep < 25; ++rep, ++instances) {
      double c = coeff(rng), b = c * low(rng);
      std::map<long, double> vals;
      for (long m = 1; m <= 64; ++m)
        vals[m] = std::max(1.0, std::round(c * std::pow(m, k) + b * (k > 0 ? std::pow(m, k - 1) : 0.0)));
      auto g = growth_exponent(vals);
      INFO("k = " << k << " c = " << c << " exponent = " << g.exponent);
      REQUIRE(g.snapped.has_value());
      CHECK(*g.snapped == k);
    }
  }
  CHECK(instances >= 100);
}

TEST_CASE("growth ignores bounded oscillation") {
  // P_m alternating between c m^k and 2 c m^k; a plain fit over short tail
  // windows overshoots by about 0.36 here
  for (int k = 0; k <= 3; ++k) {
    std::map<long, double> vals;
    for (long m = 1; m <= 64; ++m) vals[m] = std::round(1.5 * std::pow(m, k) * (m % 2 ? 1.0 : 2.0));
    auto g = growth_exponent(vals);
    INFO("k = " << k << " exponent = " << g.exponent);
    REQUIRE(g.snapped.has_value());
    CHECK(*g.snapped == k);
  }
}

TEST_CASE("growth is scale invariant") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> scale(0.5, 1000.0);
  for (int rep = 0; rep < 100; ++rep) {
    std::map<long, double> a, b;
    double s = scale(rng);
    for (long m = 1; m <= 40; ++m) {
      a[m] = m * m + 3.0;
      b[m] = s * a[m];
    }
    CHECK(growth_exponent(a).exponent == doctest::Approx(growth_exponent(b).exponent).epsilon(1e-9));
  }
}

TEST_CASE("usc on constant tables has no violations") {
  std::vector<UscRow> rows;
  std::vector<Scalar> pts;
  for (int k = 1; k <= 6; ++k) {
    Scalar t = Scalar::rational(1, 1L << k);
    pts.push_back(t);
    rows.push_back({t, {{1, 1}, {2, 1}}, 0.0});
  }
  rows.push_back({Scalar(0), {{1, 1}, {2, 1}}, 0.0});
  CHECK(usc_table_check(rows, {{Scalar(0), pts}}).empty());
}

TEST_CASE("usc flags a jump down at the limit") {
  std::vector<UscRow> rows;
  std::vector<Scalar> pts;
  const double ninf = -std::numeric_limits<double>::infinity();
  for (int k = 1; k <= 4; ++k) {
    Scalar t = Scalar::rational(1, k + 1);
    pts.push_back(t);
    // only the tail (last two) matters
    rows.push_back({t, {{1, k >= 3 ? 1L : 0L}}, k >= 3 ? 0.0 : ninf});
  }
  rows.push_back({Scalar(0), {{1, 0}}, ninf});
  auto v = usc_table_check(rows, {{Scalar(0), pts}});
  REQUIRE(v.size() == 2);
  CHECK(v[0].m == 1);
  CHECK(v[0].at_limit == 0);
  CHECK(v[0].eventual == 1);
  CHECK(v[1].m == 0);
  CHECK(v[1].detail == "kod(0) = -inf but kod = 0 along the approach");

  // early points above the limit value do not count
  for (auto& r : rows)
    if (r.t == pts[2] || r.t == pts[3]) r.P[1] = 0, r.kod = ninf;
  CHECK(usc_table_check(rows, {{Scalar(0), pts}}).empty());
}

TEST_CASE("usc rejects sequences that do not approach") {
  std::vector<UscRow> rows = {{Scalar(0), {{1, 0}}, {}}, {Scalar(1), {{1, 0}}, {}}, {S("1/2"), {{1, 0}}, {}}};
  CHECK_THROWS_AS(usc_table_check(rows, {{Scalar(0), {S("1/2"), Scalar(1)}}}), ValidationError);
  CHECK_THROWS_AS(usc_table_check(rows, {{Scalar(0), {Scalar(1), Scalar(0)}}}), ValidationError);
  CHECK_THROWS_AS(usc_table_check(rows, {{Scalar(0), {S("1/3")}}}), ValidationError);
  CHECK(usc_table_check(rows, {{Scalar(0), {Scalar(1), S("1/2")}}}).empty());
}

}
