#include <doctest.h>

#include <json.hpp>

#include "helpers.hpp"
#include "kod/certificate.hpp"

using namespace kod;
using namespace kod::test;
using nlohmann::ordered_json;

namespace {

std::string cert(const char* name, long m) {
  const auto& acs = builtin_acs(name);
  return certificate_json(plurigenus(acs, m), acs);
}

CertificateCheck check_edit(const std::string& text, const std::function<void(ordered_json&)>& edit) {
  ordered_json j = ordered_json::parse(text);
  edit(j);
  return verify_certificate(j.dump());
}

}  // namespace

TEST_SUITE("certificate") {

TEST_CASE("certificates of the built-in structures verify") {
  const std::pair<const char*, long> cases[] = {{"nilmanifold_N", 0}, {"nilmanifold_N", 2}, {"torus4", 0},
                                                {"torus4", 3},        {"kodaira_thurston", 0}, {"kodaira_thurston", 4},
                                                {"nakamura", 2}};
  for (const auto& [name, m] : cases) {
    INFO(std::string(name) << " m = " << m);
    auto chk = verify_certificate(cert(name, m));
    CHECK(chk.ok);
    CHECK(chk.failure.empty());
    CHECK_FALSE(chk.steps.empty());
  }
}

TEST_CASE("certificate text is deterministic") {
  CHECK(cert("nilmanifold_N", 0) == cert("nilmanifold_N", 0));
  CHECK(report_json(plurigenus(builtin_acs("kodaira_thurston"), 0)) ==
        report_json(plurigenus(builtin_acs("kodaira_thurston"), 0)));
}

TEST_CASE("tampered certificates are rejected") {
  const std::string text = cert("nilmanifold_N", 2);
  REQUIRE(verify_certificate(text).ok);

  SUBCASE("forcing polynomial") {
    auto c = check_edit(text, [](ordered_json& j) { j["forms"][1]["polynomials"][0] = "2*i"; });
    CHECK_FALSE(c.ok);
    CHECK_FALSE(c.failure.empty());
  }
  SUBCASE("verdict") {
    auto c = check_edit(text, [](ordered_json& j) { j["verdict"]["dim"] = 1; });
    CHECK_FALSE(c.ok);
  }
  SUBCASE("missing branch") {
    auto c = check_edit(text, [](ordered_json& j) { j["forms"][0]["tree"]["children"].erase(1); });
    CHECK_FALSE(c.ok);
  }
  SUBCASE("witness that is not a component") {
    auto c = check_edit(text, [](ordered_json& j) { j["forms"][0]["tree"]["children"][1]["witness"] = "5"; });
    CHECK_FALSE(c.ok);
  }
  SUBCASE("rule that does not hold") {
    auto c = check_edit(text, [](ordered_json& j) {
      j["forms"][0]["tree"]["children"][0]["rule"] = "nonzero constant";
    });
    CHECK_FALSE(c.ok);
  }
  SUBCASE("forced leaf turned into an escape") {
    auto c = check_edit(text, [](ordered_json& j) { j["forms"][1]["tree"]["kind"] = "escape"; });
    CHECK_FALSE(c.ok);
  }
  SUBCASE("structure changed under the trees") {
    auto c = check_edit(text, [](ordered_json& j) {
      j["acs"]["J"] = {{"0", "-1", "0", "0"}, {"1", "0", "0", "0"}, {"0", "0", "0", "-1"}, {"0", "0", "1", "0"}};
    });
    CHECK_FALSE(c.ok);
  }
}

TEST_CASE("malformed certificates raise") {
  CHECK_THROWS_AS(verify_certificate("{not json"), ParseError);
  CHECK_THROWS(verify_certificate("{}"));
  const std::string text = cert("torus4", 1);
  ordered_json j = ordered_json::parse(text);
  j["format"] = "something-else";
  CHECK_THROWS(verify_certificate(j.dump()));
}

}
