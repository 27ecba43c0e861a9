#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "kod/cli.hpp"
#include "kod/errors.hpp"

using namespace kod;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int status = 0;
  std::string out, err;
};

Outcome run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  Outcome o;
  o.status = run(args, out, err);
  o.out = out.str();
  o.err = err.str();
  return o;
}

std::string transcript(const std::vector<std::string>& args, const Outcome& o) {
  std::string cmd = "kod";
  for (const auto& a : args) cmd += " " + a;
  return "$ " + cmd + "\nexit " + std::to_string(o.status) + "\n--- stdout\n" + o.out + "--- stderr\n" + o.err;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

// Compares against tests/golden/<name>.txt; KOD_UPDATE_GOLDEN=1 rewrites it.
void golden(const std::string& name, const std::vector<std::string>& args) {
  Outcome first = run_cli(args), second = run_cli(args);
  std::string text = transcript(args, first);
  INFO("golden " << name);
  CHECK(text == transcript(args, second));  // byte-identical across runs
  fs::path file = fs::path(KOD_GOLDEN_DIR) / (name + ".txt");
  const char* update = std::getenv("KOD_UPDATE_GOLDEN");
  if (update && std::string(update) == "1") {
    std::ofstream(file, std::ios::binary) << text;
    return;
  }
  REQUIRE_MESSAGE(fs::exists(file), "missing golden file " << file.string() << " (run with KOD_UPDATE_GOLDEN=1)");
  CHECK(text == slurp(file));
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("kod_cli_" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
  std::string write(const std::string& name, const std::string& text) const {
    std::ofstream(path / name, std::ios::binary) << text;
    return file(name);
  }
};

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("golden outputs") {
  golden("acs_validate_N", {"acs", "validate", "--manifold", "nilmanifold_N"});
  golden("acs_validate_torus_json", {"acs", "validate", "--manifold", "torus4", "--json"});
  golden("acs_coframe_N", {"acs", "coframe", "--manifold", "nilmanifold_N"});
  golden("acs_coframe_kt_json", {"acs", "coframe", "--manifold", "kodaira_thurston", "--json"});
  golden("acs_alpha_N", {"acs", "alpha", "--manifold", "nilmanifold_N"});
  golden("acs_integrable_N", {"acs", "integrable", "--manifold", "nilmanifold_N"});
  golden("acs_integrable_torus_json", {"acs", "integrable", "--manifold", "torus4", "--json"});
  golden("acs_gcy_torus", {"acs", "gcy-check", "--manifold", "torus4"});
  golden("plurigenus_N_m2", {"plurigenus", "--manifold", "nilmanifold_N", "--m", "2"});
  golden("plurigenus_N_symbolic", {"plurigenus", "--manifold", "nilmanifold_N", "--m-symbolic"});
  golden("plurigenus_kt_m4_json", {"plurigenus", "--manifold", "kodaira_thurston", "--m", "4", "--json"});
  golden("plurigenus_kt_symbolic", {"plurigenus", "--manifold", "kodaira_thurston", "--m-symbolic"});
  golden("plurigenus_torus_oracle", {"plurigenus", "--manifold", "torus4", "--m", "1", "--oracle", "--grid", "4"});
  golden("plurigenus_nakamura_m2", {"plurigenus", "--manifold", "nakamura", "--m", "2"});
  golden("kodaira_N_symbolic", {"kodaira", "--manifold", "nilmanifold_N", "--symbolic"});
  golden("kodaira_kt_max8", {"kodaira", "--manifold", "kodaira_thurston", "--max-m", "8"});
  golden("kodaira_torus_both", {"kodaira", "--manifold", "torus4", "--symbolic", "--max-m", "3"});
  golden("scan_kt_max4", {"scan", "--family", "kodaira_thurston", "--max-m", "4"});
  golden("scan_kt_usc3", {"scan", "--family", "kodaira_thurston", "--max-m", "4", "--usc", "3"});
  golden("oracle_torus_json", {"oracle", "--manifold", "torus4", "--m", "1", "--grid", "4", "--json"});
  golden("oracle_N", {"oracle", "--manifold", "nilmanifold_N", "--m", "1", "--grid", "5"});
  golden("version", {"--version"});
}

TEST_CASE("golden error paths") {
  golden("err_no_command", {});
  golden("err_unknown_command", {"frobnicate"});
  golden("err_missing_manifold", {"acs", "validate"});
  golden("err_unknown_manifold", {"acs", "validate", "--manifold", "nope"});
  golden("err_both_m", {"plurigenus", "--manifold", "torus4", "--m", "2", "--m-symbolic"});
  golden("err_neither_m", {"plurigenus", "--manifold", "torus4"});
  golden("err_m_zero", {"plurigenus", "--manifold", "torus4", "--m", "0"});
  golden("err_m_text", {"plurigenus", "--manifold", "torus4", "--m", "two"});
  golden("err_oracle_symbolic", {"plurigenus", "--manifold", "torus4", "--m-symbolic", "--oracle"});
  golden("err_verify_extra", {"plurigenus", "--verify", "x.json", "--manifold", "torus4"});
  golden("err_kodaira_no_range", {"kodaira", "--manifold", "torus4"});
  golden("err_kodaira_range", {"kodaira", "--manifold", "torus4", "--max-m", "20000"});
  golden("err_scan_no_family", {"scan", "--max-m", "3"});
  golden("err_scan_no_max", {"scan", "--family", "kodaira_thurston"});
  golden("err_scan_usc", {"scan", "--family", "kodaira_thurston", "--max-m", "3", "--usc", "13"});
  golden("err_grid", {"oracle", "--manifold", "torus4", "--m", "1", "--grid", "2"});
  golden("err_method", {"oracle", "--manifold", "torus4", "--m", "1", "--method", "lu"});
  golden("err_threshold", {"oracle", "--manifold", "torus4", "--m", "1", "--threshold", "abc"});
  golden("err_threshold_negative", {"oracle", "--manifold", "torus4", "--m", "1", "--threshold", "-1"});
  golden("err_grid_override", {"oracle", "--manifold", "torus4", "--m", "1", "--grid-override", "x=2"});
  golden("err_grid_override_form", {"oracle", "--manifold", "torus4", "--m", "1", "--grid-override", "x"});
  golden("err_unknown_option", {"acs", "validate", "--manifold", "torus4", "--colour"});
}

TEST_CASE("help exits cleanly") {
  auto o = run_cli({"--help"});
  CHECK(o.status == 0);
  CHECK(o.out.find("plurigenus") != std::string::npos);
  auto s = run_cli({"scan", "--help"});
  CHECK(s.status == 0);
  CHECK(s.out.find("--usc") != std::string::npos);
}

TEST_CASE("file inputs and outputs") {
  TempDir dir;

  SUBCASE("invalid structure file") {
    std::string acs = dir.write("bad.json", R"({"manifold": "torus4", "J": [["0","1","0","0"],["1","0","0","0"],
      ["0","0","0","-1"],["0","0","1","0"]]})");
    auto o = run_cli({"acs", "validate", "--manifold", "torus4", "--acs", acs});
    CHECK(o.status == 1);
    CHECK(o.err.rfind("invalid input: ", 0) == 0);
  }
  SUBCASE("malformed structure file") {
    std::string acs = dir.write("broken.json", R"({"manifold": "torus4", "J": [["0","-1"]])");
    auto o = run_cli({"acs", "validate", "--manifold", "torus4", "--acs", acs});
    CHECK(o.status == 1);
    CHECK(o.out.empty());
  }
  SUBCASE("bad expression in a structure file") {
    std::string acs = dir.write("expr.json", R"({"manifold": "torus4", "J": [["0","-1+","0","0"],["1","0","0","0"],
      ["0","0","0","-1"],["0","0","1","0"]]})");
    auto o = run_cli({"acs", "validate", "--manifold", "torus4", "--acs", acs});
    CHECK(o.status == 1);
    CHECK(o.err.find("unexpected end of expression") != std::string::npos);
  }
  SUBCASE("certificate round trip and tampering") {
    std::string c = dir.file("n.json");
    auto o = run_cli({"plurigenus", "--manifold", "nilmanifold_N", "--m-symbolic", "--certificate", c});
    REQUIRE(o.status == 0);
    auto v = run_cli({"plurigenus", "--verify", c});
    CHECK(v.status == 0);
    CHECK(v.out.find("certificate verified\n") != std::string::npos);

    std::string text = slurp(c);
    const std::string from = "\"kind\": \"VanishAllM\"";
    auto pos = text.find(from);
    REQUIRE(pos != std::string::npos);
    text.replace(pos, from.size(), "\"kind\": \"ExactDim\", \"dim\": 1");
    std::string t = dir.write("tampered.json", text);
    auto w = run_cli({"plurigenus", "--verify", t});
    CHECK(w.status == 1);
    CHECK(w.err.find("certificate rejected: ") != std::string::npos);

    auto missing = run_cli({"plurigenus", "--verify", dir.file("absent.json")});
    CHECK(missing.status == 1);
  }
  SUBCASE("scan and kodaira write files matching stdout") {
    auto base = run_cli({"scan", "--family", "kodaira_thurston", "--max-m", "4"});
    std::string csv = dir.file("scan.csv"), plot = dir.file("plot.txt");
    auto o = run_cli({"scan", "--family", "kodaira_thurston", "--max-m", "4", "--out", csv, "--plot-data", plot});
    CHECK(o.status == 0);
    CHECK(o.out.empty());
    CHECK(slurp(csv) == base.out);
    CHECK(slurp(plot).rfind("t_label,m,P_m\n", 0) == 0);

    std::string kc = dir.file("k.csv");
    auto k = run_cli({"kodaira", "--manifold", "kodaira_thurston", "--max-m", "4", "--csv", kc});
    CHECK(k.status == 0);
    CHECK(slurp(kc) == "m,P_m,certified\n1,0,true\n2,0,true\n3,0,true\n4,1,true\n");
  }
  SUBCASE("samples outside the disc are reported") {
    std::string s = dir.write("samples.json", R"(["0", "7", "1/2"])");
    auto o = run_cli({"scan", "--family", "kodaira_thurston", "--samples", s, "--max-m", "2"});
    CHECK(o.status == 0);
    CHECK(o.err.find("notice: skipped t = 7") != std::string::npos);
  }
  SUBCASE("unwritable output") {
    auto o = run_cli({"scan", "--family", "kodaira_thurston", "--max-m", "2", "--out", dir.file("no/such/dir.csv")});
    CHECK(o.status == 1);
    CHECK(o.err.find("cannot write") != std::string::npos);
  }
}

TEST_CASE("exit statuses by error class") {
  auto status = [](auto thrower) {
    std::ostringstream err;
    try {
      thrower();
    } catch (...) {
      int code = failure_status(std::current_exception(), err);
      return std::make_pair(code, err.str());
    }
    return std::make_pair(-1, std::string());
  };
  CHECK(status([] { throw ValidationError("v"); }) == std::make_pair(1, std::string("invalid input: v\n")));
  CHECK(status([] { throw ParseError("p", 1, 2); }) == std::make_pair(1, std::string("parse error: p\n")));
  CHECK(status([] { throw UnsupportedError("u"); }) == std::make_pair(1, std::string("unsupported: u\n")));
  CHECK(status([] { throw InvariantError("broken"); }) == std::make_pair(2, std::string("internal error: broken\n")));
  CHECK(status([] { throw MathError("x / 0"); }).first == 2);
  CHECK(status([] { throw 7; }).first == 2);
}

TEST_CASE("config validation") {
  RunConfig c;
  c.command = "oracle";
  c.manifold = "torus4";
  CHECK_THROWS_AS(validate_config(c), ValidationError);
  c.m = 1;
  CHECK_NOTHROW(validate_config(c));
  c.oracle_options.grid = 5000;
  CHECK_THROWS_AS(validate_config(c), ValidationError);
  c.oracle_options.grid = 4;
  c.command = "teleport";
  std::ostringstream out, err;
  CHECK_THROWS_AS(execute(c, out, err), ValidationError);
}

}
