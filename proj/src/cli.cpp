#include "kod/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "kod/certificate.hpp"
#include "kod/deformation.hpp"
#include "kod/kodaira.hpp"
#include "kod/spec_io.hpp"

namespace kod {

namespace {

using nlohmann::ordered_json;

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ValidationError("cannot write '" + path + "'");
  f << text;
  if (!f) throw ValidationError("error writing '" + path + "'");
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ValidationError("cannot read '" + path + "'");
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

AcsData load_structure(const RunConfig& c) { return load_acs(load_manifold(c.manifold), c.acs); }

std::string frame_string(const Form& f, const AcsData& acs) {
  return to_string(f, default_basis_names(acs.manifold, f.kind()));
}

int cmd_acs(const RunConfig& c, std::ostream& out) {
  const std::string action = c.command.substr(4);
  AcsData acs = load_structure(c);
  const int n = acs.n();
  if (action == "validate") {
    if (c.json) {
      ordered_json j;
      j["manifold"] = acs.manifold.name;
      j["valid"] = true;
      j["constant_coefficients"] = acs.constant_coefficients();
      out << j.dump(2) << "\n";
    } else {
      out << "valid: J^2 = -I on " << acs.manifold.name << "\n";
      out << "coefficients in the frame: " << (acs.constant_coefficients() ? "constant" : "not constant") << "\n";
    }
    return 0;
  }
  if (action == "coframe") {
    ordered_json j = ordered_json::object();
    for (int k = 0; k < n; ++k) {
      std::string name = "phi" + std::to_string(k + 1);
      std::string value = frame_string(to_frame(acs.phi(k), acs), acs);
      if (c.json) j[name] = value;
      else out << name << " = " << value << "\n";
    }
    if (c.json) out << j.dump(2) << "\n";
    return 0;
  }
  if (action == "alpha") {
    std::string value = frame_string(acs.alpha_form(), acs);
    if (c.json) out << ordered_json{{"alpha", value}}.dump(2) << "\n";
    else out << "alpha = " << value << "\n";
    return 0;
  }
  if (action == "integrable") {
    IntegrabilityResult r = is_integrable(acs);
    std::string witness;
    if (!r.integrable)
      witness = "mubar(phi" + std::to_string(r.witness_index + 1) + ") = " + frame_string(r.witness, acs);
    if (c.json) {
      ordered_json j;
      j["integrable"] = r.integrable;
      if (!r.integrable) j["witness"] = witness;
      out << j.dump(2) << "\n";
    } else {
      out << (r.integrable ? "true" : "false") << "\n";
      if (!r.integrable) out << witness << "\n";
    }
    return 0;
  }
  if (action == "gcy-check") {
    GcyInput in = load_gcy(c.gcy, acs);
    GcyReport r = gcy_check(acs, in.sigma, in.epsilon);
    const std::pair<const char*, const GcyCondition*> rows[] = {
        {"metric", &r.metric}, {"volume", &r.volume}, {"parallel", &r.parallel}};
    if (c.json) {
      ordered_json j = ordered_json::object();
      for (const auto& [name, cond] : rows) j[name] = {{"verdict", to_string(cond->verdict)}, {"detail", cond->detail}};
      out << j.dump(2) << "\n";
    } else {
      int k = 1;
      for (const auto& [name, cond] : rows)
        out << "(" << k++ << ") " << name << ": " << to_string(cond->verdict) << " (" << cond->detail << ")\n";
    }
    return 0;
  }
  throw ValidationError("unknown acs action '" + action + "'");
}

int cmd_plurigenus(const RunConfig& c, std::ostream& out, std::ostream& err) {
  if (!c.verify_path.empty()) {
    CertificateCheck chk = verify_certificate(read_file(c.verify_path));
    for (const auto& s : chk.steps) out << "checked: " << s << "\n";
    if (!chk.ok) {
      err << "certificate rejected: " << chk.failure << "\n";
      return 1;
    }
    out << "certificate verified\n";
    return 0;
  }
  AcsData acs = load_structure(c);
  const long m = c.m_symbolic ? 0 : *c.m;
  PlurigenusReport r = plurigenus(acs, m);
  if (!c.certificate_path.empty()) write_file(c.certificate_path, certificate_json(r, acs));
  std::optional<OracleResult> orc;
  if (c.oracle) orc = oracle_numeric_kernel(acs, m, c.oracle_options);
  if (c.json) {
    ordered_json j = ordered_json::parse(report_json(r));
    if (orc) {
      j["oracle"] = {{"dimension", orc->dimension}, {"unknowns", orc->unknowns}, {"method", orc->method},
                     {"certified", false}, {"warning", orc->warning}, {"message", orc->message}};
    }
    out << j.dump(2) << "\n";
  } else {
    out << render_text(r);
    if (orc) {
      out << "oracle: dimension " << orc->dimension << " (not certified; " << orc->unknowns << " unknowns, "
          << orc->method << ")\n";
      auto exact = r.value_at(m);
      if (exact) out << "oracle " << (*exact == orc->dimension ? "agrees" : "disagrees") << " with P_" << m << " = " << *exact << "\n";
      if (orc->warning) err << "warning: " << orc->message << "\n";
    }
  }
  return 0;
}

int cmd_kodaira(const RunConfig& c, std::ostream& out) {
  AcsData acs = load_structure(c);
  std::vector<PlurigenusReport> reports;
  if (c.symbolic) reports.push_back(plurigenus(acs, 0));
  const long M = c.max_m.value_or(0);
  for (long m = 1; m <= M; ++m) reports.push_back(plurigenus(acs, m));
  KodairaVerdict v;
  try {
    v = kod_from_reports(reports);
  } catch (const ValidationError&) {
    if (M == 0) throw ValidationError("the all-m analysis does not settle kod here; pass --max-m");
    throw;
  }
  out << to_string(v) << "\n";
  out << "reason: " << v.rationale << "\n";
  if (M > 0) {
    std::string csv = "m,P_m,certified\n";
    for (const auto& r : reports) {
      if (r.m == 0) continue;
      auto p = r.value_at(r.m);
      std::string cell = p ? std::to_string(*p) : std::to_string(r.lower) + ".." + (r.upper ? std::to_string(*r.upper) : "");
      csv += std::to_string(r.m) + "," + cell + "," + (p && r.certified ? "true" : "false") + "\n";
    }
    if (c.csv_path.empty()) out << csv;
    else write_file(c.csv_path, csv);
  }
  return 0;
}

int cmd_scan(const RunConfig& c, std::ostream& out, std::ostream& err) {
  FamilySpec fam = load_family(c.family);
  std::vector<Scalar> samples = load_samples(c.samples);
  std::vector<UscSequence> sequences;
  if (c.usc > 0) {
    std::vector<Scalar> extra;
    for (const auto& t : samples) {
      if (!in_domain(fam, t)) continue;
      UscSequence s{t, crossing_sequence(t, c.usc)};
      for (const auto& p : s.points)
        if (std::find(samples.begin(), samples.end(), p) == samples.end() &&
            std::find(extra.begin(), extra.end(), p) == extra.end())
          extra.push_back(p);
      sequences.push_back(std::move(s));
    }
    samples.insert(samples.end(), extra.begin(), extra.end());
  }
  ScanTable table = scan(fam, samples, *c.max_m);
  for (const auto& n : table.notices) err << "notice: " << n << "\n";
  std::string csv = to_csv(table);
  if (c.out_path.empty()) out << csv;
  else write_file(c.out_path, csv);
  if (!c.plot_path.empty()) write_file(c.plot_path, plot_data(table));
  if (c.usc > 0) {
    auto violations = usc_table_check(usc_rows(table), sequences);
    int fixed_m = 0, kod_row = 0;
    for (const auto& v : violations) {
      (v.m == 0 ? kod_row : fixed_m)++;
      err << "usc: " << (v.m == 0 ? "kod row: " : "violation: ") << v.detail << "\n";
    }
    err << "usc: " << fixed_m << " violation(s) for fixed m, " << kod_row << " in the kod row\n";
  }
  return 0;
}

int cmd_oracle(const RunConfig& c, std::ostream& out, std::ostream& err) {
  AcsData acs = load_structure(c);
  OracleResult r = oracle_numeric_kernel(acs, *c.m, c.oracle_options);
  if (c.json) {
    ordered_json j;
    j["manifold"] = acs.manifold.name;
    j["m"] = *c.m;
    j["dimension"] = r.dimension;
    j["certified"] = false;
    j["unknowns"] = r.unknowns;
    j["method"] = r.method;
    j["count_half_threshold"] = r.count_half;
    j["count_double_threshold"] = r.count_double;
    j["warning"] = r.warning;
    j["message"] = r.message;
    out << j.dump(2) << "\n";
  } else {
    out << "dimension " << r.dimension << " (not certified)\n";
    out << "unknowns " << r.unknowns << ", method " << r.method << "\n";
    out << "counts at threshold/2, threshold, 2*threshold: " << r.count_half << ", " << r.dimension << ", "
        << r.count_double << "\n";
  }
  if (r.warning) err << "warning: " << r.message << "\n";
  return 0;
}

double parse_threshold(const std::string& s) {
  size_t used = 0;
  double v = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || !(v > 0) || v > 1e6) throw ValidationError("--threshold must be a positive decimal, got '" + s + "'");
  return v;
}

}  // namespace

void validate_config(const RunConfig& c) {
  auto need = [&](bool ok, const std::string& what) {
    if (!ok) throw ValidationError(c.command + ": " + what);
  };
  if (c.command.rfind("acs ", 0) == 0 || c.command == "oracle" || c.command == "kodaira" ||
      (c.command == "plurigenus" && c.verify_path.empty()))
    need(!c.manifold.empty(), "--manifold is required");
  if (c.command == "plurigenus" && c.verify_path.empty()) {
    need(c.m.has_value() != c.m_symbolic, "give exactly one of --m N and --m-symbolic");
    need(!c.oracle || c.m.has_value(), "--oracle needs a concrete --m");
  }
  if (c.command == "plurigenus" && !c.verify_path.empty())
    need(c.manifold.empty() && !c.m && !c.m_symbolic && !c.oracle, "--verify takes no other inputs");
  if (c.command == "kodaira") need(c.symbolic || c.max_m, "give --max-m M and/or --symbolic");
  if (c.command == "scan") {
    need(!c.family.empty(), "--family is required");
    need(c.max_m.has_value(), "--max-m is required");
  }
  if (c.command == "oracle") need(c.m.has_value(), "--m is required");
  if (c.m) need(*c.m >= 1, "--m must be >= 1");
  if (c.max_m) need(*c.max_m >= 1 && *c.max_m <= 10000, "--max-m must be in 1..10000");
  need(c.usc >= 0 && c.usc <= 12, "--usc must be in 0..12");
  need(c.oracle_options.grid >= 3 && c.oracle_options.grid <= 4096, "--grid must be in 3..4096");
  need(c.oracle_options.method == "blocks" || c.oracle_options.method == "dense", "--method must be blocks or dense");
}

int execute(const RunConfig& c, std::ostream& out, std::ostream& err) {
  validate_config(c);
  if (c.command.rfind("acs ", 0) == 0) return cmd_acs(c, out);
  if (c.command == "plurigenus") return cmd_plurigenus(c, out, err);
  if (c.command == "kodaira") return cmd_kodaira(c, out);
  if (c.command == "scan") return cmd_scan(c, out, err);
  if (c.command == "oracle") return cmd_oracle(c, out, err);
  throw ValidationError("unknown command '" + c.command + "'");
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"Plurigenera and Kodaira dimension of invariant almost complex structures on nilmanifolds", "kod"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));
  std::string threshold;
  std::vector<std::string> overrides;

  auto structure_opts = [&](CLI::App* s) {
    s->add_option("--manifold", c.manifold, "manifold spec file or built-in name");
    s->add_option("--acs", c.acs, "structure file, or builtin/standard")->capture_default_str();
    s->add_flag("--json", c.json, "machine-readable output");
  };
  auto oracle_opts = [&](CLI::App* s) {
    s->add_option("--grid", c.oracle_options.grid, "grid points per coordinate")->capture_default_str();
    s->add_option("--grid-override", overrides, "per-coordinate grid size, coord=N");
    s->add_option("--threshold", threshold, "singular value threshold (decimal)");
    s->add_option("--method", c.oracle_options.method, "blocks or dense")->capture_default_str();
  };

  CLI::App* acs = app.add_subcommand("acs", "almost complex structure checks");
  acs->require_subcommand(1);
  for (const char* action : {"validate", "coframe", "alpha", "integrable", "gcy-check"}) {
    CLI::App* s = acs->add_subcommand(action);
    structure_opts(s);
    if (std::string(action) == "gcy-check")
      s->add_option("--input", c.gcy, "sigma/epsilon file, or builtin")->capture_default_str();
    s->callback([&c, action] { c.command = std::string("acs ") + action; });
  }

  CLI::App* pg = app.add_subcommand("plurigenus", "plurigenus P_m with certificate");
  structure_opts(pg);
  pg->add_option("--m", c.m, "concrete m >= 1");
  pg->add_flag("--m-symbolic", c.m_symbolic, "analysis valid for every m >= 1");
  pg->add_flag("--oracle", c.oracle, "also run the numerical kernel estimate");
  oracle_opts(pg);
  pg->add_option("--certificate", c.certificate_path, "write the certificate to this file");
  pg->add_option("--verify", c.verify_path, "re-check a certificate file");
  pg->callback([&c] { c.command = "plurigenus"; });

  CLI::App* kd = app.add_subcommand("kodaira", "Kodaira dimension");
  structure_opts(kd);
  kd->add_option("--max-m", c.max_m, "compute P_m for m = 1..M");
  kd->add_flag("--symbolic", c.symbolic, "use the analysis valid for every m");
  kd->add_option("--csv", c.csv_path, "write the P_m table here instead of stdout");
  kd->callback([&c] { c.command = "kodaira"; });

  CLI::App* sc = app.add_subcommand("scan", "plurigenera over a family J(t)");
  sc->add_option("--family", c.family, "family spec file or built-in name");
  sc->add_option("--samples", c.samples, "samples file or builtin")->capture_default_str();
  sc->add_option("--max-m", c.max_m, "m range 1..M");
  sc->add_option("--out", c.out_path, "CSV output file (default stdout)");
  sc->add_option("--plot-data", c.plot_path, "write t_label,m,P_m triples here");
  sc->add_option("--usc", c.usc, "add K-point approach sequences and check semicontinuity");
  sc->callback([&c] { c.command = "scan"; });

  CLI::App* orc = app.add_subcommand("oracle", "numerical kernel dimension (not certified)");
  structure_opts(orc);
  orc->add_option("--m", c.m, "m >= 1");
  oracle_opts(orc);
  orc->callback([&c] { c.command = "oracle"; });

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::Success& e) {
    // help and version requests
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return 1;
  }

  try {
    if (!threshold.empty()) c.oracle_options.threshold = parse_threshold(threshold);
    for (const auto& o : overrides) {
      auto eq = o.find('=');
      int v = 0;
      try {
        v = eq == std::string::npos ? 0 : std::stoi(o.substr(eq + 1));
      } catch (const std::exception&) {
        v = 0;
      }
      if (eq == std::string::npos || eq == 0 || v < 3 || v > 4096)
        throw ValidationError("--grid-override expects coord=N with N in 3..4096, got '" + o + "'");
      c.oracle_options.grid_overrides[o.substr(0, eq)] = v;
    }
    return execute(c, out, err);
  } catch (...) {
    return failure_status(std::current_exception(), err);
  }
}

int failure_status(std::exception_ptr e, std::ostream& err) {
  try {
    std::rethrow_exception(e);
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return 1;
  } catch (const ValidationError& e) {
    err << "invalid input: " << e.what() << "\n";
    return 1;
  } catch (const UnsupportedError& e) {
    err << "unsupported: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 2;
  } catch (...) {
    err << "internal error: unknown exception\n";
    return 2;
  }
}

}  // namespace kod
