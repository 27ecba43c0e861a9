#include "kod/certificate.hpp"

#include <functional>
#include <random>

#include <json.hpp>

#include "kod/expr.hpp"
#include "kod/spec_io.hpp"

namespace kod {

namespace {

using nlohmann::ordered_json;

const char* kFormat = "kod-plurigenus-certificate";

// ---------------------------------------------------------------- writing

ordered_json region_json(const Region& r) {
  ordered_json j = ordered_json::object();
  ordered_json fixed = ordered_json::object();
  for (const auto& [v, z] : r.fixed) fixed[v] = z.get_str();
  j["fixed"] = fixed;
  j["nonzero"] = std::vector<std::string>(r.nonzero.begin(), r.nonzero.end());
  ordered_json ex = ordered_json::object();
  for (const auto& [v, zs] : r.excluded) {
    ordered_json list = ordered_json::array();
    for (const auto& z : zs) list.push_back(z.get_str());
    ex[v] = list;
  }
  j["excluded"] = ex;
  ordered_json naz = ordered_json::array();
  for (const auto& s : r.not_all_zero) naz.push_back(std::vector<std::string>(s.begin(), s.end()));
  j["not_all_zero"] = naz;
  return j;
}

std::string kind_name(CaseNode::Kind k) {
  switch (k) {
    case CaseNode::Kind::Forced: return "forced";
    case CaseNode::Kind::Branch: return "branch";
    case CaseNode::Kind::Escape: return "escape";
    case CaseNode::Kind::Stuck: return "unresolved";
  }
  return "?";
}

ordered_json node_json(const CaseNode& n) {
  ordered_json j;
  j["label"] = n.label;
  j["kind"] = kind_name(n.kind);
  j["region"] = region_json(n.region);
  if (n.kind == CaseNode::Kind::Forced) {
    j["witness"] = to_string(n.witness);
    j["origin"] = n.origin;
    j["rule"] = n.rule;
  }
  if (n.kind == CaseNode::Kind::Branch) {
    j["split_on"] = to_string(n.branch_on);
    j["origin"] = n.origin;
    j["rule"] = n.rule;
    ordered_json kids = ordered_json::array();
    for (const auto& c : n.children) kids.push_back(node_json(c));
    j["children"] = kids;
  }
  return j;
}

ordered_json section_json(const ExpSection& s) {
  ordered_json j;
  ordered_json idx = ordered_json::object();
  for (const auto& [v, z] : s.index) idx[v] = z.get_str();
  j["index"] = idx;
  j["lambda"] = to_string(s.lambda);
  j["exponent"] = to_string(s.exponent);
  return j;
}

ordered_json verdict_json(const PlurigenusReport& r) {
  ordered_json v;
  v["kind"] = to_string(r.kind);
  v["certified"] = r.certified;
  switch (r.kind) {
    case VerdictKind::ExactDim:
      v["dim"] = r.dim;
      break;
    case VerdictKind::Bounds:
      v["lower"] = r.lower;
      v["upper"] = r.upper ? ordered_json(*r.upper) : ordered_json(nullptr);
      v["reason"] = r.reason;
      break;
    case VerdictKind::PeriodicDim:
      v["period"] = r.period;
      v["counts"] = r.counts;
      break;
    case VerdictKind::VanishAllM:
      break;
  }
  return v;
}

ordered_json m_json(long m) { return m == 0 ? ordered_json("symbolic") : ordered_json(m); }

std::vector<Poly> forcing_polys(const AcsData& acs, bool real, long m) {
  SectionEquation eq = build_section_equation(acs);
  FourierSystem sys = fourier_reduce(eq, acs.manifold, real);
  std::vector<Poly> out;
  for (const auto& p : sys.forcing_polynomials()) out.push_back(m == 0 ? p : p.substitute({{"m", Poly(m)}}));
  return out;
}

// ---------------------------------------------------------------- reading

Integer integer_of(const ordered_json& j, const std::string& where) {
  if (!j.is_string()) throw ValidationError(where + ": expected an integer string");
  Integer z;
  if (z.set_str(j.get<std::string>(), 10) != 0) throw ValidationError(where + ": bad integer '" + j.get<std::string>() + "'");
  return z;
}

const ordered_json& field(const ordered_json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw ValidationError(where + ": missing '" + key + "'");
  return j[key];
}

std::string string_field(const ordered_json& j, const char* key, const std::string& where) {
  const auto& v = field(j, key, where);
  if (!v.is_string()) throw ValidationError(where + "." + key + ": expected a string");
  return v.get<std::string>();
}

Region parse_region(const ordered_json& j, const std::string& where) {
  Region r;
  for (auto it = field(j, "fixed", where).begin(); it != j["fixed"].end(); ++it)
    r.fixed[it.key()] = integer_of(it.value(), where + ".fixed");
  for (const auto& v : field(j, "nonzero", where)) r.nonzero.insert(v.get<std::string>());
  for (auto it = field(j, "excluded", where).begin(); it != j["excluded"].end(); ++it)
    for (const auto& z : it.value()) r.excluded[it.key()].insert(integer_of(z, where + ".excluded"));
  for (const auto& s : field(j, "not_all_zero", where)) {
    std::set<std::string> set;
    for (const auto& v : s) set.insert(v.get<std::string>());
    r.not_all_zero.push_back(set);
  }
  return r;
}

CaseNode parse_node(const ordered_json& j, const std::set<std::string>& symbols, const std::string& where) {
  CaseNode n;
  n.label = string_field(j, "label", where);
  std::string kind = string_field(j, "kind", where);
  n.region = parse_region(field(j, "region", where), where + ".region");
  if (kind == "forced") {
    n.kind = CaseNode::Kind::Forced;
    n.witness = parse_polynomial(string_field(j, "witness", where), &symbols);
    n.origin = string_field(j, "origin", where);
    n.rule = string_field(j, "rule", where);
  } else if (kind == "branch") {
    n.kind = CaseNode::Kind::Branch;
    n.branch_on = parse_polynomial(string_field(j, "split_on", where), &symbols);
    n.rule = string_field(j, "rule", where);
    const auto& kids = field(j, "children", where);
    for (size_t k = 0; k < kids.size(); ++k)
      n.children.push_back(parse_node(kids[k], symbols, where + ".children[" + std::to_string(k) + "]"));
  } else if (kind == "escape") {
    n.kind = CaseNode::Kind::Escape;
  } else if (kind == "unresolved") {
    n.kind = CaseNode::Kind::Stuck;
  } else {
    throw ValidationError(where + ": unknown node kind '" + kind + "'");
  }
  return n;
}

// ---------------------------------------------------------------- checking

struct Failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Nonvanishing of a rational polynomial on all integer points of a region
// (m >= 1 when symbolic), by the rule the certificate names.
bool rule_holds(const Poly& q, const Region& r, const std::string& rule, bool m_symbolic) {
  auto nonzero = [&](const std::string& v) { return (v == "m" && m_symbolic) || r.known_nonzero(v); };
  auto term_nonzero = [&](const Monomial& mono, const std::string& assumed) {
    for (const auto& [v, e] : mono.factors())
      if (v != assumed && !nonzero(v)) return false;
    return true;
  };
  for (const auto& [mono, c] : q.terms())
    if (!c.is_rational()) return false;
  auto same_sign_even = [&] {
    int s = 0;
    for (const auto& [mono, c] : q.terms()) {
      int t = sgn(c.as_rational());
      if (s && t != s) return false;
      s = t;
      for (const auto& [v, e] : mono.factors())
        if (!(v == "m" && m_symbolic) && e % 2) return false;
    }
    return true;
  };
  if (rule == "nonzero constant") return q.is_constant() && !q.is_zero();
  if (rule == "monomial in nonzero symbols") return q.terms().size() == 1 && term_nonzero(q.terms().begin()->first, "");
  if (rule == "sum of same-sign even powers with a nonzero term") {
    if (q.is_zero() || !same_sign_even()) return false;
    for (const auto& [mono, c] : q.terms())
      if (term_nonzero(mono, "")) return true;
    return false;
  }
  if (rule.rfind("sum of same-sign even powers of ", 0) == 0) {
    if (q.is_zero() || !same_sign_even()) return false;
    for (const auto& s : r.not_all_zero) {
      bool covered = !s.empty();
      for (const auto& v : s) {
        bool found = false;
        for (const auto& [mono, c] : q.terms())
          found = found || (mono.exponent(v) > 0 && term_nonzero(mono, v));
        covered = covered && found;
      }
      if (covered) return true;
    }
    return false;
  }
  if (rule.rfind("univariate in ", 0) == 0) {
    auto syms = q.symbols();
    if (syms.size() != 1) return false;
    const std::string v = *syms.begin();
    for (const auto& z : integer_roots(q, v)) {
      if (v == "m" && m_symbolic && z < 1) continue;
      auto it = r.excluded.find(v);
      if (it != r.excluded.end() && it->second.count(z)) continue;
      if (z == 0 && r.nonzero.count(v)) continue;
      return false;
    }
    return true;
  }
  return false;
}

bool nonzero_in_x(const std::vector<Poly>& polys, const std::map<std::string, Integer>& point) {
  std::map<std::string, Poly> b;
  for (const auto& [v, z] : point) b[v] = Poly(Scalar(GaussRational(Rational(z))));
  for (const auto& p : polys)
    if (!p.substitute(b).is_zero()) return true;
  return false;
}

class TreeChecker {
 public:
  TreeChecker(std::vector<Poly> polys, std::string x, std::vector<std::string> vars, bool m_symbolic)
      : polys_(std::move(polys)), x_(std::move(x)), vars_(std::move(vars)), m_symbolic_(m_symbolic) {}

  void check(const CaseNode& root) {
    if (!root.region.fixed.empty() || !root.region.nonzero.empty() || !root.region.excluded.empty() ||
        !root.region.not_all_zero.empty())
      throw Failure("the root region is not the full index set");
    walk(root, "root");
    coverage(root);
  }

  int forced = 0, escaped = 0, unresolved = 0, points = 0;

 private:
  void walk(const CaseNode& n, const std::string& path) {
    switch (n.kind) {
      case CaseNode::Kind::Forced:
        ++forced;
        check_forced(n, path);
        break;
      case CaseNode::Kind::Escape: {
        ++escaped;
        auto b = n.region.bindings();
        for (const auto& p : polys_)
          if (!p.substitute(b).is_zero()) throw Failure(path + ": escaped region where a polynomial does not vanish");
        break;
      }
      case CaseNode::Kind::Stuck:
        ++unresolved;
        break;
      case CaseNode::Kind::Branch:
        if (n.children.empty()) throw Failure(path + ": branch without cases");
        for (size_t k = 0; k < n.children.size(); ++k) walk(n.children[k], path + "/" + n.children[k].label);
        break;
    }
  }

  void check_forced(const CaseNode& n, const std::string& path) {
    auto b = n.region.bindings();
    bool member = false;
    for (const auto& p : polys_)
      for (const auto& [key, q] : components(p.substitute(b), x_)) member = member || q == n.witness;
    if (!member) throw Failure(path + ": witness " + to_string(n.witness) + " is not a component of a forcing polynomial");
    if (!rule_holds(n.witness, n.region, n.rule, m_symbolic_))
      throw Failure(path + ": rule '" + n.rule + "' does not establish " + to_string(n.witness) + " != 0");
    std::mt19937_64 rng(0x6b6f64ULL + static_cast<uint64_t>(forced));
    std::uniform_int_distribution<long> pick(-40, 40), pick_m(1, 40);
    int found = 0;
    for (int tries = 0; tries < 20000 && found < 3; ++tries) {
      std::map<std::string, Integer> pt;
      for (const auto& v : vars_) {
        auto f = n.region.fixed.find(v);
        pt[v] = f != n.region.fixed.end() ? f->second : Integer(v == "m" ? pick_m(rng) : pick(rng));
      }
      if (!n.region.contains(pt)) continue;
      ++found;
      if (!nonzero_in_x(polys_, pt)) throw Failure(path + ": the forcing polynomials vanish at a sampled point");
    }
    if (found < 3) throw Failure(path + ": could not sample 3 points of the region");
  }

  // Every point of a box lies in exactly one child of each branch on its path.
  void coverage(const CaseNode& root) {
    const long B = 3;
    std::vector<Integer> cur(vars_.size());
    std::function<void(size_t)> rec = [&](size_t k) {
      if (k == vars_.size()) {
        std::map<std::string, Integer> pt;
        for (size_t i = 0; i < vars_.size(); ++i) pt[vars_[i]] = cur[i];
        descend(root, pt);
        ++points;
        return;
      }
      bool is_m = vars_[k] == "m";
      for (long v = is_m ? 1 : -B; v <= (is_m ? 2 * B : B); ++v) {
        cur[k] = v;
        rec(k + 1);
      }
    };
    rec(0);
  }

  void descend(const CaseNode& n, const std::map<std::string, Integer>& pt) {
    if (n.kind == CaseNode::Kind::Forced) {
      if (!nonzero_in_x(polys_, pt)) throw Failure("forced leaf '" + n.label + "' contains a point where the polynomials vanish");
      return;
    }
    if (n.kind != CaseNode::Kind::Branch) return;
    const CaseNode* hit = nullptr;
    for (const auto& c : n.children) {
      if (!c.region.contains(pt)) continue;
      if (hit) throw Failure("cases '" + hit->label + "' and '" + c.label + "' overlap");
      hit = &c;
    }
    if (!hit) {
      std::string at;
      for (const auto& [v, z] : pt) at += (at.empty() ? "" : ", ") + v + " = " + z.get_str();
      throw Failure("no case of the split on " + to_string(n.branch_on) + " contains " + at);
    }
    descend(*hit, pt);
  }

  std::vector<Poly> polys_;
  std::string x_;
  std::vector<std::string> vars_;
  bool m_symbolic_;
};

}  // namespace

std::string certificate_json(const PlurigenusReport& r, const AcsData& acs) {
  ordered_json j;
  j["format"] = kFormat;
  j["version"] = 1;
  j["manifold"] = ordered_json::parse(manifold_json(acs.manifold));
  j["acs"] = ordered_json::parse(acs_json(acs.manifold, acs.J));
  j["m"] = m_json(r.m);
  j["verdict"] = verdict_json(r);
  ordered_json forms = ordered_json::array();
  auto add = [&](const std::optional<CaseNode>& tree, bool real) {
    if (!tree) return;
    ordered_json f;
    f["form"] = real ? "real" : "complex";
    ordered_json polys = ordered_json::array();
    for (const auto& p : forcing_polys(acs, real, r.m)) polys.push_back(to_string(p));
    f["polynomials"] = polys;
    f["tree"] = node_json(*tree);
    forms.push_back(f);
  };
  add(r.real_tree, true);
  add(r.complex_tree, false);
  j["forms"] = forms;
  ordered_json res = ordered_json::array();
  for (const auto& rec : r.resonance) {
    ordered_json o;
    o["region"] = region_json(rec.region);
    o["outcome"] = rec.outcome;
    o["detail"] = rec.detail;
    o["lambda"] = to_string(rec.lambda);
    if (rec.period) {
      o["period"] = rec.period;
      o["counts"] = rec.counts;
    }
    ordered_json secs = ordered_json::array();
    for (const auto& s : rec.sections) secs.push_back(section_json(s));
    o["sections"] = secs;
    ordered_json gaps = ordered_json::array();
    for (const auto& g : rec.gaps) gaps.push_back(region_json(g));
    o["gaps"] = gaps;
    res.push_back(o);
  }
  j["resonance"] = res;
  ordered_json basis = ordered_json::array();
  for (const auto& s : r.basis) basis.push_back(section_json(s));
  j["basis"] = basis;
  return j.dump(2) + "\n";
}

std::string report_json(const PlurigenusReport& r) {
  ordered_json j;
  j["manifold"] = r.manifold;
  j["m"] = m_json(r.m);
  j["verdict"] = verdict_json(r);
  j["strategy_trace"] = r.strategy_trace;
  ordered_json basis = ordered_json::array();
  for (const auto& s : r.basis) basis.push_back(section_json(s));
  j["basis"] = basis;
  ordered_json res = ordered_json::array();
  for (const auto& rec : r.resonance) {
    ordered_json o;
    o["region"] = rec.region.describe();
    o["outcome"] = rec.outcome;
    o["lambda"] = to_string(rec.lambda);
    o["detail"] = rec.detail;
    res.push_back(o);
  }
  j["resonance"] = res;
  return j.dump(2) + "\n";
}

CertificateCheck verify_certificate(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const ordered_json::parse_error& e) {
    throw ParseError(std::string("certificate is not valid JSON: ") + e.what(), 0, 0);
  }
  if (!j.is_object() || !j.contains("format") || j["format"] != kFormat)
    throw ValidationError("not a plurigenus certificate (format must be '" + std::string(kFormat) + "')");
  ManifoldSpec manifold = parse_manifold(field(j, "manifold", "certificate").dump());
  AcsData acs = make_acs(manifold, parse_acs(field(j, "acs", "certificate").dump(), manifold).J);
  const auto& mj = field(j, "m", "certificate");
  long m = 0;
  if (mj.is_number_integer() && mj.get<long>() >= 1) m = mj.get<long>();
  else if (!(mj.is_string() && mj.get<std::string>() == "symbolic"))
    throw ValidationError("certificate.m: expected a positive integer or \"symbolic\"");
  const ordered_json verdict = field(j, "verdict", "certificate");
  const std::string kind = string_field(verdict, "kind", "certificate.verdict");

  CertificateCheck out;
  try {
    const auto& forms = field(j, "forms", "certificate");
    if (manifold.structure_only && !forms.empty())
      throw Failure("case trees given for a manifold without coordinates");
    // structure-only manifolds are decided by the maximum principle alone
    SectionEquation eq = manifold.structure_only ? SectionEquation{} : build_section_equation(acs);
    bool any_forced_tree = false;
    for (const auto& f : forms) {
      const std::string form = string_field(f, "form", "certificate.forms");
      if (form != "real" && form != "complex") throw ValidationError("certificate.forms: unknown form '" + form + "'");
      const bool real = form == "real";
      FourierSystem sys = fourier_reduce(eq, manifold, real);
      std::vector<Poly> polys = forcing_polys(acs, real, m);
      const auto& listed = field(f, "polynomials", "certificate.forms");
      if (listed.size() != polys.size()) throw Failure(form + " form: wrong number of forcing polynomials");
      for (size_t k = 0; k < polys.size(); ++k)
        if (!listed[k].is_string() || listed[k].get<std::string>() != to_string(polys[k]))
          throw Failure(form + " form: forcing polynomial " + std::to_string(k + 1) + " differs from the recomputed one");
      out.steps.push_back(form + " form: " + std::to_string(polys.size()) + " forcing polynomial(s) recomputed");

      std::set<std::string> symbols(sys.index.begin(), sys.index.end());
      symbols.insert("m");
      if (!sys.x.empty()) symbols.insert(sys.x);
      CaseNode tree = parse_node(field(f, "tree", "certificate.forms"), symbols, form + " tree");
      std::vector<std::string> vars = sys.index;
      if (m == 0) vars.push_back("m");
      TreeChecker checker(polys, sys.x, vars, m == 0);
      checker.check(tree);
      out.steps.push_back(form + " form: " + std::to_string(checker.forced) + " forced, " +
                          std::to_string(checker.escaped) + " escaped, " + std::to_string(checker.unresolved) +
                          " unresolved leaves checked; partition verified on " + std::to_string(checker.points) +
                          " integer points");
      any_forced_tree = any_forced_tree || (checker.escaped == 0 && checker.unresolved == 0);
    }
    if (kind == "VanishAllM" && !any_forced_tree)
      throw Failure("verdict VanishAllM but no case tree forces every index");

    PlurigenusReport again = plurigenus(acs, m);
    if (verdict_json(again) != verdict)
      throw Failure("recorded verdict " + verdict.dump() + " differs from the recomputed " + verdict_json(again).dump());
    out.steps.push_back("verdict recomputed: " + to_string(again.kind));
    FourierSystem cx = manifold.structure_only ? FourierSystem{} : fourier_reduce(eq, manifold, false);
    // sections of an all-m analysis are constants (ExactDim) or tied to their own m
    const bool check_basis = !manifold.structure_only && (m != 0 || again.kind == VerdictKind::ExactDim);
    for (const auto& s : check_basis ? again.basis : std::vector<ExpSection>{})
      if (!verify_section(eq, manifold, cx, s, m == 0 ? 1 : m))
        throw Failure("section exp(" + to_string(s.exponent) + ") fails the section equation");
    if (check_basis && !again.basis.empty())
      out.steps.push_back(std::to_string(again.basis.size()) + " section(s) re-verified by substitution");
    out.ok = true;
  } catch (const Failure& e) {
    out.ok = false;
    out.failure = e.what();
  }
  return out;
}

}  // namespace kod
