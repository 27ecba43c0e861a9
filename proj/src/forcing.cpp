#include <algorithm>
#include <functional>
#include <sstream>

#include "kod/plurigenera.hpp"

namespace kod {

namespace {

Poly integer_poly(const Integer& v) { return Poly(Scalar(GaussRational(Rational(v)))); }

std::string set_string(const std::set<std::string>& s) {
  std::string out;
  for (const auto& v : s) out += (out.empty() ? "" : ", ") + v;
  return "{" + out + "}";
}

struct Component {
  std::string origin;
  Poly q;
};

const char* part_name(int part) { return part == 0 ? "imaginary part" : "real part"; }

std::vector<Component> components_in_order(const std::vector<Poly>& polys, const std::string& x, int part) {
  std::vector<Component> out;
  for (size_t k = 0; k < polys.size(); ++k) {
    auto comps = components(polys[k], x);
    std::vector<std::pair<std::tuple<int, int, int>, Poly>> sel;
    for (auto& [key, q] : comps)
      if (std::get<0>(key) == part) sel.emplace_back(key, q);
    std::sort(sel.begin(), sel.end(), [](const auto& a, const auto& b) {
      if (std::get<1>(a.first) != std::get<1>(b.first)) return std::get<1>(a.first) > std::get<1>(b.first);
      return std::get<2>(a.first) > std::get<2>(b.first);
    });
    for (auto& [key, q] : sel) {
      std::string origin = "poly " + std::to_string(k + 1) + ", " + part_name(part);
      if (!x.empty()) origin += ", " + x + "^" + std::to_string(std::get<1>(key));
      origin += ", pi^" + std::to_string(std::get<2>(key));
      out.push_back({origin, q});
    }
  }
  return out;
}

class Forcer {
 public:
  explicit Forcer(const ForcingProblem& p) : p_(p) {}

  CaseNode run(const Region& region, const std::string& label) {
    CaseNode node;
    node.label = label;
    node.region = region;
    std::vector<Poly> polys;
    auto b = region.bindings();
    for (const auto& poly : p_.polys) {
      Poly s = poly.substitute(b);
      if (!s.is_zero()) polys.push_back(s);
    }
    if (polys.empty()) {
      node.kind = CaseNode::Kind::Escape;
      return node;
    }
    for (int part : {0, 1}) {
      auto comps = components_in_order(polys, p_.x, part);
      for (const auto& c : comps) {
        if (auto rule = decide(c.q, region)) {
          node.kind = CaseNode::Kind::Forced;
          node.witness = c.q;
          node.origin = c.origin;
          node.rule = *rule;
          return node;
        }
      }
      if (branch(comps, region, node)) return node;
    }
    node.kind = CaseNode::Kind::Stuck;
    return node;
  }

  bool positive_var(const std::string& v) const { return v == "m" && p_.m_symbolic; }
  bool nonzero_var(const std::string& v, const Region& r) const { return positive_var(v) || r.known_nonzero(v); }

  static bool same_sign(const Poly& q) {
    int s = 0;
    for (const auto& [mono, c] : q.terms()) {
      int t = sgn(c.as_rational());
      if (s && t != s) return false;
      s = t;
    }
    return true;
  }

  // each index variable appears to an even power
  bool even_powers(const Poly& q) const {
    for (const auto& [mono, c] : q.terms())
      for (const auto& [v, e] : mono.factors())
        if (!positive_var(v) && e % 2) return false;
    return true;
  }

  bool term_nonzero_given(const Monomial& mono, const Region& r, const std::string& assumed) const {
    for (const auto& [v, e] : mono.factors())
      if (v != assumed && !nonzero_var(v, r)) return false;
    return true;
  }

  std::optional<std::string> decide(const Poly& q, const Region& r) const {
    if (q.is_constant()) return "nonzero constant";
    if (q.terms().size() == 1) {
      if (term_nonzero_given(q.terms().begin()->first, r, "")) return "monomial in nonzero symbols";
      return std::nullopt;
    }
    if (same_sign(q) && even_powers(q)) {
      for (const auto& [mono, c] : q.terms())
        if (term_nonzero_given(mono, r, "")) return "sum of same-sign even powers with a nonzero term";
      for (const auto& s : r.not_all_zero) {
        bool covered = true;
        for (const auto& v : s) {
          bool found = false;
          for (const auto& [mono, c] : q.terms())
            if (mono.exponent(v) > 0 && term_nonzero_given(mono, r, v)) found = true;
          covered = covered && found;
        }
        if (covered) return "sum of same-sign even powers of " + set_string(s) + ", not all zero";
      }
    }
    auto syms = q.symbols();
    if (syms.size() == 1) {
      const std::string v = *syms.begin();
      auto roots = integer_roots(q, v);
      bool ok = true;
      for (const auto& z : roots) {
        if (positive_var(v) && z < 1) continue;
        auto it = r.excluded.find(v);
        if (it != r.excluded.end() && it->second.count(z)) continue;
        if (z == 0 && r.nonzero.count(v)) continue;
        ok = false;
      }
      if (ok) return "univariate in " + v + " without admissible integer roots";
    }
    return std::nullopt;
  }

  bool branch(const std::vector<Component>& comps, const Region& region, CaseNode& node) {
    // B1: a monomial; split on which unknown factor vanishes first
    for (const auto& c : comps) {
      if (c.q.terms().size() != 1) continue;
      std::vector<std::string> unknown;
      for (const auto& [v, e] : c.q.terms().begin()->first.factors())
        if (!nonzero_var(v, region)) unknown.push_back(v);
      if (unknown.empty()) continue;
      start_branch(node, c, "monomial");
      Region all = region;
      std::string label;
      for (const auto& v : unknown) {
        all.nonzero.insert(v);
        label += (label.empty() ? "" : ", ") + v + " != 0";
      }
      add_child(node, all, label);
      Region prefix = region;
      std::string prefix_label;
      for (const auto& v : unknown) {
        Region child = prefix;
        if (fix(child, v, 0)) add_child(node, child, prefix_label + v + " = 0");
        prefix.nonzero.insert(v);
        prefix_label += v + " != 0, ";
      }
      return true;
    }
    // B2: same-sign even powers; either not all of the variables vanish or all do
    for (const auto& c : comps) {
      if (c.q.terms().size() < 2 || !same_sign(c.q) || !even_powers(c.q)) continue;
      std::set<std::string> vars;
      for (const auto& v : c.q.symbols())
        if (!nonzero_var(v, region)) vars.insert(v);
      bool each_alone = !vars.empty();
      for (const auto& v : vars) {
        bool found = false;
        for (const auto& [mono, co] : c.q.terms())
          if (mono.exponent(v) > 0 && term_nonzero_given(mono, region, v)) found = true;
        each_alone = each_alone && found;
      }
      if (!each_alone) continue;
      start_branch(node, c, "sum of same-sign even powers");
      Region some = region;
      some.not_all_zero.push_back(vars);
      add_child(node, some, "not all zero " + set_string(vars));
      Region none = region;
      bool feasible = true;
      std::string label;
      for (const auto& v : vars) {
        feasible = feasible && fix(none, v, 0);
        label += (label.empty() ? "" : " = ") + v;
      }
      if (feasible) add_child(node, none, label + " = 0");
      return true;
    }
    // B3: univariate with integer roots
    for (const auto& c : comps) {
      auto syms = c.q.symbols();
      if (syms.size() != 1) continue;
      const std::string v = *syms.begin();
      if (v == "m" && !p_.m_symbolic) continue;
      std::vector<Integer> roots;
      for (const auto& z : integer_roots(c.q, v)) {
        if (positive_var(v) && z < 1) continue;
        auto it = region.excluded.find(v);
        if (it != region.excluded.end() && it->second.count(z)) continue;
        if (z == 0 && region.nonzero.count(v)) continue;
        roots.push_back(z);
      }
      if (roots.empty()) continue;
      start_branch(node, c, "integer roots of a univariate polynomial");
      Region other = region;
      std::string label;
      for (const auto& z : roots) {
        other.excluded[v].insert(z);
        label += (label.empty() ? "" : ", ") + z.get_str();
      }
      add_child(node, other, v + " not in {" + label + "}");
      for (const auto& z : roots) {
        Region child = region;
        if (fix(child, v, z)) add_child(node, child, v + " = " + z.get_str());
      }
      return true;
    }
    return false;
  }

  static bool fix(Region& r, const std::string& v, const Integer& value) {
    if (value == 0 && r.nonzero.count(v)) return false;
    auto it = r.excluded.find(v);
    if (it != r.excluded.end()) {
      if (it->second.count(value)) return false;
      r.excluded.erase(it);
    }
    r.nonzero.erase(v);
    r.fixed[v] = value;
    for (auto s = r.not_all_zero.begin(); s != r.not_all_zero.end();) {
      if (!s->count(v)) {
        ++s;
        continue;
      }
      if (value != 0) {
        s = r.not_all_zero.erase(s);
        continue;
      }
      s->erase(v);
      if (s->empty()) return false;
      ++s;
    }
    return true;
  }

  void start_branch(CaseNode& node, const Component& c, const std::string& rule) const {
    node.kind = CaseNode::Kind::Branch;
    node.branch_on = c.q;
    node.origin = c.origin;
    node.rule = rule;
  }

  void add_child(CaseNode& node, const Region& r, const std::string& label) {
    node.children.push_back(run(r, label));
  }

 private:
  const ForcingProblem& p_;
};

}  // namespace

// ---------------------------------------------------------------- regions

bool Region::known_nonzero(const std::string& v) const {
  if (nonzero.count(v)) return true;
  auto f = fixed.find(v);
  if (f != fixed.end()) return f->second != 0;
  auto e = excluded.find(v);
  return e != excluded.end() && e->second.count(0);
}

bool Region::contains(const std::map<std::string, Integer>& point) const {
  auto value = [&](const std::string& v) -> std::optional<Integer> {
    auto it = point.find(v);
    if (it == point.end()) return std::nullopt;
    return it->second;
  };
  for (const auto& [v, z] : fixed)
    if (auto p = value(v); !p || *p != z) return false;
  for (const auto& v : nonzero)
    if (auto p = value(v); !p || *p == 0) return false;
  for (const auto& [v, zs] : excluded)
    if (auto p = value(v); !p || zs.count(*p)) return false;
  for (const auto& s : not_all_zero) {
    bool any = false;
    for (const auto& v : s)
      if (auto p = value(v); p && *p != 0) any = true;
    if (!any) return false;
  }
  return true;
}

std::map<std::string, Poly> Region::bindings() const {
  std::map<std::string, Poly> b;
  for (const auto& [v, z] : fixed) b[v] = integer_poly(z);
  return b;
}

std::string Region::describe() const {
  std::vector<std::string> parts;
  for (const auto& [v, z] : fixed) parts.push_back(v + " = " + z.get_str());
  for (const auto& v : nonzero) parts.push_back(v + " != 0");
  for (const auto& [v, zs] : excluded) {
    std::string s;
    for (const auto& z : zs) s += (s.empty() ? "" : ", ") + z.get_str();
    parts.push_back(v + " not in {" + s + "}");
  }
  for (const auto& s : not_all_zero) parts.push_back("not all zero " + set_string(s));
  if (parts.empty()) return "all indices";
  std::string out;
  for (const auto& p : parts) out += (out.empty() ? "" : ", ") + p;
  return out;
}

// ---------------------------------------------------------------- components

std::map<std::tuple<int, int, int>, Poly> components(const Poly& p, const std::string& x) {
  std::map<std::tuple<int, int, int>, Poly> out;
  PiPoly den = p.denominator_lcm();
  Poly q = den.is_one() ? p : p * Scalar(den);
  for (const auto& [mono, c] : q.terms()) {
    auto [rest, e] = x.empty() ? std::pair<Monomial, int>(mono, 0) : mono.split(x);
    const auto& coeffs = c.num().coeffs();
    for (size_t k = 0; k < coeffs.size(); ++k) {
      const int kk = static_cast<int>(k);
      if (sgn(coeffs[k].im())) out[{0, e, kk}] += Poly::term(Scalar(GaussRational(coeffs[k].im())), rest);
      if (sgn(coeffs[k].re())) out[{1, e, kk}] += Poly::term(Scalar(GaussRational(coeffs[k].re())), rest);
    }
  }
  for (auto it = out.begin(); it != out.end();) {
    if (it->second.is_zero()) it = out.erase(it);
    else ++it;
  }
  return out;
}

std::vector<Integer> integer_roots(const Poly& p, const std::string& var) {
  auto coeffs = p.coefficients_in(var);
  if (coeffs.empty()) return {};
  int deg = coeffs.rbegin()->first;
  std::vector<Rational> c(deg + 1);
  for (const auto& [e, q] : coeffs) {
    auto k = q.constant();
    if (!k || !k->is_rational()) throw MathError("integer_roots: not a univariate rational polynomial: " + to_string(p));
    c[e] = k->as_rational();
  }
  Integer l = 1;
  for (const auto& r : c) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), r.get_den_mpz_t());
  std::vector<Integer> z(deg + 1);
  for (int e = 0; e <= deg; ++e) z[e] = Integer(c[e] * l);
  std::vector<Integer> roots;
  int low = 0;
  while (z[low] == 0) ++low;
  if (low > 0) roots.push_back(0);
  if (low == deg) return roots;
  Integer c0 = abs(z[low]);
  if (c0 > Integer("1000000000000"))
    throw UnsupportedError("integer roots: constant term too large to enumerate divisors: " + c0.get_str());
  auto eval = [&](const Integer& t) {
    Integer acc = 0;
    for (int e = deg; e >= low; --e) acc = acc * t + z[e];
    return acc;
  };
  std::vector<Integer> divisors;
  for (Integer d = 1; d * d <= c0; ++d) {
    if (c0 % d != 0) continue;
    divisors.push_back(d);
    if (d * d != c0) divisors.push_back(c0 / d);
  }
  std::sort(divisors.begin(), divisors.end());
  for (const auto& d : divisors) {
    if (eval(-d) == 0) roots.push_back(-d);
    if (eval(d) == 0) roots.push_back(d);
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

// ---------------------------------------------------------------- trees

CaseNode force(const ForcingProblem& problem, const Region& start) {
  Forcer f(problem);
  return f.run(start, "all indices");
}

std::vector<const CaseNode*> leaves(const CaseNode& root, CaseNode::Kind kind) {
  std::vector<const CaseNode*> out;
  std::function<void(const CaseNode&)> walk = [&](const CaseNode& n) {
    if (n.kind == CaseNode::Kind::Branch) {
      for (const auto& c : n.children) walk(c);
    } else if (n.kind == kind) {
      out.push_back(&n);
    }
  };
  walk(root);
  return out;
}

bool all_forced(const CaseNode& root) {
  if (root.kind == CaseNode::Kind::Branch)
    return std::all_of(root.children.begin(), root.children.end(), [](const CaseNode& c) { return all_forced(c); });
  return root.kind == CaseNode::Kind::Forced;
}

std::string to_string(const CaseNode& node, int indent) {
  std::string pad(indent * 2, ' ');
  std::string out = pad + "[" + node.label + "] ";
  switch (node.kind) {
    case CaseNode::Kind::Forced:
      out += "forced by " + node.origin + ": " + to_string(node.witness) + " (" + node.rule + ")\n";
      break;
    case CaseNode::Kind::Escape:
      out += "escape: every forcing polynomial vanishes on " + node.region.describe() + "\n";
      break;
    case CaseNode::Kind::Stuck:
      out += "unresolved on " + node.region.describe() + "\n";
      break;
    case CaseNode::Kind::Branch:
      out += "split on " + node.origin + ": " + to_string(node.branch_on) + " (" + node.rule + ")\n";
      for (const auto& c : node.children) out += to_string(c, indent + 1);
      break;
  }
  return out;
}

}  // namespace kod
