#include "kod/spec_io.hpp"

#include <fstream>
#include <functional>
#include <optional>
#include <sstream>

#include <json.hpp>

#include "kod/expr.hpp"

namespace kod {

namespace {

using nlohmann::ordered_json;

ordered_json parse_json(const std::string& text) {
  bool blank = text.find_first_not_of(" \t\r\n") == std::string::npos;
  if (blank) throw ParseError("empty input at 1:1", 1, 1);
  try {
    return ordered_json::parse(text);
  } catch (const ordered_json::parse_error& e) {
    int line = 1, col = 1;
    for (size_t k = 0; k + 1 < e.byte && k < text.size(); ++k) {
      if (text[k] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::string what = e.what();
    auto cut = what.find("syntax error");
    throw ParseError((cut == std::string::npos ? what : what.substr(cut)) + " at " + std::to_string(line) + ":" +
                         std::to_string(col),
                     line, col);
  }
}

// Collects semantic problems; throws them all at the end.
class Problems {
 public:
  void add(const std::string& where, const std::string& what) { list_.push_back(where + ": " + what); }
  bool empty() const { return list_.empty(); }
  void raise() const {
    if (list_.empty()) return;
    std::string all;
    for (const auto& p : list_) all += (all.empty() ? "" : "\n") + p;
    throw ValidationError(all);
  }

 private:
  std::vector<std::string> list_;
};

void reject_unknown(const ordered_json& obj, std::initializer_list<const char*> allowed, const std::string& where,
                    Problems& problems) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || it.key() == a;
    if (!ok) problems.add(where, "unknown key '" + it.key() + "'");
  }
}

std::string entry_text(const ordered_json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  throw ValidationError("expected a string or integer");
}

template <class Out, class Fn>
bool parse_entry(const ordered_json& v, const std::string& where, Problems& problems, Out& out, Fn fn) {
  try {
    out = fn(entry_text(v));
    return true;
  } catch (const ParseError& e) {
    problems.add(where, e.what());
  } catch (const ValidationError& e) {
    problems.add(where, e.what());
  } catch (const MathError& e) {
    problems.add(where, e.what());
  }
  return false;
}

template <class T, class Fn>
Mat<T> parse_matrix(const ordered_json& v, int n, const std::string& where, Problems& problems, Fn fn) {
  Mat<T> m = zeros<T>(n, n);
  if (!v.is_array() || static_cast<int>(v.size()) != n) {
    problems.add(where, "expected " + std::to_string(n) + " rows");
    return m;
  }
  for (int i = 0; i < n; ++i) {
    const auto& row = v[i];
    if (!row.is_array() || static_cast<int>(row.size()) != n) {
      problems.add(where + "[" + std::to_string(i) + "]", "expected " + std::to_string(n) + " entries");
      continue;
    }
    for (int j = 0; j < n; ++j)
      parse_entry(row[j], where + "[" + std::to_string(i) + "][" + std::to_string(j) + "]", problems, m(i, j), fn);
  }
  return m;
}

std::string required_string(const ordered_json& obj, const char* key, Problems& problems) {
  if (!obj.contains(key)) {
    problems.add(key, "missing");
    return {};
  }
  if (!obj[key].is_string()) {
    problems.add(key, "expected a string");
    return {};
  }
  return obj[key].get<std::string>();
}

}  // namespace

ManifoldSpec parse_manifold(const std::string& text) {
  ordered_json j = parse_json(text);
  Problems problems;
  if (!j.is_object()) throw ValidationError("manifold file must be a JSON object");
  reject_unknown(j, {"name", "dimension", "coordinates", "periodic", "frame_vectors", "coframe", "lattice_shifts",
                     "structure_equations"},
                 "manifold", problems);
  ManifoldSpec m;
  m.name = required_string(j, "name", problems);
  if (!j.contains("dimension") || !j["dimension"].is_number_integer()) {
    problems.add("dimension", "missing or not an integer");
    problems.raise();
  }
  m.dimension = j["dimension"].get<int>();
  if (m.dimension <= 0 || m.dimension % 2 || m.dimension > 30) {
    problems.add("dimension", "must be a positive even integer");
    problems.raise();
  }
  const int n = m.dimension;
  if (j.contains("structure_equations")) {
    m.structure_only = true;
    for (const char* k : {"coordinates", "periodic", "frame_vectors", "coframe", "lattice_shifts"})
      if (j.contains(k)) problems.add(k, "not allowed together with structure_equations");
    const auto& eqs = j["structure_equations"];
    if (!eqs.is_array() || static_cast<int>(eqs.size()) != n) {
      problems.add("structure_equations", "expected " + std::to_string(n) + " entries");
      problems.raise();
    }
    for (int i = 0; i < n; ++i) {
      std::string where = "structure_equations[" + std::to_string(i) + "]";
      std::map<Mask, Poly> eq;
      if (!eqs[i].is_object()) {
        problems.add(where, "expected an object");
        continue;
      }
      for (auto it = eqs[i].begin(); it != eqs[i].end(); ++it) {
        int a = 0, b = 0;
        char tail = 0;
        if (std::sscanf(it.key().c_str(), "e%d^e%d%c", &a, &b, &tail) != 2 || a < 1 || b < 1 || a > n || b > n ||
            a == b) {
          problems.add(where, "bad term '" + it.key() + "', expected e<a>^e<b>");
          continue;
        }
        Scalar c;
        if (!parse_entry(it.value(), where + "." + it.key(), problems, c, [](const std::string& s) { return parse_scalar(s); }))
          continue;
        if (a > b) {
          std::swap(a, b);
          c = -c;
        }
        eq[(Mask(1) << (a - 1)) | (Mask(1) << (b - 1))] += Poly(c);
      }
      m.structure.push_back(std::move(eq));
    }
    problems.raise();
    validate_manifold(m);
    return m;
  }

  if (!j.contains("coordinates") || !j["coordinates"].is_array()) {
    problems.add("coordinates", "missing or not a list");
    problems.raise();
  }
  for (const auto& c : j["coordinates"]) {
    if (!c.is_string()) {
      problems.add("coordinates", "entries must be strings");
      continue;
    }
    std::string name = c.get<std::string>();
    bool ident = !name.empty() && (std::isalpha(static_cast<unsigned char>(name[0])) || name[0] == '_');
    for (char ch : name) ident = ident && (std::isalnum(static_cast<unsigned char>(ch)) || ch == '_');
    if (!ident || name == "i" || name == "pi") problems.add("coordinates", "invalid coordinate name '" + name + "'");
    m.coordinates.push_back(name);
  }
  if (static_cast<int>(m.coordinates.size()) != n)
    problems.add("coordinates", "expected " + std::to_string(n) + " coordinates");
  problems.raise();
  const std::set<std::string> declared = m.symbols();
  auto poly_of = [&](const std::string& s) { return parse_polynomial(s, &declared); };

  if (j.contains("periodic")) {
    if (!j["periodic"].is_object()) problems.add("periodic", "expected an object");
    else
      for (const auto& c : m.coordinates) {
        if (!j["periodic"].contains(c)) continue;
        Scalar p;
        if (!parse_entry(j["periodic"][c], "periodic." + c, problems, p, [](const std::string& s) { return parse_scalar(s); }))
          continue;
        if (!p.is_rational() || sgn(p.as_rational()) <= 0) problems.add("periodic." + c, "period must be a positive rational");
        else m.periodic.emplace_back(c, p.as_rational());
      }
    if (j["periodic"].is_object())
      for (auto it = j["periodic"].begin(); it != j["periodic"].end(); ++it)
        if (!declared.count(it.key())) problems.add("periodic", "'" + it.key() + "' is not a coordinate");
  }
  for (const char* key : {"frame_vectors", "coframe"})
    if (!j.contains(key)) problems.add(key, "missing");
  problems.raise();
  m.frame = parse_matrix<Poly>(j["frame_vectors"], n, "frame_vectors", problems, poly_of);
  m.coframe = parse_matrix<Poly>(j["coframe"], n, "coframe", problems, poly_of);
  if (j.contains("lattice_shifts")) {
    const auto& shifts = j["lattice_shifts"];
    if (!shifts.is_array()) problems.add("lattice_shifts", "expected a list");
    else
      for (size_t s = 0; s < shifts.size(); ++s) {
        std::string where = "lattice_shifts[" + std::to_string(s) + "]";
        if (!shifts[s].is_object()) {
          problems.add(where, "expected an object");
          continue;
        }
        LatticeShift shift;
        for (const auto& c : m.coordinates) shift.images.push_back(Poly::var(c));
        for (auto it = shifts[s].begin(); it != shifts[s].end(); ++it) {
          int k = m.coordinate_index(it.key());
          if (k < 0) {
            problems.add(where, "'" + it.key() + "' is not a coordinate");
            continue;
          }
          parse_entry(it.value(), where + "." + it.key(), problems, shift.images[k], poly_of);
        }
        m.lattice_shifts.push_back(std::move(shift));
      }
  }
  problems.raise();
  validate_manifold(m);
  return m;
}

AcsSpec parse_acs(const std::string& text, const ManifoldSpec& m) {
  ordered_json j = parse_json(text);
  Problems problems;
  if (!j.is_object()) throw ValidationError("structure file must be a JSON object");
  reject_unknown(j, {"manifold", "J"}, "structure", problems);
  AcsSpec spec;
  spec.manifold = required_string(j, "manifold", problems);
  if (!spec.manifold.empty() && spec.manifold != m.name)
    problems.add("manifold", "structure is for '" + spec.manifold + "', not '" + m.name + "'");
  if (!j.contains("J")) problems.add("J", "missing");
  problems.raise();
  const std::set<std::string> declared = m.symbols();
  spec.J = parse_matrix<Poly>(j["J"], m.dimension, "J", problems,
                              [&](const std::string& s) { return parse_polynomial(s, &declared); });
  problems.raise();
  validate_square_minus_identity(spec.J);
  return spec;
}

FamilySpec parse_family(const std::string& text) {
  ordered_json j = parse_json(text);
  Problems problems;
  if (!j.is_object()) throw ValidationError("family file must be a JSON object");
  reject_unknown(j, {"name", "base", "parameters", "radius", "J"}, "family", problems);
  FamilySpec f;
  f.name = required_string(j, "name", problems);
  std::string base = required_string(j, "base", problems);
  if (j.contains("parameters")) {
    const auto& p = j["parameters"];
    if (!p.is_array() || p.size() != 2 || !p[0].is_string() || !p[1].is_string())
      problems.add("parameters", "expected two names (real and imaginary part of t)");
    else
      f.parameters = {p[0].get<std::string>(), p[1].get<std::string>()};
  }
  if (!j.contains("radius")) problems.add("radius", "missing");
  else parse_entry(j["radius"], "radius", problems, f.radius, [](const std::string& s) { return parse_scalar(s); });
  if (!j.contains("J")) problems.add("J", "missing");
  problems.raise();
  if (!f.radius.is_real() || sign(f.radius) <= 0) problems.add("radius", "must be positive");
  f.base = load_manifold(base);
  std::set<std::string> declared(f.parameters.begin(), f.parameters.end());
  for (const auto& c : f.base.coordinates)
    if (declared.count(c)) problems.add("parameters", "'" + c + "' clashes with a coordinate");
  f.J = parse_matrix<RatFn>(j["J"], f.base.dimension, "J", problems,
                            [&](const std::string& s) { return parse_expression(s, &declared); });
  problems.raise();
  return f;
}

std::vector<Scalar> parse_samples(const std::string& text) {
  ordered_json j = parse_json(text);
  if (!j.is_array()) throw ValidationError("samples file must be a JSON list of expressions");
  Problems problems;
  std::vector<Scalar> out;
  for (size_t k = 0; k < j.size(); ++k) {
    Scalar s;
    if (parse_entry(j[k], "samples[" + std::to_string(k) + "]", problems, s, [](const std::string& t) { return parse_scalar(t); }))
      out.push_back(s);
  }
  problems.raise();
  return out;
}

namespace {

// "e1^e3" -> (mask, sign of the sorting permutation); index of each factor
// from `index_of`, which returns -1 for an unknown name.
std::pair<Mask, int> wedge_key(const std::string& key, const std::function<int(const std::string&)>& index_of) {
  std::vector<int> idx;
  size_t start = 0;
  for (;;) {
    size_t hat = key.find('^', start);
    std::string name = key.substr(start, hat == std::string::npos ? std::string::npos : hat - start);
    int k = index_of(name);
    if (k < 0) throw ValidationError("unknown basis element '" + name + "'");
    idx.push_back(k);
    if (hat == std::string::npos) break;
    start = hat + 1;
  }
  int sign = 1;
  for (size_t a = 0; a < idx.size(); ++a)
    for (size_t b = a + 1; b < idx.size(); ++b) {
      if (idx[a] == idx[b]) throw ValidationError("repeated factor in '" + key + "'");
      if (idx[a] > idx[b]) sign = -sign;
    }
  Mask mask = 0;
  for (int k : idx) mask |= Mask(1) << k;
  return {mask, sign};
}

int numbered(const std::string& name, const std::string& prefix, int limit) {
  if (name.rfind(prefix, 0) != 0 || name.size() == prefix.size()) return -1;
  std::string digits = name.substr(prefix.size());
  if (digits.find_first_not_of("0123456789") != std::string::npos || digits.size() > 3) return -1;
  int k = std::stoi(digits);
  return k >= 1 && k <= limit ? k - 1 : -1;
}

}  // namespace

GcyInput parse_gcy(const std::string& text, const AcsData& acs) {
  ordered_json j = parse_json(text);
  Problems problems;
  if (!j.is_object()) throw ValidationError("GCY input must be a JSON object");
  reject_unknown(j, {"manifold", "sigma", "epsilon"}, "gcy", problems);
  std::string name = required_string(j, "manifold", problems);
  if (!name.empty() && name != acs.manifold.name)
    problems.add("manifold", "input is for '" + name + "', not '" + acs.manifold.name + "'");
  for (const char* k : {"sigma", "epsilon"})
    if (!j.contains(k) || !j[k].is_object()) problems.add(k, "missing or not an object");
  problems.raise();
  const int dim = acs.manifold.dimension, n = dim / 2;
  const std::set<std::string> declared = acs.manifold.symbols();
  auto read = [&](const char* key, BasisKind kind, const std::function<int(const std::string&)>& index_of) {
    std::optional<Form> out;
    for (auto it = j[key].begin(); it != j[key].end(); ++it) {
      std::string where = std::string(key) + "." + it.key();
      try {
        auto [mask, sign] = wedge_key(it.key(), index_of);
        Poly c;
        if (!parse_entry(it.value(), where, problems, c, [&](const std::string& s) { return parse_polynomial(s, &declared); }))
          continue;
        int degree = __builtin_popcountll(static_cast<unsigned long long>(mask));
        if (!out) out = Form(dim, kind, degree);
        if (out->degree() != degree) {
          problems.add(where, "mixed degrees");
          continue;
        }
        out->add(mask, sign > 0 ? c : -c);
      } catch (const ValidationError& e) {
        problems.add(where, e.what());
      }
    }
    if (!out) problems.add(key, "no terms");
    return out.value_or(Form(dim, kind, 0));
  };
  GcyInput g;
  g.sigma = read("sigma", BasisKind::Frame, [&](const std::string& s) { return numbered(s, "e", dim); });
  g.epsilon = read("epsilon", BasisKind::Complex, [&](const std::string& s) {
    int k = numbered(s, "phibar", n);
    if (k >= 0) return n + k;
    return numbered(s, "phi", n);
  });
  problems.raise();
  return g;
}

GcyInput load_gcy(const std::string& ref, const AcsData& acs) {
  return parse_gcy(load_text("gcy", ref == "builtin" ? acs.manifold.name : ref), acs);
}

std::string manifold_json(const ManifoldSpec& m) {
  ordered_json j;
  j["name"] = m.name;
  j["dimension"] = m.dimension;
  auto matrix = [](const PolyMatrix& a) {
    ordered_json rows = ordered_json::array();
    for (Eigen::Index r = 0; r < a.rows(); ++r) {
      ordered_json row = ordered_json::array();
      for (Eigen::Index c = 0; c < a.cols(); ++c) row.push_back(to_string(a(r, c)));
      rows.push_back(row);
    }
    return rows;
  };
  if (m.structure_only) {
    ordered_json eqs = ordered_json::array();
    for (const auto& eq : m.structure) {
      ordered_json terms = ordered_json::object();
      for (const auto& [mask, c] : eq) {
        std::vector<int> idx;
        for (int k = 0; k < m.dimension; ++k)
          if (mask >> k & 1) idx.push_back(k + 1);
        terms["e" + std::to_string(idx[0]) + "^e" + std::to_string(idx[1])] = to_string(c);
      }
      eqs.push_back(terms);
    }
    j["structure_equations"] = eqs;
    return j.dump(2);
  }
  j["coordinates"] = m.coordinates;
  ordered_json periodic = ordered_json::object();
  for (const auto& [c, p] : m.periodic) periodic[c] = p.get_str();
  j["periodic"] = periodic;
  j["frame_vectors"] = matrix(m.frame);
  j["coframe"] = matrix(m.coframe);
  ordered_json shifts = ordered_json::array();
  for (const auto& s : m.lattice_shifts) {
    ordered_json o = ordered_json::object();
    for (size_t k = 0; k < s.images.size(); ++k)
      if (s.images[k] != Poly::var(m.coordinates[k])) o[m.coordinates[k]] = to_string(s.images[k]);
    shifts.push_back(o);
  }
  j["lattice_shifts"] = shifts;
  return j.dump(2);
}

std::string acs_json(const ManifoldSpec& m, const PolyMatrix& J) {
  ordered_json j;
  j["manifold"] = m.name;
  ordered_json rows = ordered_json::array();
  for (Eigen::Index r = 0; r < J.rows(); ++r) {
    ordered_json row = ordered_json::array();
    for (Eigen::Index c = 0; c < J.cols(); ++c) row.push_back(to_string(J(r, c)));
    rows.push_back(row);
  }
  j["J"] = rows;
  return j.dump(2);
}

std::string load_text(const std::string& kind, const std::string& ref) {
  const auto& files = builtin_files();
  auto it = files.find(kind + "/" + ref);
  if (it != files.end()) return it->second;
  std::ifstream in(ref, std::ios::binary);
  if (!in) throw ValidationError("no built-in " + kind + " named '" + ref + "' and no such file");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

ManifoldSpec load_manifold(const std::string& ref) { return parse_manifold(load_text("manifolds", ref)); }

AcsData load_acs(const ManifoldSpec& m, const std::string& ref) {
  std::string text = ref == "builtin" || ref == "standard" ? load_text("acs", m.name) : load_text("acs", ref);
  AcsSpec spec = parse_acs(text, m);
  return make_acs(m, spec.J);
}

FamilySpec load_family(const std::string& ref) { return parse_family(load_text("families", ref)); }

std::vector<Scalar> load_samples(const std::string& ref) { return parse_samples(load_text("samples", ref)); }

}  // namespace kod
