#include "kod/exterior.hpp"

#include <bit>
#include <sstream>

namespace kod {

int ManifoldSpec::coordinate_index(const std::string& name) const {
  for (size_t k = 0; k < coordinates.size(); ++k)
    if (coordinates[k] == name) return static_cast<int>(k);
  return -1;
}

bool ManifoldSpec::is_periodic(const std::string& coord) const {
  for (const auto& [c, p] : periodic)
    if (c == coord) return true;
  return false;
}

PolyMatrix pullback_coframe(const ManifoldSpec& m, const LatticeShift& s) {
  const int n = m.dimension;
  std::map<std::string, Poly> at_image;
  for (int k = 0; k < n; ++k) at_image[m.coordinates[k]] = s.images[k];
  PolyMatrix out = zeros<Poly>(n, n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      Poly c = m.coframe(i, k).substitute(at_image);
      if (c.is_zero()) continue;
      for (int j = 0; j < n; ++j) out(i, j) += c * s.images[k].derivative(m.coordinates[j]);
    }
  return out;
}

void validate_manifold(const ManifoldSpec& m) {
  std::vector<std::string> problems;
  const int n = m.dimension;
  if (n <= 0 || n % 2) problems.push_back("dimension must be a positive even integer, got " + std::to_string(n));
  if (n > 30) problems.push_back("dimension too large");
  if (!problems.empty()) throw ValidationError(problems.front());
  if (m.structure_only) {
    if (static_cast<int>(m.structure.size()) != n)
      problems.push_back("expected " + std::to_string(n) + " structure equations");
    for (const auto& eq : m.structure)
      for (const auto& [mask, c] : eq) {
        if (std::popcount(mask) != 2 || mask >> n) problems.push_back("structure equation term is not a 2-form in the frame");
        if (!c.is_constant()) problems.push_back("structure constants must be constant");
      }
  } else {
    if (static_cast<int>(m.coordinates.size()) != n)
      problems.push_back("expected " + std::to_string(n) + " coordinates, got " + std::to_string(m.coordinates.size()));
    if (m.frame.rows() != n || m.frame.cols() != n) problems.push_back("frame_vectors must be " + std::to_string(n) + "x" + std::to_string(n));
    if (m.coframe.rows() != n || m.coframe.cols() != n) problems.push_back("coframe must be " + std::to_string(n) + "x" + std::to_string(n));
    if (!problems.empty()) {
      std::string all;
      for (const auto& p : problems) all += (all.empty() ? "" : "; ") + p;
      throw ValidationError(all);
    }
    std::set<std::string> coords(m.coordinates.begin(), m.coordinates.end());
    if (coords.size() != m.coordinates.size()) problems.push_back("duplicate coordinate names");
    for (const auto& [c, p] : m.periodic) {
      if (!coords.count(c)) problems.push_back("periodic entry '" + c + "' is not a coordinate");
      if (sgn(p) <= 0) problems.push_back("period of '" + c + "' must be positive");
    }
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (const Poly* p : {&m.frame(i, j), &m.coframe(i, j)})
          for (const auto& s : p->symbols()) {
            if (!coords.count(s)) problems.push_back("entry (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ") uses undeclared symbol '" + s + "'");
            else if (m.is_periodic(s))
              problems.push_back("entry (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ") depends on periodic coordinate '" + s + "'");
          }
    PolyMatrix pairing = mul<Poly>(m.coframe, m.frame.transpose());
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (pairing(i, j) != Poly(i == j ? 1 : 0))
          problems.push_back("coframe and frame are not dual: e^" + std::to_string(i + 1) + "(e_" + std::to_string(j + 1) +
                             ") = " + to_string(pairing(i, j)));
    for (size_t s = 0; s < m.lattice_shifts.size(); ++s) {
      const auto& shift = m.lattice_shifts[s];
      if (static_cast<int>(shift.images.size()) != n) {
        problems.push_back("lattice shift " + std::to_string(s + 1) + " must give one image per coordinate");
        continue;
      }
      bool affine = true;
      for (const auto& img : shift.images)
        if (img.degree() > 1) affine = false;
      if (!affine) {
        problems.push_back("lattice shift " + std::to_string(s + 1) + " is not affine");
        continue;
      }
      if (problems.empty()) {
        PolyMatrix pb = pullback_coframe(m, shift);
        if (auto diff = first_difference(pb, m.coframe))
          problems.push_back("lattice shift " + std::to_string(s + 1) + " does not preserve e^" + std::to_string(diff->first + 1));
      }
    }
  }
  if (!problems.empty()) {
    std::string all;
    for (const auto& p : problems) all += (all.empty() ? "" : "; ") + p;
    throw ValidationError(all);
  }
}

// ---------------------------------------------------------------- forms

Form Form::basis(int dim, BasisKind kind, int k) {
  Form f(dim, kind, 1);
  f.terms_.emplace(Mask(1) << k, Poly(1));
  return f;
}

Form Form::function(int dim, BasisKind kind, Poly c) {
  Form f(dim, kind, 0);
  f.add(0, c);
  return f;
}

Form Form::monomial(int dim, BasisKind kind, Mask mask, Poly c) {
  Form f(dim, kind, std::popcount(mask));
  f.add(mask, c);
  return f;
}

Poly Form::coefficient(Mask mask) const {
  auto it = terms_.find(mask);
  return it == terms_.end() ? Poly() : it->second;
}

void Form::add(Mask mask, const Poly& c) {
  if (c.is_zero()) return;
  if (std::popcount(mask) != degree_) throw InvariantError("term of wrong degree added to a form");
  auto [it, inserted] = terms_.try_emplace(mask, c);
  if (inserted) return;
  it->second += c;
  if (it->second.is_zero()) terms_.erase(it);
}

void Form::check_compatible(const Form& o) const {
  if (dim_ != o.dim_ || kind_ != o.kind_) throw MathError("forms live on different manifolds or bases");
}

Form& Form::operator+=(const Form& o) {
  check_compatible(o);
  if (o.is_zero()) return *this;
  if (is_zero()) degree_ = o.degree_;
  if (degree_ != o.degree_) throw MathError("sum of forms of different degrees");
  for (const auto& [mask, c] : o.terms_) add(mask, c);
  return *this;
}

Form& Form::operator-=(const Form& o) {
  check_compatible(o);
  if (o.is_zero()) return *this;
  if (is_zero()) degree_ = o.degree_;
  if (degree_ != o.degree_) throw MathError("difference of forms of different degrees");
  for (const auto& [mask, c] : o.terms_) add(mask, -c);
  return *this;
}

Form& Form::operator*=(const Poly& c) {
  if (c.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [mask, v] : terms_) v *= c;
  return *this;
}

bool operator==(const Form& a, const Form& b) {
  if (a.is_zero() && b.is_zero()) return true;
  return a.dim_ == b.dim_ && a.kind_ == b.kind_ && a.terms_ == b.terms_;
}

Form Form::conj() const {
  Form r(dim_, kind_, degree_);
  for (const auto& [mask, c] : terms_) r.terms_.emplace(mask, c.conj());
  return r;
}

Form Form::substitute(const std::map<std::string, Poly>& bindings) const {
  Form r(dim_, kind_, degree_);
  for (const auto& [mask, c] : terms_) r.add(mask, c.substitute(bindings));
  return r;
}

int wedge_sign(Mask a, Mask b) {
  // each element of a must move past the smaller elements of b
  int inversions = 0;
  while (a) {
    int k = std::countr_zero(a);
    inversions += std::popcount(b & ((Mask(1) << k) - 1));
    a &= a - 1;
  }
  return inversions & 1 ? -1 : 1;
}

Form wedge(const Form& a, const Form& b) {
  if (a.dim() != b.dim() || a.kind() != b.kind()) throw MathError("wedge of forms on different manifolds or bases");
  Form r(a.dim(), a.kind(), a.degree() + b.degree());
  for (const auto& [ma, ca] : a.terms())
    for (const auto& [mb, cb] : b.terms()) {
      if (ma & mb) continue;
      Poly c = ca * cb;
      if (wedge_sign(ma, mb) < 0) c = -c;
      r.add(ma | mb, c);
    }
  return r;
}

Form change_basis(const Form& a, const PolyMatrix& m, BasisKind target) {
  const int n = a.dim();
  std::vector<Form> images;
  images.reserve(n);
  for (int k = 0; k < n; ++k) {
    Form img(n, target, 1);
    for (int j = 0; j < n; ++j) img.add(Mask(1) << j, m(k, j));
    images.push_back(std::move(img));
  }
  Form r(n, target, a.degree());
  for (const auto& [mask, c] : a.terms()) {
    Form prod = Form::function(n, target, c);
    for (Mask rest = mask; rest; rest &= rest - 1) prod = wedge(prod, images[std::countr_zero(rest)]);
    r += prod;
  }
  return r;
}

Form frame_to_coordinates(const Form& a, const ManifoldSpec& m) {
  if (a.kind() != BasisKind::Frame) throw MathError("expected a frame-basis form");
  return change_basis(a, m.coframe, BasisKind::Coordinate);
}

Form coordinates_to_frame(const Form& a, const ManifoldSpec& m) {
  if (a.kind() != BasisKind::Coordinate) throw MathError("expected a coordinate-basis form");
  // dx^j = sum_i e_i(x_j) e^i
  return change_basis(a, m.frame.transpose(), BasisKind::Frame);
}

Form d_coordinates(const Form& a, const ManifoldSpec& m) {
  const int n = a.dim();
  Form r(n, BasisKind::Coordinate, a.degree() + 1);
  for (const auto& [mask, c] : a.terms())
    for (int j = 0; j < n; ++j) {
      if (mask >> j & 1) continue;
      Poly dc = c.derivative(m.coordinates[j]);
      if (dc.is_zero()) continue;
      r.add(mask | (Mask(1) << j), wedge_sign(Mask(1) << j, mask) < 0 ? -dc : dc);
    }
  return r;
}

namespace {

Form d_structure(const Form& a, const ManifoldSpec& m) {
  const int n = a.dim();
  std::vector<Form> de = structure_equations(m);
  Form r(n, BasisKind::Frame, a.degree() + 1);
  for (const auto& [mask, c] : a.terms()) {
    if (!c.is_constant())
      throw UnsupportedError("structure-only manifold: coefficients must be constant to differentiate");
    // d(e^{i1} ^ ... ^ e^{ik}) = sum_r (-1)^(r-1) e^{i1..} ^ de^{ir} ^ e^{..ik}
    std::vector<int> idx;
    for (Mask rest = mask; rest; rest &= rest - 1) idx.push_back(std::countr_zero(rest));
    for (size_t p = 0; p < idx.size(); ++p) {
      Form term = Form::function(n, BasisKind::Frame, p % 2 ? -c : c);
      for (size_t q = 0; q < idx.size(); ++q)
        term = wedge(term, q == p ? de[idx[q]] : Form::basis(n, BasisKind::Frame, idx[q]));
      r += term;
    }
  }
  return r;
}

}  // namespace

Form d(const Form& a, const ManifoldSpec& m) {
  if (a.kind() != BasisKind::Frame) throw MathError("d expects a frame-basis form; convert complex forms first");
  if (m.structure_only) return d_structure(a, m);
  return coordinates_to_frame(d_coordinates(frame_to_coordinates(a, m), m), m);
}

std::vector<Form> structure_equations(const ManifoldSpec& m) {
  const int n = m.dimension;
  std::vector<Form> out;
  if (m.structure_only) {
    for (const auto& eq : m.structure) {
      Form f(n, BasisKind::Frame, 2);
      for (const auto& [mask, c] : eq) f.add(mask, c);
      out.push_back(std::move(f));
    }
    return out;
  }
  for (int i = 0; i < n; ++i) out.push_back(d(Form::basis(n, BasisKind::Frame, i), m));
  return out;
}

std::vector<std::string> default_basis_names(const ManifoldSpec& m, BasisKind kind) {
  std::vector<std::string> names;
  const int n = m.dimension;
  for (int k = 0; k < n; ++k) {
    switch (kind) {
      case BasisKind::Frame: names.push_back("e" + std::to_string(k + 1)); break;
      case BasisKind::Coordinate:
        names.push_back(m.structure_only ? "dx" + std::to_string(k + 1) : "d" + m.coordinates[k]);
        break;
      case BasisKind::Complex:
        names.push_back(k < n / 2 ? "phi" + std::to_string(k + 1) : "conj(phi" + std::to_string(k - n / 2 + 1) + ")");
        break;
    }
  }
  return names;
}

std::string to_string(const Form& f, const std::vector<std::string>& names) {
  if (f.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [mask, c] : f.terms()) {
    std::string wedges;
    for (Mask rest = mask; rest; rest &= rest - 1) {
      if (!wedges.empty()) wedges += "^";
      wedges += names.at(std::countr_zero(rest));
    }
    std::string coeff = to_string(c);
    std::string term;
    if (wedges.empty()) term = coeff;
    else if (c == Poly(1)) term = wedges;
    else if (c == Poly(-1)) term = "-" + wedges;
    else if (c.terms().size() == 1 && (!c.is_constant() || is_atomic_factor(*c.constant())) &&
             (c.is_constant() || is_atomic_factor(c.terms().begin()->second)))
      term = coeff + "*" + wedges;
    else term = "(" + coeff + ")*" + wedges;
    if (first) out = term;
    else if (term[0] == '-') out += " - " + term.substr(1);
    else out += " + " + term;
    first = false;
  }
  return out;
}

}  // namespace kod
