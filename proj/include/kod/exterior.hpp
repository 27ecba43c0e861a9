// Differential forms on a parallelizable manifold with a global frame.
//
// A form is a sparse map from multi-indices (bit masks over 1-form basis
// elements, ascending order) to polynomial coefficients. Three bases are
// used: the real coframe e^1..e^2n, coordinate differentials dx^1..dx^2n,
// and the complex coframe phi^1..phi^n, conj(phi)^1..conj(phi)^n of an
// almost complex structure (bits 0..n-1 and n..2n-1).
#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "kod/linalg.hpp"

namespace kod {

using Mask = std::uint32_t;

enum class BasisKind { Frame, Coordinate, Complex };

/// Affine self-map of the coordinate space; images[j] is the new value of
/// coordinate j.
struct LatticeShift {
  std::vector<Poly> images;
};

struct ManifoldSpec {
  std::string name;
  int dimension = 0;
  std::vector<std::string> coordinates;
  /// Periodic coordinates in declaration order, with their periods.
  std::vector<std::pair<std::string, Rational>> periodic;
  /// Row i is e_i; entry (i, j) = e_i(x_j).
  PolyMatrix frame;
  /// Row i is e^i; entry (i, j) = coefficient of dx^j.
  PolyMatrix coframe;
  std::vector<LatticeShift> lattice_shifts;
  /// Structure-only manifolds have no coordinates: d is given on the coframe
  /// by structure equations with constant coefficients, stored here as
  /// 2-forms in the frame basis.
  bool structure_only = false;
  std::vector<std::map<Mask, Poly>> structure;

  int coordinate_index(const std::string& name) const;
  bool is_periodic(const std::string& coord) const;
  std::set<std::string> symbols() const { return {coordinates.begin(), coordinates.end()}; }
};

/// Checks dimension, duality of frame and coframe, polynomial entries,
/// invariance under lattice shifts. Throws ValidationError listing every problem.
void validate_manifold(const ManifoldSpec& m);

/// Pullback of every coframe element under the shift, in coordinates.
PolyMatrix pullback_coframe(const ManifoldSpec& m, const LatticeShift& s);

class Form {
 public:
  using Terms = std::map<Mask, Poly>;

  Form() = default;
  Form(int dim, BasisKind kind, int degree) : dim_(dim), kind_(kind), degree_(degree) {}
  /// The k-th basis 1-form (0-based).
  static Form basis(int dim, BasisKind kind, int k);
  static Form function(int dim, BasisKind kind, Poly f);
  static Form monomial(int dim, BasisKind kind, Mask mask, Poly c);

  int dim() const { return dim_; }
  BasisKind kind() const { return kind_; }
  int degree() const { return degree_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  Poly coefficient(Mask mask) const;

  void add(Mask mask, const Poly& c);

  Form& operator+=(const Form& o);
  Form& operator-=(const Form& o);
  Form& operator*=(const Poly& c);
  friend Form operator+(Form a, const Form& b) { return a += b; }
  friend Form operator-(Form a, const Form& b) { return a -= b; }
  friend Form operator-(Form a) { return a *= Poly(-1); }
  friend Form operator*(const Poly& c, Form a) { return a *= c; }
  friend Form operator*(Form a, const Poly& c) { return a *= c; }
  friend bool operator==(const Form& a, const Form& b);
  friend bool operator!=(const Form& a, const Form& b) { return !(a == b); }

  Form conj() const;  // coefficientwise; meaningful in real bases
  Form substitute(const std::map<std::string, Poly>& bindings) const;

 private:
  void check_compatible(const Form& o) const;
  int dim_ = 0;
  BasisKind kind_ = BasisKind::Frame;
  int degree_ = 0;
  Terms terms_;
};

/// Sign of e^a wedge e^b for disjoint ascending masks: (-1)^(inversions).
int wedge_sign(Mask a, Mask b);
Form wedge(const Form& a, const Form& b);

/// Rewrites a form given that source basis 1-form k equals
/// sum_j m(k, j) * (target basis 1-form j).
Form change_basis(const Form& a, const PolyMatrix& m, BasisKind target);

Form frame_to_coordinates(const Form& a, const ManifoldSpec& m);
Form coordinates_to_frame(const Form& a, const ManifoldSpec& m);

/// Exterior derivative of a frame-basis form.
Form d(const Form& a, const ManifoldSpec& m);
/// Exterior derivative of a coordinate-basis form.
Form d_coordinates(const Form& a, const ManifoldSpec& m);

/// Structure equations de^i in the frame basis.
std::vector<Form> structure_equations(const ManifoldSpec& m);

std::string to_string(const Form& f, const std::vector<std::string>& basis_names);
inline std::ostream& operator<<(std::ostream& o, const Form& f) {
  std::vector<std::string> names;
  for (int k = 0; k < f.dim(); ++k) names.push_back("b" + std::to_string(k + 1));
  return o << to_string(f, names);
}
/// Default basis names: e1.., dx.., phi1.., conj(phi1)...
std::vector<std::string> default_basis_names(const ManifoldSpec& m, BasisKind kind);

}  // namespace kod
