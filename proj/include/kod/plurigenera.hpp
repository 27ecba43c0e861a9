// Plurigenera P_m = dim H^0(X, K^m) for invariant almost complex structures.
//
// A section f psi^m is pseudoholomorphic iff E_j(f) = Xbar_j(f) + m a_j f = 0
// for j = 1..n, where Xbar_j are the (0,1)-fields dual to conj(phi)^j and
// alpha = sum a_j conj(phi)^j. Two ways of solving:
//  - maximum principle: the pure equations Xbar_j f = 0 give a real second
//    order operator sum X_j Xbar_j; when it is elliptic f is constant;
//  - Fourier reduction along the periodic coordinates, which turns E_j into
//    per-index systems N f_I' + M f_I = 0 in the remaining coordinate x, then
//    a case analysis over integer indices proving M has full rank for all
//    but finitely many x (so f_I = 0), and exact exponential solutions with
//    quantization conditions on the indices that escape.
#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "kod/acs.hpp"

namespace kod {

// ---------------------------------------------------------------- equations

struct SectionEquation {
  int n = 0;
  std::vector<std::string> coordinates;
  /// Xbar_j = sum_i frame_coeffs[j][i] e_i
  std::vector<std::vector<Poly>> frame_coeffs;
  /// Xbar_j = sum_k coord_coeffs[j][k] d/dx_k
  std::vector<std::vector<Poly>> coord_coeffs;
  std::vector<Poly> a;

  /// E_j(f) for a polynomial f; m may be a number or the symbol m.
  Poly apply(int j, const Poly& f, const Poly& m) const;
  /// E_j(exp(g)) / exp(g) for a polynomial exponent g.
  Poly apply_exp(int j, const Poly& g, const Poly& m) const;
};

/// Requires J with constant coefficients in the frame (UnsupportedError
/// naming the first non-constant entry otherwise).
SectionEquation build_section_equation(const AcsData& acs);

/// One real equation sum_i du_i e_i(u) + sum_i dv_i e_i(v) + cu u + cv v = 0
/// obtained from the real or imaginary part of E_j(u + iv).
struct RealEquation {
  std::vector<Poly> du, dv;
  Poly cu, cv;
};

/// 2n real equations (real part then imaginary part of each E_j), each
/// scaled to clear denominators and make rational content primitive.
std::vector<RealEquation> real_form(const SectionEquation& eq);
std::string to_string(const RealEquation& e);

// ---------------------------------------------------------------- Fourier

/// Per-index system for f = sum_I f_I(x) exp(i sum_k w_k I_k w_k) with
/// frequency w_k = 2 pi / period_k. Row r reads
/// sum_c N[r][c] d/dx f_c + M[r][c] f_c = 0, with unknowns f_I (complex
/// form) or (u_I, v_I) (real form).
struct FourierSystem {
  bool real_form = false;
  std::string x;  // non-periodic coordinate, empty if none
  std::vector<std::string> periodic;  // periodic coordinates in order
  std::vector<std::string> index;     // index symbol of each periodic coordinate
  std::vector<Rational> periods;
  std::vector<std::vector<Poly>> N, M;

  int unknowns() const { return real_form ? 2 : 1; }
  /// Rows without derivative terms.
  PolyMatrix algebraic() const;
  /// Determinant (square) or maximal minors of the algebraic part.
  std::vector<Poly> forcing_polynomials() const;
  /// Phase exponent i sum_k w_k I_k w_k as a polynomial.
  Poly phase(const std::map<std::string, Poly>& index_values) const;
};

/// Index symbols a, b, c, ... for the periodic coordinates, skipping names
/// already used by coordinates, m and i.
std::vector<std::string> index_symbols(const ManifoldSpec& m);

FourierSystem fourier_reduce(const SectionEquation& eq, const ManifoldSpec& m, bool real_form);

// ---------------------------------------------------------------- case trees

/// A set of integer index values (and values of m when m >= 1 is symbolic).
struct Region {
  std::map<std::string, Integer> fixed;
  std::set<std::string> nonzero;
  std::map<std::string, std::set<Integer>> excluded;
  std::vector<std::set<std::string>> not_all_zero;

  bool known_nonzero(const std::string& v) const;
  bool contains(const std::map<std::string, Integer>& point) const;
  std::map<std::string, Poly> bindings() const;
  std::string describe() const;
};

struct CaseNode {
  enum class Kind { Forced, Branch, Escape, Stuck };
  Kind kind = Kind::Stuck;
  std::string label;  // condition that defines this case relative to its parent
  Region region;
  // Forced: a component of a forcing polynomial that cannot vanish on the region.
  Poly witness;
  std::string origin;  // which component: "poly 1, imaginary part, x^0, pi^1"
  std::string rule;
  // Branch
  Poly branch_on;
  std::vector<CaseNode> children;
};

struct ForcingProblem {
  std::vector<Poly> polys;
  std::string x;
  std::vector<std::string> index;
  bool m_symbolic = false;  // m is a symbol ranging over integers >= 1
};

/// Case analysis proving that, on every leaf marked Forced, some forcing
/// polynomial is a nonzero polynomial in x for all integer points of the
/// leaf region. Escape leaves are regions where all of them vanish identically.
CaseNode force(const ForcingProblem& problem, const Region& start);

std::vector<const CaseNode*> leaves(const CaseNode& root, CaseNode::Kind kind);
bool all_forced(const CaseNode& root);
std::string to_string(const CaseNode& node, int indent = 0);

/// The rational components of a polynomial: coefficients of x^e pi^k in the
/// real and imaginary parts, keyed by (part, e, k) with part 0 = imaginary,
/// 1 = real, in the processing order used by force().
std::map<std::tuple<int, int, int>, Poly> components(const Poly& p, const std::string& x);

/// Integer roots of a univariate rational polynomial.
std::vector<Integer> integer_roots(const Poly& p, const std::string& var);

// ---------------------------------------------------------------- resonance

/// A section exp(g) psi^m with g linear in the coordinates.
struct ExpSection {
  std::map<std::string, Integer> index;
  Scalar lambda;
  Poly exponent;  // g
};

struct ResonanceRecord {
  Region region;       // escaped region under analysis
  std::string outcome; // "no sections", "solutions", "gap"
  std::string detail;
  Poly lambda;         // exponential rate in x, possibly in index symbols and m
  std::vector<CaseNode> subtrees;  // forcing of consistency/x-dependence/shift conditions
  std::vector<ExpSection> sections;
  std::vector<Region> gaps;
  // symbolic m: period and counts for m = 1..period
  int period = 0;
  std::vector<int> counts;
};

struct ResonanceResult {
  std::vector<ResonanceRecord> records;
  std::vector<ExpSection> sections;
  bool has_gap = false;
  bool symbolic_ok = true;  // false if the symbolic-m analysis was not possible
  int period = 1;           // symbolic: P_m depends only on m mod period
  std::vector<int> counts;  // symbolic: P_m for m = 1..period
};

/// Solves the escaped regions of a complex-form system exactly. With
/// concrete m, pass m >= 1; with m = 0 the analysis is symbolic in m.
ResonanceResult resolve_escapes(const FourierSystem& sys, const ManifoldSpec& manifold, const CaseNode& tree, long m);

/// E_j(exp g) = 0 exactly and exp g invariant under the lattice.
bool verify_section(const SectionEquation& eq, const ManifoldSpec& manifold, const FourierSystem& sys,
                    const ExpSection& s, long m);

// ---------------------------------------------------------------- strategies

struct MaxPrincipleResult {
  enum class Outcome { Constant, Unknown, NotApplicable } outcome = Outcome::NotApplicable;
  std::vector<int> pure_equations;  // j with a_j = 0
  PolyMatrix symbol;                // principal symbol in coordinates
  std::string detail;
};

MaxPrincipleResult strategy_max_principle(const SectionEquation& eq, const ManifoldSpec& m);

/// Case tree on the given system; the tree itself is returned whether or not
/// every case is forced.
CaseNode strategy_algebraic_forcing(const FourierSystem& sys, bool m_symbolic, long m = 0);

// ---------------------------------------------------------------- reports

enum class VerdictKind { VanishAllM, ExactDim, Bounds, PeriodicDim };

struct PlurigenusReport {
  std::string manifold;
  long m = 0;  // 0 means symbolic
  VerdictKind kind = VerdictKind::Bounds;
  long dim = 0;                 // ExactDim
  long lower = 0;               // Bounds
  std::optional<long> upper;    // Bounds
  std::string reason;
  int period = 0;               // PeriodicDim: P_m = counts[(m - 1) % period]
  std::vector<int> counts;
  std::vector<ExpSection> basis;
  std::vector<std::string> strategy_trace;
  std::optional<CaseNode> real_tree, complex_tree;
  std::vector<ResonanceRecord> resonance;
  bool certified = false;

  /// P_m for a concrete m when the report determines it.
  std::optional<long> value_at(long m) const;
};

/// m >= 1 for a concrete plurigenus, m = 0 for the analysis symbolic in m.
PlurigenusReport plurigenus(const AcsData& acs, long m);

std::string to_string(VerdictKind k);
std::string render_text(const PlurigenusReport& r);

}  // namespace kod
