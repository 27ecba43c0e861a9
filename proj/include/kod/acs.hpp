// Almost complex structures on a framed manifold: validation, the
// (1,0)-coframe, the canonical section psi = phi^1 ^ ... ^ phi^n with its
// defect alpha (dbar psi = alpha ^ psi), the splitting d = mu + del + dbar +
// mubar, integrability, pseudoholomorphic maps and the generalized
// Calabi-Yau conditions.
#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kod/exterior.hpp"

namespace kod {

/// Throws ValidationError naming the first entry where J^2 + I != 0.
template <class T>
void validate_square_minus_identity(const Mat<T>& j) {
  if (j.rows() != j.cols() || j.rows() % 2)
    throw ValidationError("J must be a square matrix of even size, got " + std::to_string(j.rows()) + "x" +
                          std::to_string(j.cols()));
  Mat<T> sq = mul<T>(j, j);
  if (auto diff = first_difference<T>(sq, Mat<T>(-identity<T>(j.rows())))) {
    auto [r, c] = *diff;
    throw ValidationError("J^2 != -I: entry (" + std::to_string(r + 1) + "," + std::to_string(c + 1) + ") of J^2 is " +
                          to_string(sq(r, c)));
  }
}

struct AcsData {
  ManifoldSpec manifold;
  /// J(i, j) = coefficient of e_i in J(e_j).
  PolyMatrix J;
  /// Rows phi^1..phi^n, conj(phi)^1..conj(phi)^n on the real coframe.
  PolyMatrix Q;
  /// Inverse of Q: e^i = sum_k R(i, k) theta^k, theta = (phi, conj phi).
  /// Column k also gives the vector field dual to theta^k on the frame.
  PolyMatrix R;
  Form psi;
  /// alpha = sum_j a_j conj(phi)^j.
  std::vector<Poly> alpha;

  int n() const { return manifold.dimension / 2; }
  bool constant_coefficients() const;
  Form phi(int k) const { return Form::basis(manifold.dimension, BasisKind::Complex, k); }
  Form phibar(int k) const { return Form::basis(manifold.dimension, BasisKind::Complex, n() + k); }
  Form alpha_form() const;
};

/// The (1,0)-coframe (n x 2n, rows on e^1..e^2n): the rows of
/// (I - iJ)/2, as covectors, are reduced in order against the rows already
/// chosen; a row with a remaining nonzero entry is kept, scaled so its first
/// nonzero entry is 1. Pivots must be constant.
PolyMatrix coframe10(const PolyMatrix& J);

AcsData make_acs(const ManifoldSpec& m, const PolyMatrix& J);

Form to_complex(const Form& a, const AcsData& acs);
Form to_frame(const Form& a, const AcsData& acs);

std::pair<int, int> bidegree(Mask mask, int n);

/// Components of a form by type (p, q); accepts frame or complex input.
std::map<std::pair<int, int>, Form> bidegree_split(const Form& a, const AcsData& acs);

/// d of a complex-basis form, returned in the complex basis.
Form d_complex(const Form& a, const AcsData& acs);

/// The four components of d on a homogeneous (p, q)-form. MathError on
/// non-homogeneous input.
Form mu(const Form& a, const AcsData& acs);
Form del(const Form& a, const AcsData& acs);
Form delbar(const Form& a, const AcsData& acs);
Form mubar(const Form& a, const AcsData& acs);

struct IntegrabilityResult {
  bool integrable = true;
  int witness_index = -1;  // k with mubar(phi^k) != 0
  Form witness;
};

IntegrabilityResult is_integrable(const AcsData& acs);

/// True iff dmap * J_src == J_tgt * dmap exactly.
template <class T>
bool pseudoholomorphic_check(const Mat<T>& dmap, const Mat<T>& j_src, const Mat<T>& j_tgt) {
  if (j_src.rows() != j_src.cols() || j_tgt.rows() != j_tgt.cols() || dmap.cols() != j_src.rows() ||
      dmap.rows() != j_tgt.rows())
    throw MathError("pseudoholomorphic_check: dimension mismatch (dmap " + std::to_string(dmap.rows()) + "x" +
                    std::to_string(dmap.cols()) + ", J_src " + std::to_string(j_src.rows()) + ", J_tgt " +
                    std::to_string(j_tgt.rows()) + ")");
  return !first_difference<T>(mul<T>(dmap, j_src), mul<T>(j_tgt, dmap)).has_value();
}

enum class Verdict { Pass, Fail, Unknown };
std::string to_string(Verdict v);

struct GcyCondition {
  Verdict verdict = Verdict::Unknown;
  std::string detail;
};

struct GcyReport {
  GcyCondition metric;        // g(X, Y) = sigma(X, JY) positive definite and J-Hermitian
  GcyCondition volume;        // eps ^ conj(eps) = (-1)^(n(n+1)/2) i^n sigma^n / n!
  GcyCondition parallel;      // nabla^J eps = 0
};

/// sigma: real 2-form in the frame basis; epsilon: (n,0)-form in the
/// complex basis. Throws ValidationError if sigma is not closed or degenerate.
GcyReport gcy_check(const AcsData& acs, const Form& sigma, const Form& epsilon);

/// Bracket coefficients [e_a, e_b] = sum_k c(a, b, k) e_k, when constant.
std::optional<std::vector<Scalar>> structure_constants(const ManifoldSpec& m);

}  // namespace kod
