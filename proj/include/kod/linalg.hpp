// Eigen integration for the exact scalar types and a few exact matrix
// algorithms that work over any commutative ring (determinant, minors) or
// need only invertible pivots (inverse, rank).
#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "kod/poly.hpp"

namespace Eigen {

template <class T>
struct ExactNumTraits : GenericNumTraits<T> {
  using Real = T;
  using NonInteger = T;
  using Nested = T;
  using Literal = T;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 1,
    AddCost = 3,
    MulCost = 3
  };
  static inline T epsilon() { return T(0); }
  static inline T dummy_precision() { return T(0); }
  static inline T highest() { return T(0); }
  static inline T lowest() { return T(0); }
  static inline int digits10() { return 0; }
};

template <> struct NumTraits<kod::Scalar> : ExactNumTraits<kod::Scalar> {};
template <> struct NumTraits<kod::Poly> : ExactNumTraits<kod::Poly> {};
template <> struct NumTraits<kod::RatFn> : ExactNumTraits<kod::RatFn> {};

}  // namespace Eigen

namespace kod {

template <class T>
using Mat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;
template <class T>
using Vec = Eigen::Matrix<T, Eigen::Dynamic, 1>;

using ScalarMatrix = Mat<Scalar>;
using PolyMatrix = Mat<Poly>;
using RatMatrix = Mat<RatFn>;

template <class T>
Mat<T> identity(Eigen::Index n) {
  Mat<T> m = Mat<T>::Constant(n, n, T(0));
  for (Eigen::Index k = 0; k < n; ++k) m(k, k) = T(1);
  return m;
}

template <class T>
Mat<T> zeros(Eigen::Index r, Eigen::Index c) {
  return Mat<T>::Constant(r, c, T(0));
}

/// Exact product; avoids Eigen's blocked kernels, which assume cheap scalars.
template <class T>
Mat<T> mul(const Mat<T>& a, const Mat<T>& b) {
  if (a.cols() != b.rows()) throw MathError("matrix product dimension mismatch");
  Mat<T> r = zeros<T>(a.rows(), b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index k = 0; k < a.cols(); ++k) {
      if (is_zero(a(i, k))) continue;
      for (Eigen::Index j = 0; j < b.cols(); ++j)
        if (!is_zero(b(k, j))) r(i, j) += a(i, k) * b(k, j);
    }
  return r;
}

template <class T>
bool is_zero_matrix(const Mat<T>& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      if (!is_zero(m(i, j))) return false;
  return true;
}

/// First (row, col) where a and b differ, if any.
template <class T>
std::optional<std::pair<Eigen::Index, Eigen::Index>> first_difference(const Mat<T>& a, const Mat<T>& b) {
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      if (!is_zero(T(a(i, j) - b(i, j)))) return std::make_pair(i, j);
  return std::nullopt;
}

/// Determinant by expansion over column subsets (exact over any commutative
/// ring; cost 2^n * n, fine for the sizes used here).
template <class T>
T determinant(const Mat<T>& m) {
  const Eigen::Index n = m.rows();
  if (n != m.cols()) throw MathError("determinant of a non-square matrix");
  if (n == 0) return T(1);
  if (n > 20) throw UnsupportedError("determinant of a matrix larger than 20x20");
  std::vector<T> dp(size_t(1) << n, T(0));
  dp[0] = T(1);
  for (size_t mask = 0; mask + 1 < dp.size(); ++mask) {
    if (is_zero(dp[mask])) continue;
    const int row = __builtin_popcountll(mask);
    int sign_count = 0;  // columns already used to the right of c
    for (Eigen::Index c = n - 1; c >= 0; --c) {
      if (mask >> c & 1) {
        ++sign_count;
        continue;
      }
      if (is_zero(m(row, c))) continue;
      T term = dp[mask] * m(row, c);
      if (sign_count & 1) dp[mask | (size_t(1) << c)] -= term;
      else dp[mask | (size_t(1) << c)] += term;
    }
  }
  return dp.back();
}

/// All maximal minors of a rectangular matrix, in lexicographic order of the
/// chosen row (or column) subsets.
template <class T>
std::vector<T> maximal_minors(const Mat<T>& m) {
  const bool wide = m.cols() >= m.rows();
  const Eigen::Index k = wide ? m.rows() : m.cols();
  const Eigen::Index total = wide ? m.cols() : m.rows();
  std::vector<T> out;
  std::vector<Eigen::Index> pick(k);
  for (Eigen::Index j = 0; j < k; ++j) pick[j] = j;
  for (;;) {
    Mat<T> sub(k, k);
    for (Eigen::Index a = 0; a < k; ++a)
      for (Eigen::Index b = 0; b < k; ++b) sub(a, b) = wide ? m(a, pick[b]) : m(pick[a], b);
    out.push_back(determinant(sub));
    Eigen::Index j = k - 1;
    while (j >= 0 && pick[j] == total - k + j) --j;
    if (j < 0) break;
    ++pick[j];
    for (Eigen::Index l = j + 1; l < k; ++l) pick[l] = pick[l - 1] + 1;
  }
  return out;
}

/// Inverse of an admissible pivot, or nothing. Scalars and fractions accept
/// any nonzero pivot; polynomials only nonzero constants.
inline std::optional<Scalar> pivot_inverse(const Scalar& s) {
  if (s.is_zero()) return std::nullopt;
  return s.inverse();
}
inline std::optional<Poly> pivot_inverse(const Poly& p) {
  auto c = p.constant();
  if (!c || c->is_zero()) return std::nullopt;
  return Poly(c->inverse());
}
inline std::optional<RatFn> pivot_inverse(const RatFn& r) {
  if (r.is_zero()) return std::nullopt;
  return RatFn(1) / r;
}

/// Gauss-Jordan inverse. Throws MathError if the matrix is singular or, for
/// polynomial entries, needs a non-constant pivot.
template <class T>
Mat<T> inverse(const Mat<T>& m) {
  const Eigen::Index n = m.rows();
  if (n != m.cols()) throw MathError("inverse of a non-square matrix");
  Mat<T> a = m;
  Mat<T> inv = identity<T>(n);
  for (Eigen::Index c = 0; c < n; ++c) {
    Eigen::Index p = c;
    std::optional<T> pinv;
    for (; p < n; ++p)
      if ((pinv = pivot_inverse(a(p, c)))) break;
    if (!pinv) throw MathError("matrix is not invertible with admissible pivots (column " + std::to_string(c + 1) + ")");
    a.row(p).swap(a.row(c));
    inv.row(p).swap(inv.row(c));
    for (Eigen::Index j = 0; j < n; ++j) {
      a(c, j) = a(c, j) * *pinv;
      inv(c, j) = inv(c, j) * *pinv;
    }
    for (Eigen::Index r = 0; r < n; ++r) {
      if (r == c || is_zero(a(r, c))) continue;
      T f = a(r, c);
      for (Eigen::Index j = 0; j < n; ++j) {
        if (!is_zero(a(c, j))) a(r, j) -= f * a(c, j);
        if (!is_zero(inv(c, j))) inv(r, j) -= f * inv(c, j);
      }
    }
  }
  return inv;
}

/// Rank over the field Q(i)(pi).
int rank(Mat<Scalar> m);

/// Basis of the right kernel over Q(i)(pi), as columns.
Mat<Scalar> kernel(Mat<Scalar> m);

template <class T>
Mat<T> conj(const Mat<T>& m) {
  Mat<T> r(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) r(i, j) = m(i, j).conj();
  return r;
}

template <class To, class From>
Mat<To> convert(const Mat<From>& m) {
  Mat<To> r(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) r(i, j) = To(m(i, j));
  return r;
}

template <class T>
std::string to_string(const Mat<T>& m) {
  std::string s = "[";
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    s += i ? ", [" : "[";
    for (Eigen::Index j = 0; j < m.cols(); ++j) s += (j ? ", " : "") + to_string(m(i, j));
    s += "]";
  }
  return s + "]";
}

}  // namespace kod
