#include "kod/linalg.hpp"

namespace kod {

namespace {

// Reduced row echelon form in place; returns pivot columns.
std::vector<Eigen::Index> rref(Mat<Scalar>& m) {
  std::vector<Eigen::Index> pivots;
  Eigen::Index row = 0;
  for (Eigen::Index c = 0; c < m.cols() && row < m.rows(); ++c) {
    Eigen::Index p = row;
    while (p < m.rows() && m(p, c).is_zero()) ++p;
    if (p == m.rows()) continue;
    m.row(p).swap(m.row(row));
    Scalar inv = m(row, c).inverse();
    for (Eigen::Index j = c; j < m.cols(); ++j) m(row, j) *= inv;
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      if (r == row || m(r, c).is_zero()) continue;
      Scalar f = m(r, c);
      for (Eigen::Index j = c; j < m.cols(); ++j)
        if (!m(row, j).is_zero()) m(r, j) -= f * m(row, j);
    }
    pivots.push_back(c);
    ++row;
  }
  return pivots;
}

}  // namespace

int rank(Mat<Scalar> m) { return static_cast<int>(rref(m).size()); }

Mat<Scalar> kernel(Mat<Scalar> m) {
  auto pivots = rref(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto c : pivots) is_pivot[c] = true;
  std::vector<Eigen::Index> free;
  for (Eigen::Index c = 0; c < m.cols(); ++c)
    if (!is_pivot[c]) free.push_back(c);
  Mat<Scalar> basis = zeros<Scalar>(m.cols(), static_cast<Eigen::Index>(free.size()));
  for (size_t k = 0; k < free.size(); ++k) {
    basis(free[k], k) = Scalar(1);
    for (size_t r = 0; r < pivots.size(); ++r) basis(pivots[r], k) = -m(r, free[k]);
  }
  return basis;
}

}  // namespace kod
