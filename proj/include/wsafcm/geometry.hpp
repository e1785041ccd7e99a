#pragma once

#include "wsafcm/types.hpp"

namespace wsafcm {

/// All-pairs squared Euclidean distances between the rows of a (n x 2) and
/// the rows of b (k x 2). Direct evaluation: exact zeros for coincident
/// rows and no large GEMM temporaries.
template <typename DerivedA, typename DerivedB>
DenseMatrix<typename DerivedA::Scalar> squared_distances(const Eigen::MatrixBase<DerivedA>& a,
                                                         const Eigen::MatrixBase<DerivedB>& b) {
  using Scalar = typename DerivedA::Scalar;
  DenseMatrix<Scalar> d2(a.rows(), b.rows());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    const Scalar x = a(i, 0);
    const Scalar y = a(i, 1);
    for (Eigen::Index j = 0; j < b.rows(); ++j) {
      const Scalar dx = x - b(j, 0);
      const Scalar dy = y - b(j, 1);
      d2(i, j) = dx * dx + dy * dy;
    }
  }
  return d2;
}

template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar point_distance(const Eigen::MatrixBase<DerivedA>& a,
                                         const Eigen::MatrixBase<DerivedB>& b) {
  return (a - b).norm();
}

}  // namespace wsafcm
