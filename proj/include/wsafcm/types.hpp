#pragma once

#include <Eigen/Dense>
#include <stdexcept>

namespace wsafcm {

// Row-per-point storage: positions, centroids and velocities are N x 2.
template <typename Scalar>
using PointMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, 2, Eigen::RowMajor>;

template <typename Scalar>
using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

template <typename Scalar>
using Point2 = Eigen::Matrix<Scalar, 1, 2>;

using PointMatrixd = PointMatrix<double>;
using DenseMatrixd = DenseMatrix<double>;
using Point2d = Point2<double>;

// Raised when an operation requires at least one alive node and none remain.
struct NetworkDepleted : std::runtime_error {
  NetworkDepleted() : std::runtime_error("no alive nodes remain") {}
};

}  // namespace wsafcm
