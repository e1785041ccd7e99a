#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "wsafcm/geometry.hpp"
#include "wsafcm/types.hpp"

namespace wsafcm {

template <typename Scalar>
struct FcmConfig {
  Scalar fuzzifier = Scalar(2);    // m > 1
  Scalar tolerance = Scalar(1e-4); // max centroid displacement (m) to stop
  int max_iterations = 100;
};

using FcmConfigd = FcmConfig<double>;

template <typename Scalar>
void validate(const FcmConfig<Scalar>& cfg) {
  if (!(cfg.fuzzifier > Scalar(1)))
    throw std::invalid_argument("fuzzifier must be > 1");
  if (!(cfg.tolerance > Scalar(0)))
    throw std::invalid_argument("tolerance must be > 0");
  if (cfg.max_iterations < 0)
    throw std::invalid_argument("max_iterations must be >= 0");
}

template <typename Scalar>
struct FcmResult {
  PointMatrix<Scalar> centroids;
  DenseMatrix<Scalar> memberships;  // consistent with the returned centroids
  std::vector<Scalar> objective_history;
  int iterations_run = 0;
  bool converged = false;
};

using FcmResultd = FcmResult<double>;

/// u_ij^m, with the common m = 2 case kept off the std::pow path.
template <typename Scalar>
inline Scalar fuzzy_weight(Scalar u, Scalar fuzzifier) {
  return fuzzifier == Scalar(2) ? u * u : std::pow(u, fuzzifier);
}

/// Fuzzy membership degrees of each point in each cluster:
/// u_ij = [ sum_l (||x_i - c_j|| / ||x_i - c_l||)^(2/(m-1)) ]^-1.
/// A point coinciding with one or more centroids takes membership split
/// uniformly over the coincident centroids, zero elsewhere.
template <typename DerivedP, typename DerivedC>
DenseMatrix<typename DerivedP::Scalar> update_memberships(
    const Eigen::MatrixBase<DerivedP>& positions,
    const Eigen::MatrixBase<DerivedC>& centroids,
    typename DerivedP::Scalar fuzzifier) {
  using Scalar = typename DerivedP::Scalar;
  if (centroids.rows() < 1) throw std::invalid_argument("update_memberships: k must be >= 1");
  if (!(fuzzifier > Scalar(1))) throw std::invalid_argument("update_memberships: fuzzifier must be > 1");

  const Eigen::Index n = positions.rows();
  const Eigen::Index k = centroids.rows();
  const Scalar expo = Scalar(1) / (fuzzifier - Scalar(1));

  DenseMatrix<Scalar> u(n, k);  // filled with squared distances, then rescaled per row
  for (Eigen::Index i = 0; i < n; ++i) {
    const Scalar x = positions(i, 0);
    const Scalar y = positions(i, 1);
    Eigen::Index coincident = 0;
    Scalar dmin2 = std::numeric_limits<Scalar>::max();
    for (Eigen::Index j = 0; j < k; ++j) {
      const Scalar dx = x - centroids(j, 0);
      const Scalar dy = y - centroids(j, 1);
      u(i, j) = dx * dx + dy * dy;
      if (u(i, j) == Scalar(0)) ++coincident;
      if (u(i, j) < dmin2) dmin2 = u(i, j);
    }
    if (coincident > 0) {
      for (Eigen::Index j = 0; j < k; ++j)
        u(i, j) = u(i, j) == Scalar(0) ? Scalar(1) / Scalar(coincident) : Scalar(0);
      continue;
    }
    // Normalise by the nearest centroid so every ratio is <= 1.
    Scalar total = Scalar(0);
    for (Eigen::Index j = 0; j < k; ++j) {
      const Scalar ratio = dmin2 / u(i, j);
      u(i, j) = expo == Scalar(1) ? ratio : std::pow(ratio, expo);
      total += u(i, j);
    }
    u.row(i) /= total;
  }
  return u;
}

/// Weighted-mean centroid update: c_j = sum_i u_ij^m x_i / sum_i u_ij^m.
/// A cluster whose membership column is all zero keeps its previous centroid.
template <typename DerivedP, typename DerivedU, typename DerivedC>
PointMatrix<typename DerivedP::Scalar> update_centroids(
    const Eigen::MatrixBase<DerivedP>& positions,
    const Eigen::MatrixBase<DerivedU>& memberships,
    typename DerivedP::Scalar fuzzifier,
    const Eigen::MatrixBase<DerivedC>& previous_centroids) {
  using Scalar = typename DerivedP::Scalar;
  const Eigen::Index n = positions.rows();
  const Eigen::Index k = memberships.cols();
  if (memberships.rows() != n || previous_centroids.rows() != k)
    throw std::invalid_argument("update_centroids: inconsistent dimensions");

  std::vector<Scalar> wx(static_cast<std::size_t>(k), Scalar(0));
  std::vector<Scalar> wy(static_cast<std::size_t>(k), Scalar(0));
  std::vector<Scalar> wsum(static_cast<std::size_t>(k), Scalar(0));
  for (Eigen::Index i = 0; i < n; ++i) {
    const Scalar x = positions(i, 0);
    const Scalar y = positions(i, 1);
    for (Eigen::Index j = 0; j < k; ++j) {
      const Scalar w = fuzzy_weight(memberships(i, j), fuzzifier);
      wsum[static_cast<std::size_t>(j)] += w;
      wx[static_cast<std::size_t>(j)] += w * x;
      wy[static_cast<std::size_t>(j)] += w * y;
    }
  }

  PointMatrix<Scalar> out(k, 2);
  for (Eigen::Index j = 0; j < k; ++j) {
    const std::size_t jj = static_cast<std::size_t>(j);
    if (wsum[jj] > Scalar(0)) {
      out(j, 0) = wx[jj] / wsum[jj];
      out(j, 1) = wy[jj] / wsum[jj];
    } else {
      out.row(j) = previous_centroids.row(j);
    }
  }
  return out;
}

/// Clustering objective J_m = sum_i sum_j u_ij^m ||x_i - c_j||^2.
template <typename DerivedP, typename DerivedC, typename DerivedU>
typename DerivedP::Scalar fcm_objective(const Eigen::MatrixBase<DerivedP>& positions,
                                        const Eigen::MatrixBase<DerivedC>& centroids,
                                        const Eigen::MatrixBase<DerivedU>& memberships,
                                        typename DerivedP::Scalar fuzzifier) {
  using Scalar = typename DerivedP::Scalar;
  Scalar total = Scalar(0);
  for (Eigen::Index i = 0; i < positions.rows(); ++i) {
    const Scalar x = positions(i, 0);
    const Scalar y = positions(i, 1);
    for (Eigen::Index j = 0; j < centroids.rows(); ++j) {
      const Scalar dx = x - centroids(j, 0);
      const Scalar dy = y - centroids(j, 1);
      total += fuzzy_weight(memberships(i, j), fuzzifier) * (dx * dx + dy * dy);
    }
  }
  return total;
}

/// Alternating membership/centroid optimisation from the given initial
/// centroids. Stops when the largest centroid displacement of an iteration
/// falls below cfg.tolerance, or after cfg.max_iterations.
template <typename DerivedP, typename DerivedC>
FcmResult<typename DerivedP::Scalar> run_fcm(const Eigen::MatrixBase<DerivedP>& positions,
                                             const Eigen::MatrixBase<DerivedC>& init_centroids,
                                             const FcmConfig<typename DerivedP::Scalar>& cfg) {
  using Scalar = typename DerivedP::Scalar;
  validate(cfg);
  if (positions.rows() == 0) throw std::invalid_argument("run_fcm: empty position list");
  if (init_centroids.rows() < 1) throw std::invalid_argument("run_fcm: k must be >= 1");

  FcmResult<Scalar> result;
  result.centroids = init_centroids;
  for (int it = 1; it <= cfg.max_iterations; ++it) {
    const DenseMatrix<Scalar> u = update_memberships(positions, result.centroids, cfg.fuzzifier);
    PointMatrix<Scalar> next = update_centroids(positions, u, cfg.fuzzifier, result.centroids);
    const Scalar shift = (next - result.centroids).rowwise().norm().maxCoeff();
    result.centroids.swap(next);
    result.objective_history.push_back(
        fcm_objective(positions, result.centroids, u, cfg.fuzzifier));
    result.iterations_run = it;
    if (shift < cfg.tolerance) {
      result.converged = true;
      break;
    }
  }
  result.memberships = update_memberships(positions, result.centroids, cfg.fuzzifier);
  return result;
}

}  // namespace wsafcm
