#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "wsafcm/fcm.hpp"
#include "wsafcm/geometry.hpp"
#include "wsafcm/radio.hpp"
#include "wsafcm/rng.hpp"
#include "wsafcm/types.hpp"

namespace wsafcm {

template <typename Scalar>
struct WsaConfig {
  int population_size = 30;
  int iterations = 50;
  Scalar sigma = Scalar(1);    // step-size scale of the attraction terms
  Scalar inertia = Scalar(0.5);// velocity damping, 0 gives the memoryless variant
};

using WsaConfigd = WsaConfig<double>;

template <typename Scalar>
void validate(const WsaConfig<Scalar>& cfg) {
  if (cfg.population_size < 2)
    throw std::invalid_argument("population_size must be >= 2");
  if (cfg.iterations < 0) throw std::invalid_argument("iterations must be >= 0");
  if (!(cfg.sigma >= Scalar(0))) throw std::invalid_argument("sigma must be >= 0");
  if (!(cfg.inertia >= Scalar(0) && cfg.inertia <= Scalar(1)))
    throw std::invalid_argument("inertia must be in [0, 1]");
}

/// One candidate solution: k centroid positions plus their velocities and
/// the cached fitness of the current position.
template <typename Scalar>
struct StriderAgent {
  PointMatrix<Scalar> centroids;
  PointMatrix<Scalar> velocity;
  Scalar fitness = Scalar(0);
};

using StriderAgentd = StriderAgent<double>;

template <typename Scalar>
struct WsaResult {
  PointMatrix<Scalar> best_centroids;
  Scalar best_fitness = Scalar(0);
  std::vector<Scalar> convergence_curve;  // global best after each iteration
};

using WsaResultd = WsaResult<double>;

/// Energy-aware cost of a centroid set: the average over nodes of the
/// energy to reach the nearest centroid plus that centroid's energy to
/// reach the sink. Lower is better.
template <typename DerivedC, typename DerivedP>
typename DerivedP::Scalar fitness(const Eigen::MatrixBase<DerivedC>& centroids,
                                  const Eigen::MatrixBase<DerivedP>& positions,
                                  const Point2<typename DerivedP::Scalar>& sink,
                                  const RadioParams<typename DerivedP::Scalar>& radio) {
  using Scalar = typename DerivedP::Scalar;
  if (positions.rows() == 0) throw NetworkDepleted();
  if (centroids.rows() < 1) throw std::invalid_argument("fitness: k must be >= 1");

  const Eigen::Index n = positions.rows();
  const Eigen::Index k = centroids.rows();
  std::vector<Scalar> sink_cost(static_cast<std::size_t>(k));
  for (Eigen::Index j = 0; j < k; ++j)
    sink_cost[static_cast<std::size_t>(j)] =
        tx_energy(radio, radio.packet_bits, point_distance(centroids.row(j), sink));

  Scalar total = Scalar(0);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Scalar x = positions(i, 0);
    const Scalar y = positions(i, 1);
    Eigen::Index nearest = 0;
    Scalar dmin2 = std::numeric_limits<Scalar>::max();
    for (Eigen::Index j = 0; j < k; ++j) {
      const Scalar dx = x - centroids(j, 0);
      const Scalar dy = y - centroids(j, 1);
      const Scalar d2 = dx * dx + dy * dy;
      if (d2 < dmin2) {
        dmin2 = d2;
        nearest = j;
      }
    }
    total += tx_energy(radio, radio.packet_bits, std::sqrt(dmin2)) +
             sink_cost[static_cast<std::size_t>(nearest)];
  }
  return total / Scalar(n);
}

/// One synchronous surface-tension move of the whole population:
///   v <- inertia * v
///   x <- x + v + sigma * (r1 .* (x_best - x) + r2 .* (x_rand - x))
/// with r1, r2 fresh uniform [0,1) draws per coordinate and x_rand the
/// position of a uniformly chosen other agent (taken from the population
/// state at entry). Coordinates are clamped to [0, field_size]; a move
/// that worsens fitness is rolled back (elitist replacement).
template <typename Scalar, typename DerivedP>
void wsa_step(std::vector<StriderAgent<Scalar>>& population,
              const StriderAgent<Scalar>& best,
              const Eigen::MatrixBase<DerivedP>& positions,
              const Point2<Scalar>& sink, const RadioParams<Scalar>& radio,
              Scalar field_size, const WsaConfig<Scalar>& cfg, Rng& rng) {
  const std::size_t p = population.size();
  if (p < 2) throw std::invalid_argument("wsa_step: population must have >= 2 agents");

  std::vector<PointMatrix<Scalar>> snapshot(p);
  for (std::size_t i = 0; i < p; ++i) snapshot[i] = population[i].centroids;

  for (std::size_t i = 0; i < p; ++i) {
    StriderAgent<Scalar>& agent = population[i];
    std::size_t other = rng.index(p - 1);
    if (other >= i) ++other;
    const PointMatrix<Scalar>& x_rand = snapshot[other];

    agent.velocity *= cfg.inertia;
    PointMatrix<Scalar> candidate = agent.centroids + agent.velocity;
    for (Eigen::Index r = 0; r < candidate.rows(); ++r) {
      for (Eigen::Index c = 0; c < 2; ++c) {
        const Scalar r1 = static_cast<Scalar>(rng.uniform());
        const Scalar r2 = static_cast<Scalar>(rng.uniform());
        candidate(r, c) += cfg.sigma * (r1 * (best.centroids(r, c) - agent.centroids(r, c)) +
                                        r2 * (x_rand(r, c) - agent.centroids(r, c)));
        if (candidate(r, c) < Scalar(0)) candidate(r, c) = Scalar(0);
        if (candidate(r, c) > field_size) candidate(r, c) = field_size;
      }
    }

    const Scalar candidate_fitness = fitness(candidate, positions, sink, radio);
    if (candidate_fitness <= agent.fitness) {
      agent.centroids.swap(candidate);
      agent.fitness = candidate_fitness;
    }
  }
}

/// Global search for k centroid positions: a population of agents with
/// uniform-random initial centroids and zero velocity, stepped
/// cfg.iterations times while tracking the best solution ever seen.
template <typename DerivedP>
WsaResult<typename DerivedP::Scalar> run_wsa(const Eigen::MatrixBase<DerivedP>& positions,
                                             const Point2<typename DerivedP::Scalar>& sink,
                                             const RadioParams<typename DerivedP::Scalar>& radio,
                                             int k,
                                             typename DerivedP::Scalar field_size,
                                             const WsaConfig<typename DerivedP::Scalar>& cfg,
                                             Rng& rng) {
  using Scalar = typename DerivedP::Scalar;
  validate(cfg);
  if (k < 1) throw std::invalid_argument("run_wsa: k must be >= 1");
  if (positions.rows() == 0) throw NetworkDepleted();

  std::vector<StriderAgent<Scalar>> population(static_cast<std::size_t>(cfg.population_size));
  for (auto& agent : population) {
    agent.centroids.resize(k, 2);
    for (Eigen::Index r = 0; r < k; ++r)
      for (Eigen::Index c = 0; c < 2; ++c)
        agent.centroids(r, c) = static_cast<Scalar>(rng.uniform()) * field_size;
    agent.velocity = PointMatrix<Scalar>::Zero(k, 2);
    agent.fitness = fitness(agent.centroids, positions, sink, radio);
  }

  StriderAgent<Scalar> best = population[0];
  for (const auto& agent : population)
    if (agent.fitness < best.fitness) best = agent;

  WsaResult<Scalar> result;
  result.convergence_curve.reserve(static_cast<std::size_t>(cfg.iterations));
  for (int it = 0; it < cfg.iterations; ++it) {
    wsa_step(population, best, positions, sink, radio, field_size, cfg, rng);
    for (const auto& agent : population)
      if (agent.fitness < best.fitness) best = agent;
    result.convergence_curve.push_back(best.fitness);
  }
  result.best_centroids = best.centroids;
  result.best_fitness = best.fitness;
  return result;
}

template <typename Scalar>
struct HybridWeights {
  Scalar alpha = Scalar(1);
  Scalar beta = Scalar(0);
  Scalar gamma = Scalar(0);
};

using HybridWeightsd = HybridWeights<double>;

/// Weighted diagnostic objective combining the energy fitness, the fuzzy
/// clustering objective and the mean residual-energy deficit relative to
/// the initial per-node budget. Not used to drive the search.
template <typename DerivedC, typename DerivedU, typename DerivedP, typename DerivedE>
typename DerivedP::Scalar hybrid_objective(const Eigen::MatrixBase<DerivedC>& centroids,
                                           const Eigen::MatrixBase<DerivedU>& memberships,
                                           typename DerivedP::Scalar fuzzifier,
                                           const Eigen::MatrixBase<DerivedP>& positions,
                                           const Eigen::MatrixBase<DerivedE>& residual_energies,
                                           typename DerivedP::Scalar initial_energy,
                                           const Point2<typename DerivedP::Scalar>& sink,
                                           const RadioParams<typename DerivedP::Scalar>& radio,
                                           const HybridWeights<typename DerivedP::Scalar>& weights) {
  using Scalar = typename DerivedP::Scalar;
  if (weights.alpha < Scalar(0) || weights.beta < Scalar(0) || weights.gamma < Scalar(0))
    throw std::invalid_argument("hybrid_objective: weights must be non-negative");

  Scalar value = Scalar(0);
  if (weights.alpha > Scalar(0))
    value += weights.alpha * fitness(centroids, positions, sink, radio);
  if (weights.beta > Scalar(0))
    value += weights.beta * fcm_objective(positions, centroids, memberships, fuzzifier);
  if (weights.gamma > Scalar(0)) {
    const Scalar deficit = initial_energy - residual_energies.mean();
    value += weights.gamma * deficit;
  }
  return value;
}

}  // namespace wsafcm
