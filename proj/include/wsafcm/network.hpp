#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "wsafcm/rng.hpp"
#include "wsafcm/types.hpp"

namespace wsafcm {

struct Node {
  int id = 0;
  Point2d position{0.0, 0.0};  // fixed for the node's lifetime
  double residual_energy = 0.0;
  bool alive = false;
};

/// Deployment geometry and per-node budget. cluster_count <= 0 selects
/// automatic sizing, round(sqrt(n)/2).
struct NetworkConfig {
  int node_count = 200;
  double field_size = 100.0;     // side length L, metres
  double initial_energy = 0.5;   // J per node
  int cluster_count = 5;         // explicit k; <= 0 means auto
  Point2d sink_position{50.0, 50.0};

  bool auto_clusters() const { return cluster_count <= 0; }
};

inline int auto_cluster_count(int node_count) {
  int k = static_cast<int>(std::lround(std::sqrt(static_cast<double>(node_count)) / 2.0));
  if (k < 1) k = 1;
  if (k > node_count) k = node_count;
  return k;
}

/// k actually used for a network of `alive_count` nodes: the configured
/// (or auto) count, never exceeding the alive population.
inline int resolved_cluster_count(const NetworkConfig& cfg, int alive_count) {
  int k = cfg.auto_clusters() ? auto_cluster_count(cfg.node_count) : cfg.cluster_count;
  if (k > alive_count) k = alive_count;
  return k;
}

/// Throws std::invalid_argument naming the offending field.
inline void validate(const NetworkConfig& cfg) {
  if (cfg.node_count < 1)
    throw std::invalid_argument("node_count must be >= 1 (got " +
                                std::to_string(cfg.node_count) + ")");
  if (!(cfg.field_size > 0.0) || !std::isfinite(cfg.field_size))
    throw std::invalid_argument("field_size must be positive and finite");
  if (!(cfg.initial_energy > 0.0) || !std::isfinite(cfg.initial_energy))
    throw std::invalid_argument("initial_energy must be positive and finite");
  if (!cfg.auto_clusters() && cfg.cluster_count > cfg.node_count)
    throw std::invalid_argument("cluster_count (" + std::to_string(cfg.cluster_count) +
                                ") must not exceed node_count (" +
                                std::to_string(cfg.node_count) + ")");
  if (!cfg.sink_position.allFinite())
    throw std::invalid_argument("sink_position must be finite");
}

/// i.i.d. uniform deployment on [0, L]^2, one (x, y) pair per node in id
/// order. Deterministic given the seed.
inline std::vector<Node> deploy_network(const NetworkConfig& cfg, std::uint64_t seed) {
  validate(cfg);
  Rng rng(seed);
  std::vector<Node> nodes(static_cast<std::size_t>(cfg.node_count));
  for (int i = 0; i < cfg.node_count; ++i) {
    Node& n = nodes[static_cast<std::size_t>(i)];
    n.id = i;
    n.position.x() = rng.uniform(0.0, cfg.field_size);
    n.position.y() = rng.uniform(0.0, cfg.field_size);
    n.residual_energy = cfg.initial_energy;
    n.alive = true;
  }
  return nodes;
}

inline PointMatrixd positions_of(const std::vector<Node>& nodes) {
  PointMatrixd p(static_cast<Eigen::Index>(nodes.size()), 2);
  for (std::size_t i = 0; i < nodes.size(); ++i) p.row(static_cast<Eigen::Index>(i)) = nodes[i].position;
  return p;
}

/// Positions of alive nodes plus the node id backing each row.
inline PointMatrixd alive_positions(const std::vector<Node>& nodes, std::vector<int>& ids_out) {
  ids_out.clear();
  for (const Node& n : nodes)
    if (n.alive) ids_out.push_back(n.id);
  PointMatrixd p(static_cast<Eigen::Index>(ids_out.size()), 2);
  for (std::size_t i = 0; i < ids_out.size(); ++i)
    p.row(static_cast<Eigen::Index>(i)) = nodes[static_cast<std::size_t>(ids_out[i])].position;
  return p;
}

}  // namespace wsafcm
