#include "wsafcm/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace wsafcm {

std::string strategy_name(Strategy s) {
  switch (s) {
    case Strategy::WsaFcm: return "wsa-fcm";
    case Strategy::FcmOnly: return "fcm-only";
    case Strategy::RandomCh: return "random";
  }
  return "unknown";
}

Strategy strategy_from_name(const std::string& name) {
  if (name == "wsa-fcm") return Strategy::WsaFcm;
  if (name == "fcm-only") return Strategy::FcmOnly;
  if (name == "random" || name == "random-ch") return Strategy::RandomCh;
  throw std::invalid_argument("unknown strategy '" + name +
                              "' (expected wsa-fcm, fcm-only or random)");
}

void validate(const ProtocolConfig& cfg) {
  validate(cfg.wsa);
  validate(cfg.fcm);
  if (cfg.recluster_period < 1)
    throw std::invalid_argument("recluster_period must be >= 1");
  if (cfg.round_cap < 1) throw std::invalid_argument("round_cap must be >= 1");
}

namespace {

// Crisp 0/1 memberships by nearest centroid, ties to the lower index.
DenseMatrixd crisp_memberships(Eigen::Ref<const PointMatrixd> positions,
                               Eigen::Ref<const PointMatrixd> centroids) {
  const DenseMatrixd d2 = squared_distances(positions, centroids);
  DenseMatrixd u = DenseMatrixd::Zero(positions.rows(), centroids.rows());
  for (Eigen::Index i = 0; i < positions.rows(); ++i) {
    Eigen::Index nearest = 0;
    d2.row(i).minCoeff(&nearest);
    u(i, nearest) = 1.0;
  }
  return u;
}

}  // namespace

Clustering form_clusters(Strategy strategy, const std::vector<Node>& nodes,
                         const NetworkConfig& config, const RadioParamsd& radio,
                         const ProtocolConfig& protocol, Rng& rng) {
  Clustering out;
  const PointMatrixd alive = alive_positions(nodes, out.member_ids);
  if (alive.rows() == 0) throw NetworkDepleted();
  const int k = resolved_cluster_count(config, static_cast<int>(alive.rows()));

  switch (strategy) {
    case Strategy::WsaFcm: {
      WsaResultd search =
          run_wsa(alive, config.sink_position, radio, k, config.field_size, protocol.wsa, rng);
      const FcmResultd refined = run_fcm(alive, search.best_centroids, protocol.fcm);
      out.centroids = refined.centroids;
      out.memberships = refined.memberships;
      out.wsa_curve = std::move(search.convergence_curve);
      break;
    }
    case Strategy::FcmOnly: {
      PointMatrixd init(k, 2);
      for (Eigen::Index r = 0; r < k; ++r)
        for (Eigen::Index c = 0; c < 2; ++c) init(r, c) = rng.uniform() * config.field_size;
      const FcmResultd refined = run_fcm(alive, init, protocol.fcm);
      out.centroids = refined.centroids;
      out.memberships = refined.memberships;
      break;
    }
    case Strategy::RandomCh: {
      // Partial Fisher-Yates over the alive rows: k distinct picks.
      std::vector<Eigen::Index> rows(static_cast<std::size_t>(alive.rows()));
      for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = static_cast<Eigen::Index>(i);
      out.centroids.resize(k, 2);
      for (int j = 0; j < k; ++j) {
        const std::size_t pick = static_cast<std::size_t>(j) + rng.index(rows.size() - static_cast<std::size_t>(j));
        std::swap(rows[static_cast<std::size_t>(j)], rows[pick]);
        out.centroids.row(j) = alive.row(rows[static_cast<std::size_t>(j)]);
      }
      out.memberships = crisp_memberships(alive, out.centroids);
      break;
    }
  }
  return out;
}

ClusterAssignment elect_cluster_heads(const std::vector<Node>& nodes, const Clustering& clustering) {
  const Eigen::Index k = clustering.centroids.rows();
  ClusterAssignment out;
  out.centroids = clustering.centroids;
  out.memberships = clustering.memberships;
  out.member_ids = clustering.member_ids;
  out.cluster_of.assign(nodes.size(), -1);
  out.cluster_heads.assign(static_cast<std::size_t>(k), -1);

  for (std::size_t row = 0; row < clustering.member_ids.size(); ++row) {
    const int id = clustering.member_ids[row];
    if (!nodes[static_cast<std::size_t>(id)].alive) continue;
    Eigen::Index best_cluster = 0;
    double best_u = clustering.memberships(static_cast<Eigen::Index>(row), 0);
    for (Eigen::Index j = 1; j < k; ++j) {
      const double u = clustering.memberships(static_cast<Eigen::Index>(row), j);
      if (u > best_u) {
        best_u = u;
        best_cluster = j;
      }
    }
    out.cluster_of[static_cast<std::size_t>(id)] = static_cast<int>(best_cluster);
  }

  std::vector<double> head_energy(static_cast<std::size_t>(k));
  std::vector<double> head_d2(static_cast<std::size_t>(k));
  for (const Node& node : nodes) {
    const int c = out.cluster_of[static_cast<std::size_t>(node.id)];
    if (c < 0) continue;
    const double d2 = (node.position - out.centroids.row(c)).squaredNorm();
    int& head = out.cluster_heads[static_cast<std::size_t>(c)];
    if (head < 0 || node.residual_energy > head_energy[static_cast<std::size_t>(c)] ||
        (node.residual_energy == head_energy[static_cast<std::size_t>(c)] &&
         d2 < head_d2[static_cast<std::size_t>(c)])) {
      head = node.id;
      head_energy[static_cast<std::size_t>(c)] = node.residual_energy;
      head_d2[static_cast<std::size_t>(c)] = d2;
    }
  }
  return out;
}

namespace {

// Deduct cost if affordable and return true; otherwise zero the node out,
// mark it dead and return false. A node landing exactly on zero is dead.
bool charge(Node& node, double cost, double& spent, std::vector<int>& dead) {
  if (node.residual_energy >= cost) {
    node.residual_energy -= cost;
    spent += cost;
    if (node.residual_energy <= 0.0) {
      node.residual_energy = 0.0;
      node.alive = false;
      dead.push_back(node.id);
    }
    return true;
  }
  spent += node.residual_energy;
  node.residual_energy = 0.0;
  node.alive = false;
  dead.push_back(node.id);
  return false;
}

}  // namespace

double intra_cluster_distance(const ClusterAssignment& assignment,
                              Eigen::Ref<const PointMatrixd> positions) {
  double total = 0.0;
  int count = 0;
  for (std::size_t id = 0; id < assignment.cluster_of.size(); ++id) {
    const int c = assignment.cluster_of[id];
    if (c < 0) continue;
    const int head = assignment.cluster_heads[static_cast<std::size_t>(c)];
    if (head < 0 || head == static_cast<int>(id)) continue;
    total += (positions.row(static_cast<Eigen::Index>(id)) - positions.row(head)).norm();
    ++count;
  }
  return count > 0 ? total / count : 0.0;
}

RoundLog run_round(std::vector<Node>& nodes, const ClusterAssignment& assignment,
                   const Point2d& sink, const RadioParamsd& radio) {
  RoundLog log;
  log.assignment = assignment;

  PointMatrixd positions(static_cast<Eigen::Index>(nodes.size()), 2);
  for (const Node& n : nodes) positions.row(n.id) = n.position;
  log.mean_intra_cluster_distance = intra_cluster_distance(assignment, positions);

  const double bits = radio.packet_bits;
  const std::size_t k = assignment.cluster_heads.size();
  std::vector<int> received(k, 0);

  // Members transmit to their head, in node-id order.
  for (Node& node : nodes) {
    if (!node.alive) continue;
    const int c = assignment.cluster_of[static_cast<std::size_t>(node.id)];
    if (c < 0) continue;
    const int head = assignment.cluster_heads[static_cast<std::size_t>(c)];
    if (head < 0 || head == node.id) continue;
    const double d = (node.position - nodes[static_cast<std::size_t>(head)].position).norm();
    if (charge(node, tx_energy(radio, bits, d), log.spent_energy, log.dead_this_round))
      ++received[static_cast<std::size_t>(c)];
  }

  // Heads receive, aggregate and forward, in cluster order. Each action is
  // paid for separately; a head that runs out stops mid-sequence.
  for (std::size_t c = 0; c < k; ++c) {
    const int head_id = assignment.cluster_heads[c];
    if (head_id < 0) continue;
    Node& head = nodes[static_cast<std::size_t>(head_id)];
    if (!head.alive) continue;

    bool active = true;
    for (int p = 0; p < received[c] && active; ++p)
      active = charge(head, rx_energy(radio, bits), log.spent_energy, log.dead_this_round);
    if (active)
      active = charge(head, aggregation_energy(radio, bits, static_cast<double>(received[c] + 1)),
                      log.spent_energy, log.dead_this_round);
    if (active) {
      const double d = (head.position - sink).norm();
      charge(head, tx_energy(radio, bits, d), log.spent_energy, log.dead_this_round);
    }
  }

  std::sort(log.dead_this_round.begin(), log.dead_this_round.end());
  for (const Node& node : nodes) {
    log.total_residual_energy += node.residual_energy;
    if (node.alive) ++log.alive_count;
  }
  return log;
}

double expected_round_energy(Eigen::Ref<const PointMatrixd> positions,
                             Eigen::Ref<const DenseMatrixd> memberships,
                             Eigen::Ref<const PointMatrixd> centroids,
                             const Point2d& sink, const RadioParamsd& radio,
                             double fuzzifier) {
  if (memberships.rows() != positions.rows() || memberships.cols() != centroids.rows())
    throw std::invalid_argument("expected_round_energy: inconsistent dimensions");
  const double bits = radio.packet_bits;
  const double agg = aggregation_energy(radio, bits, 1.0);

  double total = 0.0;
  for (Eigen::Index i = 0; i < positions.rows(); ++i)
    for (Eigen::Index j = 0; j < centroids.rows(); ++j)
      total += fuzzy_weight(memberships(i, j), fuzzifier) *
               (tx_energy(radio, bits, (positions.row(i) - centroids.row(j)).norm()) + agg);
  for (Eigen::Index j = 0; j < centroids.rows(); ++j)
    total += tx_energy(radio, bits, point_distance(centroids.row(j), sink));
  return total;
}

namespace {

// Eq-style diagnostic over the currently alive members of an assignment.
double round_energy_diagnostic(const std::vector<Node>& nodes, const ClusterAssignment& a,
                               const Point2d& sink, const RadioParamsd& radio,
                               double fuzzifier) {
  std::vector<Eigen::Index> rows;
  for (std::size_t row = 0; row < a.member_ids.size(); ++row)
    if (nodes[static_cast<std::size_t>(a.member_ids[row])].alive)
      rows.push_back(static_cast<Eigen::Index>(row));
  PointMatrixd positions(static_cast<Eigen::Index>(rows.size()), 2);
  DenseMatrixd memberships(static_cast<Eigen::Index>(rows.size()), a.memberships.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const int id = a.member_ids[static_cast<std::size_t>(rows[i])];
    positions.row(static_cast<Eigen::Index>(i)) = nodes[static_cast<std::size_t>(id)].position;
    memberships.row(static_cast<Eigen::Index>(i)) = a.memberships.row(rows[i]);
  }
  return expected_round_energy(positions, memberships, a.centroids, sink, radio, fuzzifier);
}

}  // namespace

SimulationTrace simulate(const NetworkConfig& network, const RadioParamsd& radio,
                         Strategy strategy, const ProtocolConfig& protocol,
                         std::uint64_t seed) {
  validate(network);
  validate(protocol);
  if (!radio.valid()) throw std::invalid_argument("radio parameters must be strictly positive");

  SimulationTrace trace;
  trace.network = network;
  trace.radio = radio;
  trace.protocol = protocol;
  trace.strategy = strategy;
  trace.seed = seed;

  std::vector<Node> nodes = deploy_network(network, Rng::derive(seed, 0));
  Rng rng(Rng::derive(seed, 1));
  trace.positions = positions_of(nodes);

  Clustering clustering;
  bool have_clustering = false;
  for (int round = 1; round <= protocol.round_cap; ++round) {
    if (!have_clustering || (round - 1) % protocol.recluster_period == 0) {
      clustering = form_clusters(strategy, nodes, network, radio, protocol, rng);
      if (!have_clustering) trace.first_round_wsa_curve = clustering.wsa_curve;
      have_clustering = true;
    }
    const ClusterAssignment assignment = elect_cluster_heads(nodes, clustering);
    const double expected =
        round_energy_diagnostic(nodes, assignment, network.sink_position, radio, protocol.fcm.fuzzifier);

    RoundLog log = run_round(nodes, assignment, network.sink_position, radio);
    log.round_index = round;
    log.expected_round_energy = expected;
    const int alive_after = log.alive_count;
    trace.rounds.push_back(std::move(log));
    trace.terminated_at = round;
    if (alive_after == 0) break;
  }
  return trace;
}

}  // namespace wsafcm
