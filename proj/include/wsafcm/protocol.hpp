#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wsafcm/fcm.hpp"
#include "wsafcm/network.hpp"
#include "wsafcm/radio.hpp"
#include "wsafcm/rng.hpp"
#include "wsafcm/types.hpp"
#include "wsafcm/wsa.hpp"

namespace wsafcm {

enum class Strategy { WsaFcm, FcmOnly, RandomCh };

std::string strategy_name(Strategy s);
Strategy strategy_from_name(const std::string& name);  // throws on unknown name

struct ProtocolConfig {
  WsaConfigd wsa;
  FcmConfigd fcm;
  int recluster_period = 1;  // rounds between clustering refreshes
  int round_cap = 5000;
};

void validate(const ProtocolConfig& cfg);

/// Output of one clustering pass over the alive nodes.
struct Clustering {
  PointMatrixd centroids;      // k x 2
  DenseMatrixd memberships;    // one row per entry of member_ids
  std::vector<int> member_ids; // alive node ids at formation, row order
  std::vector<double> wsa_curve;  // best fitness per WSA iteration (wsa-fcm only)
};

struct ClusterAssignment {
  std::vector<int> cluster_of;    // node id -> cluster index, -1 if unassigned
  std::vector<int> cluster_heads; // cluster index -> node id, -1 if empty
  PointMatrixd centroids;
  DenseMatrixd memberships;       // fuzzy degrees kept for diagnostics
  std::vector<int> member_ids;
};

struct RoundLog {
  int round_index = 0;  // 1-based
  int alive_count = 0;  // after this round's deaths
  double total_residual_energy = 0.0;
  std::vector<int> dead_this_round;  // ascending node ids
  ClusterAssignment assignment;
  double mean_intra_cluster_distance = 0.0;
  double expected_round_energy = 0.0;  // Eq-style diagnostic, not control flow
  double spent_energy = 0.0;           // includes remnants zeroed on death
};

struct SimulationTrace {
  NetworkConfig network;
  RadioParamsd radio;
  ProtocolConfig protocol;
  Strategy strategy = Strategy::WsaFcm;
  std::uint64_t seed = 0;
  PointMatrixd positions;  // deployment snapshot, row = node id
  std::vector<RoundLog> rounds;
  int terminated_at = 0;  // index of the last simulated round
  std::vector<double> first_round_wsa_curve;  // enough to replot the search convergence
};

/// Cluster the alive nodes with the chosen strategy. WsaFcm runs the
/// global search and refines with FCM; FcmOnly refines uniform-random
/// initial centroids; RandomCh picks k distinct alive nodes as centroids
/// with crisp nearest-centroid memberships. k is reduced to the alive
/// count when fewer nodes remain. Throws NetworkDepleted when none do.
Clustering form_clusters(Strategy strategy, const std::vector<Node>& nodes,
                         const NetworkConfig& config, const RadioParamsd& radio,
                         const ProtocolConfig& protocol, Rng& rng);

/// Crisp assignment (per-node membership argmax, ties to the lower cluster
/// index) and per-cluster head election: highest residual energy, then
/// smallest distance to the centroid, then lowest node id. Dead members
/// are dropped; clusters left empty get no head.
ClusterAssignment elect_cluster_heads(const std::vector<Node>& nodes, const Clustering& clustering);

/// One data round. Members transmit to their cluster head, heads receive,
/// aggregate (own signal included) and forward to the sink. A node whose
/// residual cannot cover its next action does nothing further this round:
/// its remaining energy is zeroed (counted in spent_energy) and it is
/// marked dead.
RoundLog run_round(std::vector<Node>& nodes, const ClusterAssignment& assignment,
                   const Point2d& sink, const RadioParamsd& radio);

/// Mean distance from each assigned non-head member to its cluster head.
/// Zero when there are no such members.
double intra_cluster_distance(const ClusterAssignment& assignment,
                              Eigen::Ref<const PointMatrixd> positions);

/// Diagnostic round-cost prediction:
///   sum_ij u_ij^m (E_tx(d_ij) + E_agg) + sum_j E_tx(d_j_sink)
/// with member-to-centroid and centroid-to-sink distances.
double expected_round_energy(Eigen::Ref<const PointMatrixd> positions,
                             Eigen::Ref<const DenseMatrixd> memberships,
                             Eigen::Ref<const PointMatrixd> centroids,
                             const Point2d& sink, const RadioParamsd& radio,
                             double fuzzifier);

/// Full discrete-round simulation: deploy, then cluster / elect / run
/// rounds until every node is dead or the round cap is hit. Clustering is
/// refreshed every protocol.recluster_period rounds; head election runs
/// every round. Deterministic given the seed (deployment and protocol
/// randomness use SplitMix64-derived sub-streams 0 and 1 of the seed).
SimulationTrace simulate(const NetworkConfig& network, const RadioParamsd& radio,
                         Strategy strategy, const ProtocolConfig& protocol,
                         std::uint64_t seed);

}  // namespace wsafcm
