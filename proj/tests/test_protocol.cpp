#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "wsafcm/metrics.hpp"
#include "wsafcm/protocol.hpp"

using namespace wsafcm;

namespace {

const RadioParamsd kRadio{};

std::vector<Node> make_nodes(const std::vector<oracle::P2>& positions, double energy) {
  std::vector<Node> nodes(positions.size());
  for (std::size_t i = 0; i < positions.size(); ++i) {
    nodes[i].id = int(i);
    nodes[i].position = Point2d{positions[i].x, positions[i].y};
    nodes[i].residual_energy = energy;
    nodes[i].alive = energy > 0.0;
  }
  return nodes;
}

ProtocolConfig fast_protocol() {
  ProtocolConfig p;
  p.wsa.population_size = 10;
  p.wsa.iterations = 15;
  return p;
}

}  // namespace

TEST_CASE("strategy names round-trip") {
  for (Strategy s : {Strategy::WsaFcm, Strategy::FcmOnly, Strategy::RandomCh})
    CHECK(strategy_from_name(strategy_name(s)) == s);
  CHECK_THROWS_AS(strategy_from_name("leach"), std::invalid_argument);
}

TEST_CASE("protocol config validation") {
  ProtocolConfig cfg;
  cfg.recluster_period = 0;
  CHECK_THROWS_WITH_AS(validate(cfg), doctest::Contains("recluster_period"),
                       std::invalid_argument);
  cfg = ProtocolConfig{};
  cfg.round_cap = 0;
  CHECK_THROWS_WITH_AS(validate(cfg), doctest::Contains("round_cap"), std::invalid_argument);
  cfg = ProtocolConfig{};
  cfg.wsa.population_size = 1;
  CHECK_THROWS_WITH_AS(validate(cfg), doctest::Contains("population_size"),
                       std::invalid_argument);
  cfg = ProtocolConfig{};
  cfg.wsa.inertia = 1.5;
  CHECK_THROWS_WITH_AS(validate(cfg), doctest::Contains("inertia"), std::invalid_argument);
}

TEST_CASE("random strategy with k equal to the alive count is a bijection") {
  NetworkConfig cfg;
  cfg.node_count = 6;
  cfg.cluster_count = 6;
  auto nodes = deploy_network(cfg, 11);
  Rng rng(5);
  const Clustering clustering =
      form_clusters(Strategy::RandomCh, nodes, cfg, kRadio, fast_protocol(), rng);

  REQUIRE(clustering.centroids.rows() == 6);
  std::vector<int> cluster_of_node(6, -1);
  for (int i = 0; i < 6; ++i) {
    int assigned = 0;
    for (int j = 0; j < 6; ++j)
      if (clustering.memberships(i, j) == 1.0) {
        cluster_of_node[std::size_t(i)] = j;
        ++assigned;
      }
    CHECK(assigned == 1);
  }
  std::sort(cluster_of_node.begin(), cluster_of_node.end());
  for (int j = 0; j < 6; ++j) CHECK(cluster_of_node[std::size_t(j)] == j);
}

TEST_CASE("wsa-fcm separates two well-spaced groups") {
  std::vector<oracle::P2> positions;
  for (int i = 0; i < 4; ++i) positions.push_back({10.0 + i, 10.0});
  for (int i = 0; i < 4; ++i) positions.push_back({90.0 - i, 90.0});
  auto nodes = make_nodes(positions, 0.5);
  NetworkConfig cfg;
  cfg.node_count = 8;
  cfg.cluster_count = 2;

  Rng rng(17);
  const Clustering clustering =
      form_clusters(Strategy::WsaFcm, nodes, cfg, kRadio, fast_protocol(), rng);
  const ClusterAssignment assignment = elect_cluster_heads(nodes, clustering);

  // Nearest-group oracle: ids 0..3 together, ids 4..7 together.
  const int low_cluster = assignment.cluster_of[0];
  const int high_cluster = assignment.cluster_of[4];
  CHECK(low_cluster != high_cluster);
  for (int id = 0; id < 4; ++id) CHECK(assignment.cluster_of[std::size_t(id)] == low_cluster);
  for (int id = 4; id < 8; ++id) CHECK(assignment.cluster_of[std::size_t(id)] == high_cluster);
}

TEST_CASE("clustering is deterministic for every strategy") {
  NetworkConfig cfg;
  cfg.node_count = 12;
  cfg.cluster_count = 3;
  auto nodes = deploy_network(cfg, 2);
  for (Strategy s : {Strategy::WsaFcm, Strategy::FcmOnly, Strategy::RandomCh}) {
    CAPTURE(strategy_name(s));
    Rng a(31), b(31);
    const Clustering ca = form_clusters(s, nodes, cfg, kRadio, fast_protocol(), a);
    const Clustering cb = form_clusters(s, nodes, cfg, kRadio, fast_protocol(), b);
    CHECK(ca.centroids == cb.centroids);
    CHECK(ca.memberships == cb.memberships);
    CHECK(ca.member_ids == cb.member_ids);
  }
}

TEST_CASE("clustering requires alive nodes") {
  NetworkConfig cfg;
  cfg.node_count = 3;
  cfg.cluster_count = 1;
  auto nodes = deploy_network(cfg, 1);
  for (auto& n : nodes) {
    n.alive = false;
    n.residual_energy = 0.0;
  }
  Rng rng(1);
  CHECK_THROWS_AS(form_clusters(Strategy::RandomCh, nodes, cfg, kRadio, fast_protocol(), rng),
                  NetworkDepleted);
}

TEST_CASE("head election") {
  SUBCASE("a lone member heads its own cluster") {
    auto nodes = make_nodes({{5.0, 5.0}}, 0.5);
    Clustering clustering;
    clustering.centroids = PointMatrixd(1, 2);
    clustering.centroids << 0.0, 0.0;
    clustering.memberships = DenseMatrixd::Ones(1, 1);
    clustering.member_ids = {0};
    const ClusterAssignment a = elect_cluster_heads(nodes, clustering);
    CHECK(a.cluster_heads[0] == 0);
  }

  SUBCASE("energy ties break toward the centroid") {
    auto nodes = make_nodes({{3.0, 0.0}, {5.0, 0.0}}, 0.5);
    Clustering clustering;
    clustering.centroids = PointMatrixd(1, 2);
    clustering.centroids << 0.0, 0.0;
    clustering.memberships = DenseMatrixd::Ones(2, 1);
    clustering.member_ids = {0, 1};
    const ClusterAssignment a = elect_cluster_heads(nodes, clustering);
    CHECK(a.cluster_heads[0] == 0);  // 3 m beats 5 m at equal energy
  }

  SUBCASE("argmax assignment breaks ties toward the lower cluster") {
    auto nodes = make_nodes({{5.0, 5.0}}, 0.5);
    Clustering clustering;
    clustering.centroids = PointMatrixd(2, 2);
    clustering.centroids << 0.0, 0.0, 10.0, 10.0;
    clustering.memberships = DenseMatrixd(1, 2);
    clustering.memberships << 0.5, 0.5;
    clustering.member_ids = {0};
    const ClusterAssignment a = elect_cluster_heads(nodes, clustering);
    CHECK(a.cluster_of[0] == 0);
  }

  SUBCASE("random instances match a sort-based oracle") {
    Rng rng(404);
    for (int trial = 0; trial < 30; ++trial) {
      const int n = 8;
      const int k = 1 + int(rng.index(3));
      std::vector<oracle::P2> positions;
      for (int i = 0; i < n; ++i) positions.push_back({rng.uniform(0.0, 50.0), rng.uniform(0.0, 50.0)});
      auto nodes = make_nodes(positions, 0.5);
      for (auto& node : nodes) node.residual_energy = 0.1 * double(1 + rng.index(5));

      Clustering clustering;
      clustering.centroids.resize(k, 2);
      for (int j = 0; j < k; ++j) {
        clustering.centroids(j, 0) = rng.uniform(0.0, 50.0);
        clustering.centroids(j, 1) = rng.uniform(0.0, 50.0);
      }
      clustering.member_ids.resize(std::size_t(n));
      for (int i = 0; i < n; ++i) clustering.member_ids[std::size_t(i)] = i;
      clustering.memberships =
          update_memberships(positions_of(nodes), clustering.centroids, 2.0);

      const ClusterAssignment a = elect_cluster_heads(nodes, clustering);

      for (int j = 0; j < k; ++j) {
        // Oracle: lexicographic (max energy, min distance, min id) scan.
        int best = -1;
        for (int i = 0; i < n; ++i) {
          if (a.cluster_of[std::size_t(i)] != j) continue;
          if (best < 0) {
            best = i;
            continue;
          }
          const double eb = nodes[std::size_t(best)].residual_energy;
          const double ei = nodes[std::size_t(i)].residual_energy;
          const double db = oracle::dist({nodes[std::size_t(best)].position.x(),
                                          nodes[std::size_t(best)].position.y()},
                                         {clustering.centroids(j, 0), clustering.centroids(j, 1)});
          const double di = oracle::dist({nodes[std::size_t(i)].position.x(),
                                          nodes[std::size_t(i)].position.y()},
                                         {clustering.centroids(j, 0), clustering.centroids(j, 1)});
          if (ei > eb || (ei == eb && di < db)) best = i;
        }
        CHECK(a.cluster_heads[std::size_t(j)] == best);
        if (best >= 0) CHECK(a.cluster_of[std::size_t(best)] == j);
      }
    }
  }
}

TEST_CASE("round accounting") {
  SUBCASE("a head with no members pays aggregation plus the sink hop") {
    auto nodes = make_nodes({{0.0, 0.0}}, 0.5);
    Clustering clustering;
    clustering.centroids = PointMatrixd(1, 2);
    clustering.centroids << 0.0, 0.0;
    clustering.memberships = DenseMatrixd::Ones(1, 1);
    clustering.member_ids = {0};
    const ClusterAssignment a = elect_cluster_heads(nodes, clustering);
    const RoundLog log = run_round(nodes, a, Point2d{0.0, 50.0}, kRadio);
    CHECK(log.spent_energy == doctest::Approx(3.2768e-4).epsilon(1e-12));
    CHECK(nodes[0].residual_energy == doctest::Approx(0.5 - 3.2768e-4).epsilon(1e-12));
    CHECK(log.alive_count == 1);
  }

  SUBCASE("a member co-located with its head spends only electronics energy") {
    auto nodes = make_nodes({{10.0, 10.0}, {10.0, 10.0}}, 0.5);
    nodes[1].residual_energy = 0.6;  // node 1 wins the election
    Clustering clustering;
    clustering.centroids = PointMatrixd(1, 2);
    clustering.centroids << 10.0, 10.0;
    clustering.memberships = DenseMatrixd::Ones(2, 1);
    clustering.member_ids = {0, 1};
    const ClusterAssignment a = elect_cluster_heads(nodes, clustering);
    REQUIRE(a.cluster_heads[0] == 1);
    run_round(nodes, a, Point2d{10.0, 10.0}, kRadio);
    CHECK(0.5 - nodes[0].residual_energy ==
          doctest::Approx(4096.0 * kRadio.e_elec).epsilon(1e-12));
  }

  SUBCASE("a member that cannot afford its packet dies silently") {
    auto nodes = make_nodes({{0.0, 0.0}, {30.0, 0.0}}, 0.5);
    nodes[0].residual_energy = 1e-6;  // far below the 2e-4 packet cost
    Clustering clustering;
    clustering.centroids = PointMatrixd(1, 2);
    clustering.centroids << 30.0, 0.0;
    clustering.memberships = DenseMatrixd::Ones(2, 1);
    clustering.member_ids = {0, 1};
    const ClusterAssignment a = elect_cluster_heads(nodes, clustering);
    REQUIRE(a.cluster_heads[0] == 1);

    const double head_before = nodes[1].residual_energy;
    const RoundLog log = run_round(nodes, a, Point2d{0.0, 50.0}, kRadio);

    CHECK_FALSE(nodes[0].alive);
    CHECK(nodes[0].residual_energy == 0.0);
    CHECK(log.dead_this_round == std::vector<int>{0});
    // The head received nothing: aggregation covers only its own signal.
    const double head_spent = head_before - nodes[1].residual_energy;
    const double expected = aggregation_energy(kRadio, 4096.0, 1.0) +
                            tx_energy(kRadio, 4096.0, (nodes[1].position - Point2d{0.0, 50.0}).norm());
    CHECK(head_spent == doctest::Approx(expected).epsilon(1e-12));
    // The dying member's remnant still shows up in the spent column.
    CHECK(log.spent_energy == doctest::Approx(expected + 1e-6).epsilon(1e-9));
  }
}

TEST_CASE("expected round energy diagnostic") {
  SUBCASE("matches the literal double-loop oracle") {
    Rng rng(61);
    for (int trial = 0; trial < 120; ++trial) {
      const int n = 1 + int(rng.index(10));
      const int k = 1 + int(rng.index(3));
      std::vector<oracle::P2> pts, cts;
      for (int i = 0; i < n; ++i) pts.push_back({rng.uniform(0.0, 100.0), rng.uniform(0.0, 100.0)});
      for (int j = 0; j < k; ++j) cts.push_back({rng.uniform(0.0, 100.0), rng.uniform(0.0, 100.0)});
      const oracle::P2 sink{rng.uniform(0.0, 100.0), rng.uniform(0.0, 100.0)};

      PointMatrixd p(n, 2), c(k, 2);
      for (int i = 0; i < n; ++i) {
        p(i, 0) = pts[std::size_t(i)].x;
        p(i, 1) = pts[std::size_t(i)].y;
      }
      for (int j = 0; j < k; ++j) {
        c(j, 0) = cts[std::size_t(j)].x;
        c(j, 1) = cts[std::size_t(j)].y;
      }
      const auto u = oracle::memberships(pts, cts, 2.0);
      DenseMatrixd um(n, k);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < k; ++j) um(i, j) = u[std::size_t(i)][std::size_t(j)];

      const double expected = oracle::expected_round_energy(
          pts, u, cts, sink, kRadio.e_elec, kRadio.eps_fs, kRadio.eps_mp, kRadio.e_da,
          kRadio.packet_bits, 2.0);
      CHECK(expected_round_energy(p, um, c, Point2d{sink.x, sink.y}, kRadio, 2.0) ==
            doctest::Approx(expected).epsilon(1e-9));
    }
  }

  SUBCASE("crisp memberships with zero aggregation reduce to the two hop sums") {
    RadioParamsd no_agg = kRadio;
    no_agg.e_da = 1e-300;  // effectively zero while staying valid
    PointMatrixd p(3, 2);
    p << 0.0, 0.0, 10.0, 0.0, 0.0, 10.0;
    PointMatrixd c(2, 2);
    c << 0.0, 0.0, 10.0, 0.0;
    DenseMatrixd u = DenseMatrixd::Zero(3, 2);
    u(0, 0) = 1.0;
    u(1, 1) = 1.0;
    u(2, 0) = 1.0;
    const Point2d sink{50.0, 50.0};

    double expected = 0.0;
    expected += tx_energy(no_agg, 4096.0, 0.0) + tx_energy(no_agg, 4096.0, 0.0) +
                tx_energy(no_agg, 4096.0, 10.0);
    expected += tx_energy(no_agg, 4096.0, (c.row(0).transpose() - sink.transpose()).norm()) +
                tx_energy(no_agg, 4096.0, (c.row(1).transpose() - sink.transpose()).norm());
    CHECK(expected_round_energy(p, u, c, sink, no_agg, 2.0) ==
          doctest::Approx(expected).epsilon(1e-9));
  }

  SUBCASE("all distances zero leaves electronics and aggregation terms") {
    // One node per cluster, each on its centroid, centroids on the sink:
    // per node one zero-distance packet plus aggregation, per cluster one
    // zero-distance sink hop.
    const int n = 3;
    PointMatrixd p(n, 2);
    p << 5.0, 5.0, 5.0, 5.0, 5.0, 5.0;
    DenseMatrixd u = DenseMatrixd::Zero(n, n);
    for (int i = 0; i < n; ++i) u(i, i) = 1.0;
    const Point2d sink{5.0, 5.0};
    const double tx0 = 4096.0 * kRadio.e_elec;
    const double agg = aggregation_energy(kRadio, 4096.0, 1.0);
    CHECK(expected_round_energy(p, u, p, sink, kRadio, 2.0) ==
          doctest::Approx(n * (tx0 + agg) + n * tx0).epsilon(1e-12));
  }
}

TEST_CASE("simulation lifecycle") {
  SUBCASE("one node with a starved budget dies in round one") {
    NetworkConfig cfg;
    cfg.node_count = 1;
    cfg.cluster_count = 1;
    cfg.initial_energy = 1e-5;  // below one aggregation + sink hop
    const SimulationTrace trace = simulate(cfg, kRadio, Strategy::RandomCh, ProtocolConfig{}, 3);
    REQUIRE(trace.rounds.size() == 1);
    CHECK(trace.rounds[0].alive_count == 0);
    CHECK(trace.rounds[0].dead_this_round == std::vector<int>{0});
    const LifetimeMetrics lm = lifetime_metrics(trace);
    CHECK(lm.fnd == 1);
    CHECK(lm.lnd == 1);
    CHECK(lm.half_life == 1);
    CHECK(lm.p90_death == 1);
  }

  SUBCASE("traces are deterministic and alive counts never increase") {
    NetworkConfig cfg;
    cfg.node_count = 12;
    cfg.cluster_count = 3;
    cfg.initial_energy = 0.01;  // short lifetime keeps the test fast
    ProtocolConfig proto = fast_protocol();
    for (Strategy s : {Strategy::WsaFcm, Strategy::FcmOnly, Strategy::RandomCh}) {
      CAPTURE(strategy_name(s));
      const SimulationTrace a = simulate(cfg, kRadio, s, proto, 9);
      const SimulationTrace b = simulate(cfg, kRadio, s, proto, 9);
      REQUIRE(a.rounds.size() == b.rounds.size());
      int prev_alive = cfg.node_count;
      for (std::size_t r = 0; r < a.rounds.size(); ++r) {
        CHECK(a.rounds[r].alive_count == b.rounds[r].alive_count);
        CHECK(a.rounds[r].total_residual_energy == b.rounds[r].total_residual_energy);
        CHECK(a.rounds[r].dead_this_round == b.rounds[r].dead_this_round);
        CHECK(a.rounds[r].alive_count <= prev_alive);
        prev_alive = a.rounds[r].alive_count;
      }
      CHECK(a.rounds.back().alive_count == 0);
    }
  }

  SUBCASE("energy is conserved at every round") {
    NetworkConfig cfg;
    cfg.node_count = 15;
    cfg.cluster_count = 3;
    cfg.initial_energy = 0.02;
    const SimulationTrace trace =
        simulate(cfg, kRadio, Strategy::FcmOnly, fast_protocol(), 21);
    double before = cfg.node_count * cfg.initial_energy;
    for (const RoundLog& log : trace.rounds) {
      CHECK(std::fabs(before - log.total_residual_energy - log.spent_energy) <= 1e-9);
      before = log.total_residual_energy;
    }
  }

  SUBCASE("traces carry the diagnostics") {
    NetworkConfig cfg;
    cfg.node_count = 10;
    cfg.cluster_count = 2;
    cfg.initial_energy = 0.005;
    ProtocolConfig proto = fast_protocol();
    const SimulationTrace trace = simulate(cfg, kRadio, Strategy::WsaFcm, proto, 6);
    CHECK(trace.first_round_wsa_curve.size() == std::size_t(proto.wsa.iterations));
    for (const RoundLog& log : trace.rounds)
      if (log.alive_count > 0 || log.round_index == 1)
        CHECK(log.expected_round_energy > 0.0);
    const SimulationTrace random_trace =
        simulate(cfg, kRadio, Strategy::RandomCh, proto, 6);
    CHECK(random_trace.first_round_wsa_curve.empty());
  }

  SUBCASE("heads are alive members of their own clusters") {
    NetworkConfig cfg;
    cfg.node_count = 20;
    cfg.cluster_count = 4;
    cfg.initial_energy = 0.01;
    const SimulationTrace trace =
        simulate(cfg, kRadio, Strategy::RandomCh, ProtocolConfig{}, 5);
    for (const RoundLog& log : trace.rounds) {
      for (std::size_t c = 0; c < log.assignment.cluster_heads.size(); ++c) {
        const int head = log.assignment.cluster_heads[c];
        if (head < 0) continue;
        CHECK(log.assignment.cluster_of[std::size_t(head)] == int(c));
      }
      for (std::size_t id = 0; id < log.assignment.cluster_of.size(); ++id) {
        const int c = log.assignment.cluster_of[id];
        if (c >= 0) CHECK(log.assignment.cluster_heads[std::size_t(c)] >= 0);
      }
    }
  }

  SUBCASE("reclustering period greater than one still drains the network") {
    NetworkConfig cfg;
    cfg.node_count = 10;
    cfg.cluster_count = 3;
    cfg.initial_energy = 0.01;
    ProtocolConfig proto = fast_protocol();
    proto.recluster_period = 7;
    const SimulationTrace trace = simulate(cfg, kRadio, Strategy::WsaFcm, proto, 4);
    CHECK(trace.rounds.back().alive_count == 0);
    int prev = cfg.node_count;
    for (const RoundLog& log : trace.rounds) {
      CHECK(log.alive_count <= prev);
      prev = log.alive_count;
    }
  }

  SUBCASE("the round cap stops an undying network") {
    NetworkConfig cfg;
    cfg.node_count = 4;
    cfg.cluster_count = 2;
    cfg.initial_energy = 100.0;
    ProtocolConfig proto = fast_protocol();
    proto.round_cap = 9;
    const SimulationTrace trace = simulate(cfg, kRadio, Strategy::RandomCh, proto, 2);
    CHECK(trace.terminated_at == 9);
    CHECK(trace.rounds.size() == 9);
    CHECK(trace.rounds.back().alive_count == 4);
    const LifetimeMetrics lm = lifetime_metrics(trace);
    CHECK_FALSE(lm.fnd.has_value());
    CHECK_FALSE(lm.lnd.has_value());
  }
}

TEST_CASE("intra-cluster distance") {
  SUBCASE("members on their heads give zero") {
    auto nodes = make_nodes({{1.0, 1.0}, {1.0, 1.0}}, 0.5);
    nodes[0].residual_energy = 0.6;
    Clustering clustering;
    clustering.centroids = PointMatrixd(1, 2);
    clustering.centroids << 1.0, 1.0;
    clustering.memberships = DenseMatrixd::Ones(2, 1);
    clustering.member_ids = {0, 1};
    const ClusterAssignment a = elect_cluster_heads(nodes, clustering);
    CHECK(intra_cluster_distance(a, positions_of(nodes)) == 0.0);
  }

  SUBCASE("two members at 3 m and 5 m average to 4 m") {
    auto nodes = make_nodes({{0.0, 0.0}, {3.0, 0.0}, {0.0, 5.0}}, 0.5);
    nodes[0].residual_energy = 1.0;  // the head
    Clustering clustering;
    clustering.centroids = PointMatrixd(1, 2);
    clustering.centroids << 0.0, 0.0;
    clustering.memberships = DenseMatrixd::Ones(3, 1);
    clustering.member_ids = {0, 1, 2};
    const ClusterAssignment a = elect_cluster_heads(nodes, clustering);
    REQUIRE(a.cluster_heads[0] == 0);
    CHECK(intra_cluster_distance(a, positions_of(nodes)) == doctest::Approx(4.0));
  }

  SUBCASE("random instances match a per-node loop") {
    Rng rng(303);
    for (int trial = 0; trial < 20; ++trial) {
      NetworkConfig cfg;
      cfg.node_count = 14;
      cfg.cluster_count = 3;
      auto nodes = deploy_network(cfg, 100 + trial);
      Rng proto_rng(trial);
      const Clustering clustering =
          form_clusters(Strategy::RandomCh, nodes, cfg, kRadio, ProtocolConfig{}, proto_rng);
      const ClusterAssignment a = elect_cluster_heads(nodes, clustering);

      double total = 0.0;
      int count = 0;
      for (const Node& node : nodes) {
        const int c = a.cluster_of[std::size_t(node.id)];
        if (c < 0) continue;
        const int head = a.cluster_heads[std::size_t(c)];
        if (head == node.id) continue;
        total += (node.position - nodes[std::size_t(head)].position).norm();
        ++count;
      }
      const double expected = count > 0 ? total / count : 0.0;
      CHECK(intra_cluster_distance(a, positions_of(nodes)) ==
            doctest::Approx(expected).epsilon(1e-12));
    }
  }
}
