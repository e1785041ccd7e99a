#include "wsafcm/metrics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "wsafcm/stats.hpp"

namespace wsafcm {

LifetimeMetrics lifetime_metrics(const SimulationTrace& trace) {
  if (trace.rounds.empty()) throw std::invalid_argument("lifetime_metrics: empty trace");
  const int n = trace.network.node_count;
  LifetimeMetrics out;
  int dead = 0;
  for (const RoundLog& log : trace.rounds) {
    dead += static_cast<int>(log.dead_this_round.size());
    if (!out.fnd && dead > 0) out.fnd = log.round_index;
    if (!out.half_life && 2 * dead >= n) out.half_life = log.round_index;
    if (!out.p90_death && 10 * dead >= 9 * n) out.p90_death = log.round_index;
    if (!out.lnd && log.alive_count == 0) out.lnd = log.round_index;
  }
  return out;
}

double intra_cluster_distance(const RoundLog& log, Eigen::Ref<const PointMatrixd> positions) {
  return intra_cluster_distance(log.assignment, positions);
}

double residual_at(const SimulationTrace& trace, int round) {
  double value = trace.network.node_count * trace.network.initial_energy;
  for (const RoundLog& log : trace.rounds) {
    if (log.round_index > round) break;
    value = log.total_residual_energy;
  }
  return value;
}

RunSummary summarize(const SimulationTrace& trace, std::span<const int> checkpoints) {
  RunSummary out;
  out.strategy = trace.strategy;
  out.seed = trace.seed;
  out.lifetime = lifetime_metrics(trace);
  out.rounds = trace.terminated_at;
  for (int checkpoint : checkpoints) out.residual_at[checkpoint] = residual_at(trace, checkpoint);

  // Cluster quality over the stable period: rounds before the first death,
  // falling back to the first round when a node dies immediately.
  const int limit = out.lifetime.fnd.value_or(trace.terminated_at + 1);
  double total = 0.0;
  int count = 0;
  for (const RoundLog& log : trace.rounds) {
    if (log.round_index >= limit && count > 0) break;
    total += log.mean_intra_cluster_distance;
    ++count;
    if (log.round_index >= limit) break;
  }
  out.mean_intra_distance = count > 0 ? total / count : 0.0;
  return out;
}

Aggregate aggregate_runs(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("aggregate_runs: empty value list");
  Aggregate out;
  for (double v : values) out.mean += v;
  out.mean /= static_cast<double>(values.size());
  if (values.size() >= 2) {
    double ss = 0.0;
    for (double v : values) ss += (v - out.mean) * (v - out.mean);
    out.sd = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return out;
}

namespace {

struct DiffMoments {
  double mean = 0.0;
  double sd = 0.0;
  std::size_t n = 0;
};

DiffMoments diff_moments(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("paired samples must have equal length");
  if (a.size() < 2) throw std::invalid_argument("paired samples need n >= 2");
  DiffMoments m;
  m.n = a.size();
  for (std::size_t i = 0; i < m.n; ++i) m.mean += a[i] - b[i];
  m.mean /= static_cast<double>(m.n);
  double ss = 0.0;
  for (std::size_t i = 0; i < m.n; ++i) {
    const double d = a[i] - b[i] - m.mean;
    ss += d * d;
  }
  m.sd = std::sqrt(ss / static_cast<double>(m.n - 1));
  return m;
}

}  // namespace

PairedTest paired_t_test(std::span<const double> a, std::span<const double> b) {
  const DiffMoments m = diff_moments(a, b);
  PairedTest out;
  if (m.sd == 0.0) {
    if (m.mean == 0.0) {
      out.t = 0.0;
      out.p = 1.0;
    } else {
      out.t = std::copysign(std::numeric_limits<double>::infinity(), m.mean);
      out.p = 0.0;
    }
    return out;
  }
  out.t = m.mean / (m.sd / std::sqrt(static_cast<double>(m.n)));
  out.p = student_t_two_sided_p(out.t, static_cast<int>(m.n) - 1);
  return out;
}

double cohens_d(std::span<const double> a, std::span<const double> b) {
  const DiffMoments m = diff_moments(a, b);
  if (m.sd == 0.0) {
    if (m.mean == 0.0) return 0.0;
    return std::copysign(std::numeric_limits<double>::infinity(), m.mean);
  }
  return m.mean / m.sd;
}

}  // namespace wsafcm
