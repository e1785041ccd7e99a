#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "wsafcm/protocol.hpp"

namespace wsafcm {

/// Round indices of the lifetime milestones. A field is empty when the
/// milestone was not reached before the trace ended.
struct LifetimeMetrics {
  std::optional<int> fnd;        // first node death
  std::optional<int> lnd;        // last node death
  std::optional<int> half_life;  // >= 50% of nodes dead
  std::optional<int> p90_death;  // >= 90% of nodes dead
};

LifetimeMetrics lifetime_metrics(const SimulationTrace& trace);

/// Spec'd per-round observable, read off the round's assignment.
double intra_cluster_distance(const RoundLog& log, Eigen::Ref<const PointMatrixd> positions);

/// Total residual energy at the given round, read as a step function of
/// the trace (the value of the last round logged at or before `round`;
/// the full initial budget before round 1).
double residual_at(const SimulationTrace& trace, int round);

struct RunSummary {
  Strategy strategy = Strategy::WsaFcm;
  std::uint64_t seed = 0;
  LifetimeMetrics lifetime;
  std::map<int, double> residual_at;  // checkpoint round -> total residual J
  double mean_intra_distance = 0.0;   // mean over pre-FND rounds
  int rounds = 0;                     // terminated_at
};

RunSummary summarize(const SimulationTrace& trace, std::span<const int> checkpoints);

struct Aggregate {
  double mean = 0.0;
  std::optional<double> sd;  // absent for a single run
};

/// Mean and sample standard deviation (n-1 denominator). Throws on empty.
Aggregate aggregate_runs(std::span<const double> values);

struct PairedTest {
  double t = 0.0;  // +-infinity marks zero-variance differences with nonzero mean
  double p = 1.0;
};

/// Paired two-sided t-test on per-seed metric values:
///   t = mean(a-b) / (sd(a-b) / sqrt(n)),  p from Student's t with n-1 df.
PairedTest paired_t_test(std::span<const double> a, std::span<const double> b);

/// Paired effect size d_z = mean(a-b) / sd(a-b). Zero-variance differences
/// give 0 when the mean is zero, +-infinity otherwise.
double cohens_d(std::span<const double> a, std::span<const double> b);

}  // namespace wsafcm
