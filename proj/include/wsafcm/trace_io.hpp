#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "wsafcm/metrics.hpp"
#include "wsafcm/protocol.hpp"

namespace wsafcm {

/// Shortest round-trip decimal form of a double (std::to_chars).
std::string format_double(double value);

/// Per-round CSV: header
///   round,alive,total_residual_J,dead_ids,mean_intra_dist_m
/// with dead_ids as semicolon-joined ascending node ids (empty when none).
void write_trace_csv(const SimulationTrace& trace, std::ostream& out);
void write_trace_csv(const SimulationTrace& trace, const std::filesystem::path& path);

/// Run summary JSON object with keys strategy, seed, FND, LND, half_life,
/// rounds; unreached milestones are null.
void write_run_summary_json(const RunSummary& summary, const std::filesystem::path& path);
std::string run_summary_json(const RunSummary& summary);

/// Search convergence CSV (iteration,best_fitness_J), one row per WSA
/// iteration of the first clustering pass.
void write_wsa_curve_csv(const std::vector<double>& curve, const std::filesystem::path& path);

struct ComparisonCell {
  std::string metric;
  Strategy strategy = Strategy::WsaFcm;
  double mean = 0.0;
  std::optional<double> sd;
  std::optional<double> t;  // absent on the reference strategy's rows
  std::optional<double> p;
  std::optional<double> d;
};

struct ComparisonReport {
  Strategy reference = Strategy::WsaFcm;
  std::vector<std::uint64_t> seeds;
  int round_cap_sentinel = 0;  // stands in for unreached lifetime rounds
  std::vector<ComparisonCell> rows;
};

/// Report JSON mirroring the per-metric table layout: one row per
/// (metric, strategy) with mean, sd and the paired t, p, d columns
/// against the reference. Infinite t or d serialize as "inf"/"-inf".
void write_comparison_json(const ComparisonReport& report, const std::filesystem::path& path);
std::string comparison_json(const ComparisonReport& report);

struct SweepRow {
  int n = 0;
  int k = 0;
  double ms_per_round = 0.0;
  double scaling_factor = 1.0;
  std::optional<double> peak_mem_mb;
};

/// CSV with header n,k,ms_per_round,scaling_factor,peak_mem_mb
/// (peak_mem_mb reads "unavailable" when the platform gives no figure).
void write_sweep_csv(const std::vector<SweepRow>& rows, const std::filesystem::path& path);
void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out);

}  // namespace wsafcm
