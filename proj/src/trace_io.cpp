#include "wsafcm/trace_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace wsafcm {

namespace {

using ordered_json = nlohmann::ordered_json;

std::ofstream open_for_write(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);  // binary keeps line endings stable
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  return out;
}

ordered_json json_optional(const std::optional<int>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

// Infinite magnitudes are not representable in JSON; use a string marker.
ordered_json json_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) throw std::runtime_error("format_double failed");
  return std::string(buf, ptr);
}

void write_trace_csv(const SimulationTrace& trace, std::ostream& out) {
  out << "round,alive,total_residual_J,dead_ids,mean_intra_dist_m\n";
  for (const RoundLog& log : trace.rounds) {
    out << log.round_index << ',' << log.alive_count << ','
        << format_double(log.total_residual_energy) << ',';
    for (std::size_t i = 0; i < log.dead_this_round.size(); ++i) {
      if (i) out << ';';
      out << log.dead_this_round[i];
    }
    out << ',' << format_double(log.mean_intra_cluster_distance) << '\n';
  }
}

void write_trace_csv(const SimulationTrace& trace, const std::filesystem::path& path) {
  auto out = open_for_write(path);
  write_trace_csv(trace, out);
}

std::string run_summary_json(const RunSummary& summary) {
  ordered_json j;
  j["strategy"] = strategy_name(summary.strategy);
  j["seed"] = summary.seed;
  j["FND"] = json_optional(summary.lifetime.fnd);
  j["LND"] = json_optional(summary.lifetime.lnd);
  j["half_life"] = json_optional(summary.lifetime.half_life);
  j["rounds"] = summary.rounds;
  return j.dump(2) + "\n";
}

void write_run_summary_json(const RunSummary& summary, const std::filesystem::path& path) {
  open_for_write(path) << run_summary_json(summary);
}

void write_wsa_curve_csv(const std::vector<double>& curve, const std::filesystem::path& path) {
  auto out = open_for_write(path);
  out << "iteration,best_fitness_J\n";
  for (std::size_t i = 0; i < curve.size(); ++i)
    out << (i + 1) << ',' << format_double(curve[i]) << '\n';
}

std::string comparison_json(const ComparisonReport& report) {
  ordered_json j;
  j["reference"] = strategy_name(report.reference);
  j["seeds"] = report.seeds;
  j["round_cap_sentinel"] = report.round_cap_sentinel;
  ordered_json rows = ordered_json::array();
  for (const ComparisonCell& cell : report.rows) {
    ordered_json row;
    row["metric"] = cell.metric;
    row["strategy"] = strategy_name(cell.strategy);
    row["mean"] = json_number(cell.mean);
    row["sd"] = cell.sd ? json_number(*cell.sd) : ordered_json(nullptr);
    row["t"] = cell.t ? json_number(*cell.t) : ordered_json(nullptr);
    row["p"] = cell.p ? json_number(*cell.p) : ordered_json(nullptr);
    row["d"] = cell.d ? json_number(*cell.d) : ordered_json(nullptr);
    rows.push_back(std::move(row));
  }
  j["rows"] = std::move(rows);
  return j.dump(2) + "\n";
}

void write_comparison_json(const ComparisonReport& report, const std::filesystem::path& path) {
  open_for_write(path) << comparison_json(report);
}

void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out) {
  out << "n,k,ms_per_round,scaling_factor,peak_mem_mb\n";
  for (const SweepRow& row : rows) {
    out << row.n << ',' << row.k << ',' << format_double(row.ms_per_round) << ','
        << format_double(row.scaling_factor) << ',';
    if (row.peak_mem_mb)
      out << format_double(*row.peak_mem_mb);
    else
      out << "unavailable";
    out << '\n';
  }
}

void write_sweep_csv(const std::vector<SweepRow>& rows, const std::filesystem::path& path) {
  auto out = open_for_write(path);
  write_sweep_csv(rows, out);
}

}  // namespace wsafcm
