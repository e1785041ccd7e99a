#include "wsafcm/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <fstream>
#include <functional>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include <sys/resource.h>

namespace wsafcm {

namespace {

using nlohmann::json;

[[noreturn]] void bad_field(const std::string& field, const std::string& why) {
  throw std::invalid_argument("config field '" + field + "': " + why);
}

double as_number(const json& j, const std::string& field) {
  if (!j.is_number()) bad_field(field, "expected a number");
  return j.get<double>();
}

int as_int(const json& j, const std::string& field) {
  if (!j.is_number_integer()) bad_field(field, "expected an integer");
  return j.get<int>();
}

void parse_network(const json& j, NetworkConfig& cfg) {
  for (const auto& [key, value] : j.items()) {
    if (key == "node_count") cfg.node_count = as_int(value, "network.node_count");
    else if (key == "field_size") cfg.field_size = as_number(value, "network.field_size");
    else if (key == "initial_energy") cfg.initial_energy = as_number(value, "network.initial_energy");
    else if (key == "cluster_count") {
      if (value.is_string() && value.get<std::string>() == "auto") cfg.cluster_count = 0;
      else cfg.cluster_count = as_int(value, "network.cluster_count");
    } else if (key == "sink_position") {
      if (!value.is_array() || value.size() != 2) bad_field("network.sink_position", "expected [x, y]");
      cfg.sink_position.x() = as_number(value[0], "network.sink_position[0]");
      cfg.sink_position.y() = as_number(value[1], "network.sink_position[1]");
    } else bad_field("network." + key, "unknown field");
  }
}

void parse_radio(const json& j, RadioParamsd& radio) {
  for (const auto& [key, value] : j.items()) {
    if (key == "e_elec") radio.e_elec = as_number(value, "radio.e_elec");
    else if (key == "eps_fs") radio.eps_fs = as_number(value, "radio.eps_fs");
    else if (key == "eps_mp") radio.eps_mp = as_number(value, "radio.eps_mp");
    else if (key == "e_da") radio.e_da = as_number(value, "radio.e_da");
    else if (key == "packet_bits") radio.packet_bits = as_number(value, "radio.packet_bits");
    else bad_field("radio." + key, "unknown field");
  }
}

void parse_wsa(const json& j, WsaConfigd& cfg) {
  for (const auto& [key, value] : j.items()) {
    if (key == "population_size") cfg.population_size = as_int(value, "wsa.population_size");
    else if (key == "iterations") cfg.iterations = as_int(value, "wsa.iterations");
    else if (key == "sigma") cfg.sigma = as_number(value, "wsa.sigma");
    else if (key == "inertia") cfg.inertia = as_number(value, "wsa.inertia");
    else bad_field("wsa." + key, "unknown field");
  }
}

void parse_fcm(const json& j, FcmConfigd& cfg) {
  for (const auto& [key, value] : j.items()) {
    if (key == "fuzzifier") cfg.fuzzifier = as_number(value, "fcm.fuzzifier");
    else if (key == "tolerance") cfg.tolerance = as_number(value, "fcm.tolerance");
    else if (key == "max_iterations") cfg.max_iterations = as_int(value, "fcm.max_iterations");
    else bad_field("fcm." + key, "unknown field");
  }
}

std::vector<std::uint64_t> parse_seeds_value(const json& value) {
  if (value.is_string()) return parse_seed_range(value.get<std::string>());
  if (!value.is_array()) bad_field("seeds", "expected an array or \"a..b\"");
  std::vector<std::uint64_t> seeds;
  for (const auto& item : value) {
    if (!item.is_number_integer() && !item.is_number_unsigned())
      bad_field("seeds", "expected integer entries");
    seeds.push_back(item.get<std::uint64_t>());
  }
  return seeds;
}

// Simple work-sharing loop; rethrows the first job exception after join.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
  const std::size_t workers =
      std::min<std::size_t>(std::max(1u, std::thread::hardware_concurrency()), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < count;) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace

std::vector<std::uint64_t> parse_seed_range(const std::string& text) {
  const auto dots = text.find("..");
  try {
    if (dots == std::string::npos) return {std::stoull(text)};
    const std::uint64_t lo = std::stoull(text.substr(0, dots));
    const std::uint64_t hi = std::stoull(text.substr(dots + 2));
    if (hi < lo) throw std::invalid_argument("descending");
    std::vector<std::uint64_t> seeds;
    for (std::uint64_t s = lo; s <= hi; ++s) seeds.push_back(s);
    return seeds;
  } catch (const std::exception&) {
    throw std::invalid_argument("seeds: expected an integer or \"a..b\", got '" + text + "'");
  }
}

ExperimentSpec spec_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");

  ExperimentSpec spec;
  for (const auto& [key, value] : j.items()) {
    if (key == "network") parse_network(value, spec.network);
    else if (key == "radio") parse_radio(value, spec.radio);
    else if (key == "wsa") parse_wsa(value, spec.protocol.wsa);
    else if (key == "fcm") parse_fcm(value, spec.protocol.fcm);
    else if (key == "recluster_period") spec.protocol.recluster_period = as_int(value, "recluster_period");
    else if (key == "round_cap") spec.protocol.round_cap = as_int(value, "round_cap");
    else if (key == "strategies") {
      if (!value.is_array() || value.empty()) bad_field("strategies", "expected a nonempty array");
      spec.strategies.clear();
      for (const auto& name : value) {
        if (!name.is_string()) bad_field("strategies", "expected strategy names");
        spec.strategies.push_back(strategy_from_name(name.get<std::string>()));
      }
    } else if (key == "seeds") spec.seeds = parse_seeds_value(value);
    else if (key == "residual_checkpoints") {
      if (!value.is_array()) bad_field("residual_checkpoints", "expected an array");
      spec.residual_checkpoints.clear();
      for (const auto& item : value)
        spec.residual_checkpoints.push_back(as_int(item, "residual_checkpoints"));
    } else if (key == "out_dir") {
      if (!value.is_string()) bad_field("out_dir", "expected a string");
      spec.out_dir = value.get<std::string>();
    } else bad_field(key, "unknown field");
  }
  return spec;
}

ExperimentSpec load_spec(const std::filesystem::path& config_path) {
  std::ifstream in(config_path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot read config file '" + config_path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return spec_from_json_text(buffer.str());
}

void validate(const ExperimentSpec& spec) {
  validate(spec.network);
  validate(spec.protocol);
  if (!spec.radio.valid())
    throw std::invalid_argument("radio parameters must be strictly positive");
  if (spec.strategies.empty()) throw std::invalid_argument("strategies must be nonempty");
  if (spec.seeds.empty()) throw std::invalid_argument("seeds must be nonempty");
}

SimulationTrace run_single(const ExperimentSpec& spec, Strategy strategy, std::uint64_t seed) {
  validate(spec);
  return simulate(spec.network, spec.radio, strategy, spec.protocol, seed);
}

namespace {

struct MetricColumn {
  std::string name;
  std::function<double(const RunSummary&)> value;
};

std::vector<MetricColumn> metric_columns(const ExperimentSpec& spec) {
  const int sentinel = spec.protocol.round_cap;
  std::vector<MetricColumn> cols{
      {"fnd", [=](const RunSummary& s) { return double(s.lifetime.fnd.value_or(sentinel)); }},
      {"lnd", [=](const RunSummary& s) { return double(s.lifetime.lnd.value_or(sentinel)); }},
      {"half_life",
       [=](const RunSummary& s) { return double(s.lifetime.half_life.value_or(sentinel)); }},
      {"p90_death",
       [=](const RunSummary& s) { return double(s.lifetime.p90_death.value_or(sentinel)); }},
      {"mean_intra_distance", [](const RunSummary& s) { return s.mean_intra_distance; }},
  };
  for (int checkpoint : spec.residual_checkpoints) {
    cols.push_back({"residual_at_" + std::to_string(checkpoint),
                    [checkpoint](const RunSummary& s) { return s.residual_at.at(checkpoint); }});
  }
  return cols;
}

}  // namespace

ComparisonReport compare(const ExperimentSpec& spec) {
  validate(spec);
  if (spec.strategies.size() < 2)
    throw std::invalid_argument("strategies: compare needs at least 2");
  if (spec.seeds.size() < 2)
    throw std::invalid_argument("seeds: compare needs at least 2 (sample SD is undefined for one run)");
  const auto ref_it = std::find(spec.strategies.begin(), spec.strategies.end(), Strategy::WsaFcm);
  if (ref_it == spec.strategies.end())
    throw std::invalid_argument("strategies: compare requires wsa-fcm as the reference");
  const std::size_t ref_index = static_cast<std::size_t>(ref_it - spec.strategies.begin());

  const std::size_t n_strategies = spec.strategies.size();
  const std::size_t n_seeds = spec.seeds.size();
  std::vector<std::vector<RunSummary>> summaries(n_strategies,
                                                 std::vector<RunSummary>(n_seeds));
  parallel_for(n_strategies * n_seeds, [&](std::size_t job) {
    const std::size_t si = job / n_seeds;
    const std::size_t wi = job % n_seeds;
    const SimulationTrace trace =
        simulate(spec.network, spec.radio, spec.strategies[si], spec.protocol, spec.seeds[wi]);
    summaries[si][wi] = summarize(trace, spec.residual_checkpoints);
  });

  ComparisonReport report;
  report.reference = Strategy::WsaFcm;
  report.seeds = spec.seeds;
  report.round_cap_sentinel = spec.protocol.round_cap;

  for (const MetricColumn& column : metric_columns(spec)) {
    std::vector<std::vector<double>> values(n_strategies);
    for (std::size_t si = 0; si < n_strategies; ++si)
      for (const RunSummary& s : summaries[si]) values[si].push_back(column.value(s));

    for (std::size_t si = 0; si < n_strategies; ++si) {
      const Aggregate agg = aggregate_runs(values[si]);
      ComparisonCell cell;
      cell.metric = column.name;
      cell.strategy = spec.strategies[si];
      cell.mean = agg.mean;
      cell.sd = agg.sd;
      if (si != ref_index) {
        const PairedTest test = paired_t_test(values[si], values[ref_index]);
        cell.t = test.t;
        cell.p = test.p;
        cell.d = cohens_d(values[si], values[ref_index]);
      }
      report.rows.push_back(std::move(cell));
    }
  }
  return report;
}

std::vector<SweepRow> sweep(const ExperimentSpec& spec, std::span<const int> sizes,
                            int repetitions) {
  validate(spec);
  if (sizes.size() < 2) throw std::invalid_argument("sizes: sweep needs at least 2 entries");
  if (repetitions < 1) throw std::invalid_argument("repetitions must be >= 1");

  std::vector<int> unique_sizes;  // duplicates pool into one row
  for (int n : sizes)
    if (std::find(unique_sizes.begin(), unique_sizes.end(), n) == unique_sizes.end())
      unique_sizes.push_back(n);

  std::vector<SweepRow> rows;
  for (int n : unique_sizes) {
    NetworkConfig cfg = spec.network;
    cfg.node_count = n;
    validate(cfg);
    const std::uint64_t seed = spec.seeds.front();
    const std::vector<Node> deployed = deploy_network(cfg, Rng::derive(seed, 0));

    double total_ms = 0.0;
    for (int rep = -1; rep < repetitions; ++rep) {  // rep -1 is an untimed warm-up
      std::vector<Node> nodes = deployed;
      Rng rng(Rng::derive(seed, 2 + static_cast<std::uint64_t>(rep + 1)));
      const auto start = std::chrono::steady_clock::now();
      const Clustering clustering =
          form_clusters(Strategy::WsaFcm, nodes, cfg, spec.radio, spec.protocol, rng);
      const ClusterAssignment assignment = elect_cluster_heads(nodes, clustering);
      run_round(nodes, assignment, cfg.sink_position, spec.radio);
      const auto stop = std::chrono::steady_clock::now();
      if (rep >= 0)
        total_ms += std::chrono::duration<double, std::milli>(stop - start).count();
    }

    SweepRow row;
    row.n = n;
    row.k = resolved_cluster_count(cfg, n);
    row.ms_per_round = total_ms / repetitions;
    struct rusage usage{};
    if (getrusage(RUSAGE_SELF, &usage) == 0 && usage.ru_maxrss > 0)
      row.peak_mem_mb = static_cast<double>(usage.ru_maxrss) / 1024.0;
    rows.push_back(row);
  }

  const auto smallest =
      std::min_element(rows.begin(), rows.end(),
                       [](const SweepRow& a, const SweepRow& b) { return a.n < b.n; });
  for (SweepRow& row : rows)
    row.scaling_factor = row.n == smallest->n ? 1.0 : row.ms_per_round / smallest->ms_per_round;
  return rows;
}

}  // namespace wsafcm
