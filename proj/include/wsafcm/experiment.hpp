#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "wsafcm/metrics.hpp"
#include "wsafcm/protocol.hpp"
#include "wsafcm/trace_io.hpp"

namespace wsafcm {

/// Everything an experiment needs in one place. Defaults match the usual
/// benchmark setup (200 nodes on a 100 m field, 0.5 J each, k=5, 4096-bit
/// packets, WSA 30x50, FCM m=2 tol=1e-4, 10 seeds).
struct ExperimentSpec {
  NetworkConfig network;
  RadioParamsd radio;
  ProtocolConfig protocol;
  std::vector<Strategy> strategies{Strategy::WsaFcm, Strategy::RandomCh};
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  std::vector<int> residual_checkpoints{200, 400, 500, 600};
  std::filesystem::path out_dir = "out";
};

/// Load a spec from a JSON config file. Missing keys keep their defaults;
/// unknown keys or malformed values throw std::invalid_argument naming
/// the field.
ExperimentSpec load_spec(const std::filesystem::path& config_path);
ExperimentSpec spec_from_json_text(const std::string& text);

void validate(const ExperimentSpec& spec);

/// Seed list helper: parses "a..b" (inclusive) or a single integer.
std::vector<std::uint64_t> parse_seed_range(const std::string& text);

/// One full simulation for (strategy, seed).
SimulationTrace run_single(const ExperimentSpec& spec, Strategy strategy, std::uint64_t seed);

/// Run every (strategy, seed) pair on seed-identical deployments and build
/// the per-metric comparison against the wsa-fcm reference. Requires >= 2
/// strategies including wsa-fcm and >= 2 seeds. Jobs fan out across
/// hardware threads; assembly is deterministic.
ComparisonReport compare(const ExperimentSpec& spec);

/// Time one clustering round per network size (mean of `repetitions`
/// timed rounds, >= 5) and report scaling factors against the smallest
/// size. Timing is serial.
std::vector<SweepRow> sweep(const ExperimentSpec& spec, std::span<const int> sizes,
                            int repetitions = 5);

}  // namespace wsafcm
