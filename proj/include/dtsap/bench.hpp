#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "dtsap/engine.hpp"
#include "dtsap/instance.hpp"
#include "dtsap/policies.hpp"
#include "dtsap/routing.hpp"

namespace dtsap {

inline constexpr const char* kToolVersion = "dtsap 1.0.0";

// Policy name (RAN, SEG, RAN-RE, SEG-RE, SBP) plus its options, e.g.
// {"rollouts": 10} or {"scenarios": 30, "sampling_horizon": 1}.
struct PolicySpec {
  std::string name;
  nlohmann::json options = nlohmann::json::object();
};

struct BenchConfig {
  std::string preset = "S1";
  SystemParams params;
  GenParams gen;
  std::vector<PolicySpec> policies;
  int instances = 100;
  std::uint64_t seed = 1;
  SolverBudget router_budget;                   // executed routing
  SolverBudget fast_budget{50, 0.0, 0};         // routing inside rollouts
  int jobs = 1;
  std::filesystem::path out_dir = "out";

  void validate() const;
};

// Preset first, then explicit "params"/"gen" fields, then the rest.
BenchConfig config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const BenchConfig& cfg);
std::string config_hash(const BenchConfig& cfg);

std::unique_ptr<Policy> make_policy(const PolicySpec& spec, const Instance& inst, const BenchConfig& cfg);

std::uint64_t instance_seed(std::uint64_t base, std::size_t instance);
std::uint64_t episode_seed(std::uint64_t base, std::size_t policy, std::size_t instance);

struct Metrics {
  double total_cost = 0.0;        // TC
  double travel_cost = 0.0;       // TTC: travel plus waiting
  double wait = 0.0;
  double delay_penalty = 0.0;     // DP
  double assignment_penalty = 0.0;
  double satisfied_ratio = 0.0;   // SAR, percent of dynamic customers
  double served_sd = 0.0;         // SE
  double decision_seconds = 0.0;  // DT, mean per assignment epoch
  double total_cost_sem = 0.0;    // SEM of TC
  std::size_t episodes = 0;
};

// Per-episode SE: population standard deviation of served counts over all routed days.
double served_sd(const EpisodeResult& r);

Metrics compute_metrics(std::span<const EpisodeResult> results);

struct EpisodeRow {
  std::size_t policy = 0;
  std::string policy_name;
  std::size_t instance = 0;
  std::uint64_t instance_seed = 0;
  std::uint64_t episode_seed = 0;
  std::string error;  // empty on success
  std::optional<EpisodeResult> result;
};

struct PolicySummary {
  std::string name;
  Metrics metrics;
  std::size_t failed = 0;
};

struct Report {
  std::string config_hash;
  std::vector<EpisodeRow> rows;  // sorted by (policy, instance)
  std::vector<PolicySummary> summaries;
  bool all_succeeded() const;
};

Report run_benchmark(const BenchConfig& cfg);

std::string episodes_csv(const Report& report);
std::string summary_json(const Report& report);
// Wall-clock decision times; kept apart from the reproducible files.
std::string timing_csv(const Report& report);

// Writes episodes.csv, summary.json and timing.csv under `dir`.
void write_report(const Report& report, const std::filesystem::path& dir);

}  // namespace dtsap
