#include "dtsap/bench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>

#include "dtsap/error.hpp"
#include "dtsap/parallel.hpp"
#include "dtsap/serialization.hpp"

namespace dtsap {

using nlohmann::json;

namespace {

SolverBudget budget_from_json(const json& j, SolverBudget b) {
  b.max_sweeps = j.value("max_sweeps", b.max_sweeps);
  b.time_limit_ms = j.value("time_limit_ms", b.time_limit_ms);
  b.restarts = j.value("restarts", b.restarts);
  return b;
}

json to_json(const SolverBudget& b) {
  return {{"max_sweeps", b.max_sweeps}, {"time_limit_ms", b.time_limit_ms}, {"restarts", b.restarts}};
}

const std::map<std::string, std::string>& base_of_rollout() {
  static const std::map<std::string, std::string> m = {{"RAN-RE", "RAN"}, {"SEG-RE", "SEG"}};
  return m;
}

bool known_policy(const std::string& name) {
  return name == "RAN" || name == "SEG" || name == "SBP" || base_of_rollout().contains(name);
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace

void BenchConfig::validate() const {
  params.validate();
  gen.validate(params.calendar);
  if (instances < 1) throw Error("config: instances must be >= 1");
  if (policies.empty()) throw Error("config: policy list is empty");
  if (jobs < 1) throw Error("config: jobs must be >= 1");
  for (const auto& p : policies) {
    if (!known_policy(p.name)) throw Error("config: unknown policy '" + p.name + "'");
  }
}

BenchConfig config_from_json(const json& j) {
  BenchConfig cfg;
  try {
    cfg.preset = j.value("system", cfg.preset);
    SystemPreset preset = system_preset(cfg.preset);
    cfg.params = preset.params;
    cfg.gen = preset.gen;
    if (j.contains("params")) {
      json merged = dtsap::to_json(cfg.params);
      merged.merge_patch(j.at("params"));
      cfg.params = system_params_from_json(merged);
    }
    if (j.contains("gen")) {
      json merged = dtsap::to_json(cfg.gen);
      merged.merge_patch(j.at("gen"));
      cfg.gen = gen_params_from_json(merged);
    }
    if (j.contains("location_pool_file")) {
      cfg.gen.location_pool = load_location_pool(j.at("location_pool_file").get<std::string>());
    }
    if (j.contains("policies")) {
      for (const auto& p : j.at("policies")) {
        PolicySpec spec;
        if (p.is_string()) {
          spec.name = p.get<std::string>();
        } else {
          spec.name = p.at("name").get<std::string>();
          spec.options = p;
          spec.options.erase("name");
        }
        cfg.policies.push_back(std::move(spec));
      }
    }
    cfg.instances = j.value("instances", cfg.instances);
    cfg.seed = j.value("seed", cfg.seed);
    if (j.contains("router_budget")) cfg.router_budget = budget_from_json(j.at("router_budget"), cfg.router_budget);
    if (j.contains("fast_budget")) cfg.fast_budget = budget_from_json(j.at("fast_budget"), cfg.fast_budget);
    cfg.jobs = j.value("jobs", cfg.jobs);
    cfg.out_dir = j.value("out", cfg.out_dir.string());
  } catch (const json::exception& e) {
    throw Error(std::string("config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

json to_json(const BenchConfig& cfg) {
  json policies = json::array();
  for (const auto& p : cfg.policies) {
    json e = p.options;
    e["name"] = p.name;
    policies.push_back(std::move(e));
  }
  return {{"system", cfg.preset},
          {"params", dtsap::to_json(cfg.params)},
          {"gen", dtsap::to_json(cfg.gen)},
          {"policies", policies},
          {"instances", cfg.instances},
          {"seed", cfg.seed},
          {"router_budget", to_json(cfg.router_budget)},
          {"fast_budget", to_json(cfg.fast_budget)}};
}

std::string config_hash(const BenchConfig& cfg) {
  // FNV-1a over the canonical dump; output paths and parallelism are excluded
  const std::string text = to_json(cfg).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::unique_ptr<Policy> make_policy(const PolicySpec& spec, const Instance& inst, const BenchConfig& cfg) {
  const auto& o = spec.options;
  if (spec.name == "RAN") return std::make_unique<RandomPolicy>();
  if (spec.name == "SEG") return std::make_unique<SegmentationPolicy>(inst.depot, inst.params.calendar);
  if (auto it = base_of_rollout().find(spec.name); it != base_of_rollout().end()) {
    std::shared_ptr<const Policy> base = make_policy({it->second, json::object()}, inst, cfg);
    RolloutConfig rc;
    rc.rollouts = o.value("rollouts", rc.rollouts);
    rc.actions = o.value("actions", std::string("all")) == "pruned" ? ActionSet::BasePruned : ActionSet::All;
    rc.future = inst.gen;
    rc.fast_budget = cfg.fast_budget;
    rc.execution = o.value("serial", false) ? Execution::Serial : Execution::Parallel;
    return std::make_unique<RolloutPolicy>(std::move(base), rc, inst.params, inst.depot);
  }
  if (spec.name == "SBP") {
    SbpConfig sc;
    sc.scenarios = o.value("scenarios", sc.scenarios);
    sc.sampling_horizon = o.value("sampling_horizon", sc.sampling_horizon);
    sc.future_windows = o.value("future_windows", std::string("infinite")) == "finite" ? FutureWindows::Finite
                                                                                       : FutureWindows::Infinite;
    sc.dist = inst.gen;
    sc.budget = cfg.fast_budget;
    sc.execution = o.value("serial", false) ? Execution::Serial : Execution::Parallel;
    return std::make_unique<ScenarioPolicy>(sc, inst.params, inst.depot);
  }
  throw Error("unknown policy '" + spec.name + "'");
}

std::uint64_t instance_seed(std::uint64_t base, std::size_t instance) {
  return derive_seed(base, {0x1a57a11ceULL, instance});
}

std::uint64_t episode_seed(std::uint64_t base, std::size_t policy, std::size_t instance) {
  return derive_seed(base, {0xe915adeULL, policy, instance});
}

double served_sd(const EpisodeResult& r) {
  if (r.served_per_day.empty()) return 0.0;
  const double n = static_cast<double>(r.served_per_day.size());
  const double mean = std::accumulate(r.served_per_day.begin(), r.served_per_day.end(), 0.0) / n;
  double ss = 0.0;
  for (int c : r.served_per_day) ss += (c - mean) * (c - mean);
  return std::sqrt(ss / n);
}

Metrics compute_metrics(std::span<const EpisodeResult> results) {
  if (results.empty()) throw Error("compute_metrics: no results");
  Metrics m;
  m.episodes = results.size();
  const double n = static_cast<double>(results.size());
  std::size_t dynamic = 0, satisfied = 0;
  double dt_sum = 0.0;
  std::size_t dt_epochs = 0;
  for (const auto& r : results) {
    m.total_cost += r.total_cost / n;
    m.travel_cost += r.travel_cost() / n;
    m.wait += r.wait / n;
    m.delay_penalty += r.delay_penalty / n;
    m.assignment_penalty += r.assignment_penalties / n;
    m.served_sd += served_sd(r) / n;
    for (const auto& c : r.customers) {
      if (!c.dynamic) continue;
      ++dynamic;
      if (std::binary_search(c.preferences.begin(), c.preferences.end(), c.slot)) ++satisfied;
    }
    dt_sum += r.decision_seconds;
    dt_epochs += static_cast<std::size_t>(r.assignment_epochs);
  }
  m.satisfied_ratio = dynamic == 0 ? 100.0 : 100.0 * static_cast<double>(satisfied) / static_cast<double>(dynamic);
  m.decision_seconds = dt_epochs == 0 ? 0.0 : dt_sum / static_cast<double>(dt_epochs);
  if (results.size() > 1) {
    double ss = 0.0;
    for (const auto& r : results) ss += (r.total_cost - m.total_cost) * (r.total_cost - m.total_cost);
    m.total_cost_sem = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
  }
  return m;
}

bool Report::all_succeeded() const {
  return std::all_of(rows.begin(), rows.end(), [](const EpisodeRow& r) { return r.error.empty(); });
}

Report run_benchmark(const BenchConfig& cfg) {
  cfg.validate();
  Report report;
  report.config_hash = config_hash(cfg);
  const std::size_t n_inst = static_cast<std::size_t>(cfg.instances);
  const std::size_t n_pol = cfg.policies.size();

  // instances are shared across policies for paired comparison
  std::vector<Instance> instances(n_inst);
  for (std::size_t i = 0; i < n_inst; ++i) instances[i] = generate_instance(cfg.params, cfg.gen, instance_seed(cfg.seed, i));

  report.rows.resize(n_pol * n_inst);
  const HeuristicRouter router(cfg.router_budget);
  for_each_index(
      report.rows.size(), cfg.jobs > 1 ? Execution::Parallel : Execution::Serial,
      [&](std::size_t k) {
        const std::size_t p = k / n_inst, i = k % n_inst;
        EpisodeRow& row = report.rows[k];
        row.policy = p;
        row.policy_name = cfg.policies[p].name;
        row.instance = i;
        row.instance_seed = instance_seed(cfg.seed, i);
        row.episode_seed = episode_seed(cfg.seed, p, i);
        try {
          auto policy = make_policy(cfg.policies[p], instances[i], cfg);
          Rng rng(row.episode_seed);
          row.result = run_episode(instances[i], *policy, router, rng);
        } catch (const std::exception& e) {
          row.error = e.what();
        }
      },
      cfg.jobs);

  for (std::size_t p = 0; p < n_pol; ++p) {
    PolicySummary s;
    s.name = cfg.policies[p].name;
    std::vector<EpisodeResult> ok;
    for (std::size_t i = 0; i < n_inst; ++i) {
      const auto& row = report.rows[p * n_inst + i];
      if (row.result) {
        ok.push_back(*row.result);
      } else {
        ++s.failed;
      }
    }
    if (!ok.empty()) s.metrics = compute_metrics(ok);
    report.summaries.push_back(std::move(s));
  }
  return report;
}

std::string episodes_csv(const Report& report) {
  std::string out = "# " + std::string(kToolVersion) + " config " + report.config_hash + "\n";
  out += "policy,instance,instance_seed,episode_seed,status,TC,TTC,travel,wait,DP,assignment_penalty,"
         "dynamic_customers,satisfied,SAR,SE,customers\n";
  for (const auto& row : report.rows) {
    out += row.policy_name + "," + std::to_string(row.instance) + "," + std::to_string(row.instance_seed) + "," +
           std::to_string(row.episode_seed) + ",";
    if (!row.result) {
      std::string msg = row.error;
      std::replace(msg.begin(), msg.end(), ',', ';');
      std::replace(msg.begin(), msg.end(), '\n', ' ');
      out += "failed: " + msg + ",,,,,,,,,,,\n";
      continue;
    }
    const auto& r = *row.result;
    std::size_t dynamic = 0, satisfied = 0;
    for (const auto& c : r.customers) {
      if (!c.dynamic) continue;
      ++dynamic;
      if (std::binary_search(c.preferences.begin(), c.preferences.end(), c.slot)) ++satisfied;
    }
    const double sar = dynamic == 0 ? 100.0 : 100.0 * static_cast<double>(satisfied) / static_cast<double>(dynamic);
    out += "ok," + fmt(r.total_cost) + "," + fmt(r.travel_cost()) + "," + fmt(r.travel) + "," + fmt(r.wait) + "," +
           fmt(r.delay_penalty) + "," + fmt(r.assignment_penalties) + "," + std::to_string(dynamic) + "," +
           std::to_string(satisfied) + "," + fmt(sar) + "," + fmt(served_sd(r)) + "," +
           std::to_string(r.customers.size()) + "\n";
  }
  return out;
}

std::string summary_json(const Report& report) {
  json policies = json::array();
  for (const auto& s : report.summaries) {
    const auto& m = s.metrics;
    policies.push_back({{"policy", s.name},
                        {"episodes", m.episodes},
                        {"failed", s.failed},
                        {"TC", m.total_cost},
                        {"TC_SEM", m.total_cost_sem},
                        {"TTC", m.travel_cost},
                        {"wait", m.wait},
                        {"DP", m.delay_penalty},
                        {"assignment_penalty", m.assignment_penalty},
                        {"SAR", m.satisfied_ratio},
                        {"SE", m.served_sd}});
  }
  json doc = {{"version", kToolVersion}, {"config_hash", report.config_hash}, {"policies", policies}};
  return doc.dump(2) + "\n";
}

std::string timing_csv(const Report& report) {
  std::string out = "policy,instance,assignment_epochs,DT_mean_seconds\n";
  for (const auto& row : report.rows) {
    if (!row.result) continue;
    const auto& r = *row.result;
    const double dt = r.assignment_epochs == 0 ? 0.0 : r.decision_seconds / r.assignment_epochs;
    out += row.policy_name + "," + std::to_string(row.instance) + "," + std::to_string(r.assignment_epochs) + "," +
           fmt(dt) + "\n";
  }
  return out;
}

void write_report(const Report& report, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto write = [&](const char* name, const std::string& text) {
    std::ofstream f(dir / name, std::ios::binary);
    if (!f) throw Error("cannot write " + (dir / name).string());
    f << text;
  };
  write("episodes.csv", episodes_csv(report));
  write("summary.json", summary_json(report));
  write("timing.csv", timing_csv(report));
}

}  // namespace dtsap
