// Command-line front end: instance generation, benchmark runs and single-task routing.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "dtsap/bench.hpp"
#include "dtsap/error.hpp"
#include "dtsap/instance.hpp"
#include "dtsap/routing.hpp"
#include "dtsap/serialization.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace dtsap;

namespace {

struct Common {
  std::optional<std::uint64_t> seed;
  int jobs = 1;
  std::string out;
};

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

json read_json(const std::string& path) {
  try {
    return json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw Error(path + ": " + e.what());
  }
}

void emit(const std::string& text, const std::string& out, const char* file_name) {
  if (out.empty()) {
    std::cout << text;
    return;
  }
  fs::path p(out);
  if (fs::is_directory(p) || out.back() == '/') {
    fs::create_directories(p);
    p /= file_name;
  }
  std::ofstream f(p, std::ios::binary);
  if (!f) throw Error("cannot write " + p.string());
  f << text;
}

// {"system": "S1", "params": {...}, "depot": [x, y], "jobs": [{"id", "position", "window"}]}
RoutingTask load_task(const std::string& path) {
  const json j = read_json(path);
  RoutingTask task;
  try {
    SystemPreset preset = system_preset(j.value("system", std::string("S1")));
    json params = to_json(preset.params);
    if (j.contains("params")) params.merge_patch(j.at("params"));
    task.params = system_params_from_json(params);
    task.depot = j.contains("depot") ? point_from_json(j.at("depot")) : preset.gen.depot;
    for (const auto& e : j.at("jobs")) {
      Job job;
      job.id = e.at("id").get<CustomerId>();
      job.position = point_from_json(e.at("position"));
      job.window = e.contains("window") ? window_from_json(e.at("window")) : TimeWindow{};
      task.jobs.push_back(job);
    }
  } catch (const json::exception& e) {
    throw Error(path + ": " + e.what());
  }
  task.validate();
  return task;
}

std::string solution_json(const Solution& sol) {
  json routes = json::array();
  for (const auto& r : sol.plan.routes) routes.push_back(r);
  json visits = json::array();
  for (const auto& v : sol.evaluation.visits) {
    visits.push_back({{"id", v.id}, {"arrival", v.arrival}, {"wait", v.wait}, {"delay", v.delay}});
  }
  const auto& ev = sol.evaluation;
  json doc = {{"routes", routes},
              {"visits", visits},
              {"route_costs", ev.route_costs},
              {"travel", ev.travel},
              {"wait", ev.wait},
              {"delay_hours", ev.delay_hours},
              {"delay_penalty", ev.delay_penalty},
              {"objective", ev.objective}};
  return doc.dump(2) + "\n";
}

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--seed", c.seed, "Base random seed");
  cmd->add_option("--jobs", c.jobs, "Parallel workers")->check(CLI::PositiveNumber);
  cmd->add_option("--out", c.out, "Output file or directory");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dynamic time slot assignment and routing simulator"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);

  // generate
  Common gen_c;
  std::string gen_system = "S1";
  int gen_count = 1;
  std::string gen_pool;
  auto* gen = app.add_subcommand("generate", "Write instance files");
  add_common(gen, gen_c);
  gen->add_option("--system", gen_system, "Preset S1..S6");
  gen->add_option("--instances", gen_count, "Number of instances")->check(CLI::PositiveNumber);
  gen->add_option("--location-pool", gen_pool, "File of 'x y' rows to draw positions from");

  // run
  Common run_c;
  std::string run_config;
  std::optional<std::string> run_system;
  std::vector<std::string> run_policies;
  std::optional<int> run_instances;
  auto* run = app.add_subcommand("run", "Run a benchmark");
  add_common(run, run_c);
  run->add_option("--config", run_config, "JSON config file");
  run->add_option("--system", run_system, "Preset S1..S6 (overrides config)");
  run->add_option("--policy", run_policies, "Policy name, repeatable (overrides config)");
  run->add_option("--instances", run_instances, "Instance count (overrides config)");

  // solve / oracle / export-milp
  Common solve_c, oracle_c, milp_c;
  std::string solve_task, oracle_task, milp_task;
  int solve_sweeps = SolverBudget{}.max_sweeps, solve_restarts = SolverBudget{}.restarts;
  double solve_limit = 0.0;
  auto* solve = app.add_subcommand("solve", "Solve one routing task heuristically");
  add_common(solve, solve_c);
  solve->add_option("task", solve_task, "Task file")->required();
  solve->add_option("--max-sweeps", solve_sweeps);
  solve->add_option("--restarts", solve_restarts);
  solve->add_option("--time-limit-ms", solve_limit);
  auto* oracle = app.add_subcommand("oracle", "Solve one small routing task exactly");
  add_common(oracle, oracle_c);
  oracle->add_option("task", oracle_task, "Task file")->required();
  auto* milp = app.add_subcommand("export-milp", "Print the routing MILP in LP format");
  add_common(milp, milp_c);
  milp->add_option("task", milp_task, "Task file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      SystemPreset preset = system_preset(gen_system);
      if (!gen_pool.empty()) preset.gen.location_pool = load_location_pool(gen_pool);
      const std::uint64_t base = gen_c.seed.value_or(1);
      const fs::path dir = gen_c.out.empty() ? fs::path("instances") : fs::path(gen_c.out);
      fs::create_directories(dir);
      for (int i = 0; i < gen_count; ++i) {
        const Instance inst = generate_instance(preset.params, preset.gen, instance_seed(base, static_cast<std::size_t>(i)));
        char name[32];
        std::snprintf(name, sizeof name, "instance_%03d.json", i);
        std::ofstream f(dir / name, std::ios::binary);
        if (!f) throw Error("cannot write " + (dir / name).string());
        f << encode_instance(inst);
      }
      return 0;
    }
    if (*run) {
      json j = run_config.empty() ? json::object() : read_json(run_config);
      if (run_system) j["system"] = *run_system;
      if (!run_policies.empty()) j["policies"] = run_policies;
      if (run_instances) j["instances"] = *run_instances;
      if (run_c.seed) j["seed"] = *run_c.seed;
      if (run->count("--jobs")) j["jobs"] = run_c.jobs;
      if (!run_c.out.empty()) j["out"] = run_c.out;
      if (!j.contains("policies")) j["policies"] = {"RAN"};
      const BenchConfig cfg = config_from_json(j);
      const Report report = run_benchmark(cfg);
      write_report(report, cfg.out_dir);
      for (const auto& s : report.summaries) {
        std::fprintf(stderr, "%-8s TC %.3f  SAR %.2f  SE %.3f  failed %zu\n", s.name.c_str(), s.metrics.total_cost,
                     s.metrics.satisfied_ratio, s.metrics.served_sd, s.failed);
      }
      return report.all_succeeded() ? 0 : 1;
    }
    if (*solve) {
      const RoutingTask task = load_task(solve_task);
      SolverBudget budget{solve_sweeps, solve_limit, solve_restarts};
      Rng rng(solve_c.seed.value_or(0x5eed));
      emit(solution_json(solve_vrpstw(task, budget, rng)), solve_c.out, "solution.json");
      return 0;
    }
    if (*oracle) {
      emit(solution_json(solve_vrpstw_exact(load_task(oracle_task))), oracle_c.out, "solution.json");
      return 0;
    }
    if (*milp) {
      emit(export_milp(load_task(milp_task)), milp_c.out, "model.lp");
      return 0;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
