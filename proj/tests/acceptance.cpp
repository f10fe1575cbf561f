// Acceptance suite: one PASS/FAIL line per criterion; exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "oracles.hpp"

#include "dtsap/bench.hpp"
#include "dtsap/instance.hpp"
#include "dtsap/policies.hpp"
#include "dtsap/routing.hpp"

using namespace dtsap;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

int failures = 0;

void report(int id, bool ok, const std::string& what, const std::string& detail) {
  std::printf("[%s] %2d %s: %s\n", ok ? "PASS" : "FAIL", id, what.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

RoutingTask random_s1_task(Rng& rng, int n) {
  const auto preset = system_preset("S1");
  std::uniform_real_distribution<double> u(0.0, preset.gen.area_side);
  std::uniform_int_distribution<int> half(1, 2);
  RoutingTask t;
  t.depot = preset.gen.depot;
  t.params = preset.params;
  for (int i = 0; i < n; ++i) {
    t.jobs.push_back({static_cast<CustomerId>(i + 1), {u(rng), u(rng)}, slot_window({1, half(rng)}, t.params.calendar)});
  }
  return t;
}

void criterion_route_evaluation() {
  const auto start = Clock::now();
  Rng rng(101);
  std::uniform_int_distribution<int> len(1, 6);
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    SystemParams params = system_preset(k % 2 ? "S1" : "S3").params;
    RoutingTask t = random_s1_task(rng, len(rng));
    t.params = params;
    std::vector<CustomerId> route;
    for (const auto& j : t.jobs) route.push_back(j.id);
    std::shuffle(route.begin(), route.end(), rng);
    const int levels = route.size() >= 6 ? 4 : route.size() >= 5 ? 5 : 8;
    const double grid = oracle::wait_grid_minimum(t, route, 0.05, levels);
    worst = std::max(worst, std::abs(grid - evaluate_route(route, t).objective));
  }
  const double secs = seconds_since(start);
  report(1, worst <= 1e-6 && secs < 5.0, "route-evaluation exactness",
         fmt("1000 routes, max |recursion - wait-grid| = %.3g (tol 1e-6), %.2f s (limit 5 s)", worst, secs));
}

void criterion_heuristic_gap() {
  const auto start = Clock::now();
  Rng rng(202);
  int within = 0;
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    RoutingTask t = random_s1_task(rng, 6);
    t.params.vehicles = 2;
    const double exact = solve_vrpstw_exact(t).evaluation.objective;
    Rng solver_rng(static_cast<std::uint64_t>(k));
    const double heur = solve_vrpstw(t, SolverBudget{}, solver_rng).evaluation.objective;
    const double gap = exact > 0.0 ? (heur - exact) / exact : 0.0;
    worst = std::max(worst, gap);
    if (gap <= 0.02 + 1e-12) ++within;
  }
  const double secs = seconds_since(start);
  report(2, within >= 95 && secs < 60.0, "heuristic-vs-oracle gap",
         fmt("%d/100 tasks within 2%% (need >= 95), worst gap %.2f%%, %.2f s (limit 60 s)", within, 100.0 * worst, secs));
}

bool conservation_ok(const Report& r, std::string& why) {
  for (const auto& row : r.rows) {
    if (!row.result) {
      why = row.policy_name + " instance " + std::to_string(row.instance) + " failed: " + row.error;
      return false;
    }
    const auto& res = *row.result;
    const auto fold = oracle::fold_ledger(res);
    if (fold.total != res.total_cost) {
      why = "ledger fold differs from TC";
      return false;
    }
    if (fold.routed.size() != res.customers.size()) {
      why = "routed set differs from customer set";
      return false;
    }
    for (const auto& [id, n] : fold.routed) {
      if (n != 1) {
        why = "customer routed more than once";
        return false;
      }
    }
    for (const auto& c : res.customers) {
      if (!fold.routed.contains(c.id)) {
        why = "customer never routed";
        return false;
      }
    }
    long served = 0;
    for (int s : res.served_per_day) served += s;
    if (static_cast<std::size_t>(served) != res.customers.size()) {
      why = "served counts do not sum to the customer count";
      return false;
    }
  }
  return true;
}

const PolicySummary& summary_of(const Report& r, const std::string& name) {
  for (const auto& s : r.summaries) {
    if (s.name == name) return s;
  }
  throw std::runtime_error("missing policy " + name);
}

double mean_dt(const Report& r, const std::string& name) {
  double total = 0.0;
  long epochs = 0;
  for (const auto& row : r.rows) {
    if (row.policy_name != name || !row.result) continue;
    total += row.result->decision_seconds;
    epochs += row.result->assignment_epochs;
  }
  return epochs ? total / static_cast<double>(epochs) : 0.0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance suite"};
  std::string out = "acceptance_out";
  int jobs = 1;
  app.add_option("--out", out, "Directory for the benchmark reports");
  app.add_option("--jobs", jobs, "Parallel workers")->check(CLI::PositiveNumber);
  CLI11_PARSE(app, argc, argv);

  criterion_route_evaluation();
  criterion_heuristic_gap();

  const json ran_cfg = {{"system", "S1"}, {"policies", {"RAN"}}, {"instances", 100}, {"seed", 2024}, {"jobs", jobs}};
  const json paired_cfg = {{"system", "S1"},
                           {"policies",
                            {"RAN", "SEG", {{"name", "RAN-RE"}, {"rollouts", 10}}, {{"name", "SEG-RE"}, {"rollouts", 10}},
                             {{"name", "SBP"}, {"scenarios", 30}, {"sampling_horizon", 1}}}},
                           {"instances", 30},
                           {"seed", 7},
                           {"jobs", jobs}};

  auto t0 = Clock::now();
  const Report ran = run_benchmark(config_from_json(ran_cfg));
  write_report(ran, fs::path(out) / "ran100");
  const double ran_secs = seconds_since(t0);
  const auto& ran_m = summary_of(ran, "RAN").metrics;
  report(3, ran.all_succeeded() && ran_m.satisfied_ratio >= 27.0 && ran_m.satisfied_ratio <= 33.0, "RAN SAR",
         fmt("100 S1 episodes, SAR %.2f%% (need [27, 33]), %.1f s", ran_m.satisfied_ratio, ran_secs));

  t0 = Clock::now();
  const Report paired = run_benchmark(config_from_json(paired_cfg));
  write_report(paired, fs::path(out) / "paired30");
  const double paired_secs = seconds_since(t0);
  const auto& m_ran = summary_of(paired, "RAN").metrics;
  const auto& m_seg = summary_of(paired, "SEG").metrics;
  const auto& m_ranre = summary_of(paired, "RAN-RE").metrics;
  const auto& m_segre = summary_of(paired, "SEG-RE").metrics;
  const auto& m_sbp = summary_of(paired, "SBP").metrics;
  const bool ok = paired.all_succeeded();

  report(4, ok && m_ranre.total_cost <= 0.9 * m_ran.total_cost && paired_secs < 1800.0, "rollout improvement over RAN",
         fmt("30 paired S1 episodes, m=10: RAN-RE TC %.2f vs RAN TC %.2f, ratio %.3f (need <= 0.90); "
             "whole paired set %.1f s (limit 1800 s)",
             m_ranre.total_cost, m_ran.total_cost, m_ranre.total_cost / m_ran.total_cost, paired_secs));
  report(5, ok && m_segre.total_cost <= 0.9 * m_seg.total_cost, "rollout improvement over SEG",
         fmt("SEG-RE TC %.2f vs SEG TC %.2f, ratio %.3f (need <= 0.90)", m_segre.total_cost, m_seg.total_cost,
             m_segre.total_cost / m_seg.total_cost));
  report(6, ok && m_sbp.total_cost < m_ran.total_cost && m_sbp.satisfied_ratio >= 50.0 && m_sbp.satisfied_ratio <= 66.0,
         "SBP ordering", fmt("q=30: SBP TC %.2f vs RAN TC %.2f (need <), SBP SAR %.2f%% (need [50, 66])",
                             m_sbp.total_cost, m_ran.total_cost, m_sbp.satisfied_ratio));

  std::string why_ran, why_paired;
  const bool conserved = conservation_ok(ran, why_ran) && conservation_ok(paired, why_paired);
  report(7, conserved, "conservation",
         conserved ? fmt("%zu episodes: ledger fold equals TC, each customer routed once, none left after the tail",
                         ran.rows.size() + paired.rows.size())
                   : why_ran + why_paired);

  const Report ran_again = run_benchmark(config_from_json(ran_cfg));
  const Report paired_again = run_benchmark(config_from_json(paired_cfg));
  const bool same = episodes_csv(ran) == episodes_csv(ran_again) && summary_json(ran) == summary_json(ran_again) &&
                    episodes_csv(paired) == episodes_csv(paired_again) &&
                    summary_json(paired) == summary_json(paired_again);
  report(8, same, "determinism",
         same ? std::string("criteria 3-7 configs re-run with the same seeds: episode and summary reports byte-identical")
              : std::string("reports differ between identical runs"));

  const double dt_re = mean_dt(paired, "RAN-RE"), dt_sbp = mean_dt(paired, "SBP");
  report(9, dt_re < 2.0 && dt_sbp < 6.0, "decision time",
         fmt("mean per-epoch DT: RAN-RE %.4f s (limit 2 s), SEG-RE %.4f s, SBP %.4f s (limit 6 s)", dt_re,
             mean_dt(paired, "SEG-RE"), dt_sbp));

  const auto cal = SlotCalendar::standard();
  const bool seg = seg_slot(1, 1, cal) == SlotId{2, 1} && seg_slot(1, 2, cal) == SlotId{2, 2} &&
                   seg_slot(2, 1, cal) == SlotId{7, 1} && seg_slot(2, 2, cal) == SlotId{7, 2};
  report(10, seg, "SEG regression",
         "day 1 regions 1/2 -> (2,AM)/(2,PM); day 2 regions 1/2 -> (7,AM)/(7,PM)");

  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
