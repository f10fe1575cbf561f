#pragma once

#include <span>
#include <string>
#include <vector>

#include "dtsap/core.hpp"
#include "dtsap/random.hpp"

namespace dtsap {

struct Job {
  CustomerId id = 0;
  Point position;
  TimeWindow window;  // absolute hours of the service day
};

// One single-day routing problem with soft time windows.
struct RoutingTask {
  Point depot;
  std::vector<Job> jobs;
  SystemParams params;

  void validate() const;
};

using Route = std::vector<CustomerId>;

// At most n_v routes; empty routes are allowed.
struct RoutePlan {
  std::vector<Route> routes;
  friend bool operator==(const RoutePlan&, const RoutePlan&) = default;
};

struct Visit {
  CustomerId id = 0;
  double arrival = 0.0;  // z
  double wait = 0.0;     // w = max(0, a - z)
  double delay = 0.0;    // d = max(0, z - b), measured on arrival
  double start() const { return arrival + wait; }
};

struct RouteEvaluation {
  std::vector<Visit> visits;        // in route order, routes concatenated
  std::vector<double> route_costs;  // travel + wait + beta * delay per route
  double travel = 0.0;
  double wait = 0.0;
  double delay_hours = 0.0;
  double delay_penalty = 0.0;  // beta * delay_hours
  double objective = 0.0;

  // Vehicle duration excluding service: travel plus waiting.
  double travel_cost() const { return travel + wait; }
};

// Forward recursion from departure at time 0; waits exactly max(0, a - z).
RouteEvaluation evaluate_route(std::span<const CustomerId> route, const RoutingTask& task);

// Requires the plan to partition the task's jobs.
RouteEvaluation evaluate_plan(const RoutePlan& plan, const RoutingTask& task);

struct SolverBudget {
  int max_sweeps = 500;
  double time_limit_ms = 0.0;  // 0 disables the wall-clock limit
  int restarts = 30;           // perturbation rounds (ruin-and-recreate or double bridge) after the first descent
};

struct Solution {
  RoutePlan plan;
  RouteEvaluation evaluation;
};

// Cheapest insertion in order of window opening time; no improvement.
Solution construct_cheapest_insertion(const RoutingTask& task);

// Construction followed by first-improvement local search (relocate,
// intra-route 2-opt, inter-route swap).
Solution solve_vrpstw(const RoutingTask& task, const SolverBudget& budget, Rng& rng);

// Local search starting from `plan`.
Solution improve_plan(const RoutingTask& task, const RoutePlan& plan, const SolverBudget& budget);

inline constexpr std::size_t kExactJobLimit = 9;

// Global optimum by enumeration; ties go to the lexicographically smallest
// route list. Throws for more than kExactJobLimit jobs.
Solution solve_vrpstw_exact(const RoutingTask& task);

// Solver handle used by the simulator. Implementations must be deterministic
// functions of the task.
class Router {
 public:
  virtual ~Router() = default;
  virtual Solution solve(const RoutingTask& task) const = 0;
};

class HeuristicRouter final : public Router {
 public:
  explicit HeuristicRouter(SolverBudget budget = {}, std::uint64_t seed = 0x5eed)
      : budget_(budget), seed_(seed) {}
  Solution solve(const RoutingTask& task) const override;
  const SolverBudget& budget() const { return budget_; }

 private:
  SolverBudget budget_;
  std::uint64_t seed_;
};

class ExactRouter final : public Router {
 public:
  Solution solve(const RoutingTask& task) const override { return solve_vrpstw_exact(task); }
};

// ---- multi-period planning ------------------------------------------------

struct DayCandidate {
  int day = 0;
  TimeWindow window;
};

struct PlanningJob {
  CustomerId id = 0;
  Point position;
  std::vector<DayCandidate> candidates;  // one for committed customers
};

struct PlannedVisit {
  CustomerId id = 0;
  int day = 0;
  int route = 0;
  int position = 0;
  double start = 0.0;  // planned service start
};

struct ScenarioPlan {
  std::vector<PlannedVisit> visits;  // aligned with the input jobs
  double objective = 0.0;
};

// Committed jobs are inserted first in input order, then flexible jobs by
// repeated global cheapest insertion over (job, day, route, position); each
// day is finally improved by local search.
ScenarioPlan solve_multiperiod(std::span<const PlanningJob> jobs, std::span<const int> days,
                               const Point& depot, const SystemParams& params,
                               const SolverBudget& budget);

// Algebraic LP-format text of the routing MILP (variables y_i_j_v, z_i, w_i, d_i;
// node 0 is the depot, jobs are numbered 1..n in task order).
std::string export_milp(const RoutingTask& task);

}  // namespace dtsap
