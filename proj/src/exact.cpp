#include <algorithm>
#include <numeric>

#include "dtsap/error.hpp"
#include "dtsap/routing.hpp"
#include "route_model.hpp"

namespace dtsap {

namespace {

struct PartitionSearch {
  const std::vector<double>& subset_cost;
  const std::vector<std::vector<int>>& subset_route;
  int vehicles;
  double best = kInfinity;
  std::vector<std::vector<int>> best_routes;
  std::vector<unsigned> blocks;

  void run(unsigned remaining, double cost) {
    if (remaining == 0) {
      std::vector<std::vector<int>> routes;
      for (unsigned b : blocks) routes.push_back(subset_route[b]);
      std::sort(routes.begin(), routes.end());
      if (cost < best || (cost == best && routes < best_routes)) {
        best = cost;
        best_routes = std::move(routes);
      }
      return;
    }
    if (static_cast<int>(blocks.size()) == vehicles) return;
    const unsigned low = remaining & (~remaining + 1u);
    for (unsigned sub = remaining; sub != 0; sub = (sub - 1) & remaining) {
      if (!(sub & low)) continue;
      blocks.push_back(sub);
      run(remaining ^ sub, cost + subset_cost[sub]);
      blocks.pop_back();
    }
  }
};

}  // namespace

Solution solve_vrpstw_exact(const RoutingTask& task) {
  task.validate();
  const std::size_t n = task.jobs.size();
  if (n > kExactJobLimit) {
    throw Error("exact solver: instance too large (" + std::to_string(n) + " jobs, limit " +
                std::to_string(kExactJobLimit) + ")");
  }
  // index order follows id order so that index sequences compare like id sequences
  std::vector<Job> jobs = task.jobs;
  std::sort(jobs.begin(), jobs.end(), [](const Job& a, const Job& b) { return a.id < b.id; });
  std::vector<Point> positions;
  std::vector<TimeWindow> windows;
  for (const auto& j : jobs) {
    positions.push_back(j.position);
    windows.push_back(j.window);
  }
  detail::RouteModel model(task.depot, positions, windows, task.params);

  const unsigned full = (1u << n) - 1u;
  std::vector<double> subset_cost(full + 1u, 0.0);
  std::vector<std::vector<int>> subset_route(full + 1u);
  for (unsigned mask = 1; mask <= full; ++mask) {
    std::vector<int> seq;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (1u << i)) seq.push_back(static_cast<int>(i));
    }
    // permutations visited in lexicographic order; strict < keeps the smallest
    double best = kInfinity;
    std::vector<int> best_seq;
    do {
      double c = model.route_cost(seq);
      if (c < best) {
        best = c;
        best_seq = seq;
      }
    } while (std::next_permutation(seq.begin(), seq.end()));
    subset_cost[mask] = best;
    subset_route[mask] = std::move(best_seq);
  }

  PartitionSearch search{subset_cost, subset_route, task.params.vehicles, kInfinity, {}, {}};
  search.run(full, 0.0);

  RoutePlan plan;
  for (const auto& r : search.best_routes) {
    auto& route = plan.routes.emplace_back();
    for (int j : r) route.push_back(jobs[static_cast<std::size_t>(j)].id);
  }
  plan.routes.resize(static_cast<std::size_t>(task.params.vehicles));
  auto ev = evaluate_plan(plan, task);
  return {std::move(plan), std::move(ev)};
}

}  // namespace dtsap
