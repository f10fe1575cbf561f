#include <algorithm>

#include "dtsap/error.hpp"
#include "dtsap/routing.hpp"
#include "route_model.hpp"

namespace dtsap {

ScenarioPlan solve_multiperiod(std::span<const PlanningJob> jobs, std::span<const int> days,
                               const Point& depot, const SystemParams& params,
                               const SolverBudget& budget) {
  params.validate();
  const std::size_t n = jobs.size();
  const std::size_t n_days = days.size();
  auto day_slot = [&](int day) -> std::size_t {
    auto it = std::find(days.begin(), days.end(), day);
    if (it == days.end()) throw Error("multi-period: candidate day " + std::to_string(day) + " outside horizon");
    return static_cast<std::size_t>(it - days.begin());
  };

  std::vector<Point> positions;
  positions.reserve(n);
  for (const auto& j : jobs) {
    if (j.candidates.empty()) throw Error("multi-period: job " + std::to_string(j.id) + " has no candidate day");
    positions.push_back(j.position);
  }
  // windows[d][j]: job j's window if it were served on days[d]
  std::vector<std::vector<TimeWindow>> windows(n_days, std::vector<TimeWindow>(n));
  for (std::size_t j = 0; j < n; ++j) {
    for (const auto& c : jobs[j].candidates) windows[day_slot(c.day)][j] = c.window;
  }
  const detail::RouteModel base(depot, positions, windows.empty() ? std::vector<TimeWindow>(n) : windows[0], params);
  std::vector<detail::RouteModel> models;
  models.reserve(n_days);
  for (std::size_t d = 0; d < n_days; ++d) models.push_back(base.with_windows(windows[d]));

  std::vector<detail::IndexPlan> plans(n_days, detail::IndexPlan(static_cast<std::size_t>(params.vehicles)));
  std::vector<std::vector<double>> costs(n_days, std::vector<double>(static_cast<std::size_t>(params.vehicles), 0.0));

  auto single_day = [&](const PlanningJob& job) {
    return std::all_of(job.candidates.begin(), job.candidates.end(),
                       [&](const DayCandidate& c) { return c.day == job.candidates.front().day; });
  };

  struct Move {
    double delta = kInfinity;
    std::size_t day = 0, route = 0, pos = 0;
  };
  auto best_insertion = [&](int job, std::size_t d, Move& best) {
    const auto& model = models[d];
    bool tried_empty = false;
    for (std::size_t r = 0; r < plans[d].size(); ++r) {
      const auto& route = plans[d][r];
      if (route.empty()) {
        if (tried_empty) continue;
        tried_empty = true;
      }
      for (std::size_t pos = 0; pos <= route.size(); ++pos) {
        double delta = model.cost_with_insert(route, pos, job) - costs[d][r];
        if (delta < best.delta) best = {delta, d, r, pos};
      }
    }
  };
  auto apply = [&](int job, const Move& m) {
    auto& route = plans[m.day][m.route];
    route.insert(route.begin() + static_cast<std::ptrdiff_t>(m.pos), job);
    costs[m.day][m.route] = models[m.day].route_cost(route);
  };

  std::vector<int> flexible;
  for (std::size_t j = 0; j < n; ++j) {
    if (!single_day(jobs[j])) {
      flexible.push_back(static_cast<int>(j));
      continue;
    }
    Move m;
    best_insertion(static_cast<int>(j), day_slot(jobs[j].candidates.front().day), m);
    apply(static_cast<int>(j), m);
  }

  while (!flexible.empty()) {
    Move best;
    std::size_t pick = 0;
    for (std::size_t f = 0; f < flexible.size(); ++f) {
      const int job = flexible[f];
      Move m;
      for (const auto& c : jobs[static_cast<std::size_t>(job)].candidates) best_insertion(job, day_slot(c.day), m);
      if (m.delta < best.delta) {
        best = m;
        pick = f;
      }
    }
    apply(flexible[pick], best);
    flexible.erase(flexible.begin() + static_cast<std::ptrdiff_t>(pick));
  }

  ScenarioPlan out;
  out.visits.resize(n);
  for (std::size_t d = 0; d < n_days; ++d) {
    detail::local_search(models[d], plans[d], budget);
    for (std::size_t r = 0; r < plans[d].size(); ++r) {
      const auto& route = plans[d][r];
      detail::RouteModel::Walker walk(models[d]);
      for (std::size_t p = 0; p < route.size(); ++p) {
        walk.step(route[p]);
        auto& v = out.visits[static_cast<std::size_t>(route[p])];
        v.id = jobs[static_cast<std::size_t>(route[p])].id;
        v.day = days[d];
        v.route = static_cast<int>(r);
        v.position = static_cast<int>(p);
        v.start = walk.last_start();
      }
      out.objective += models[d].route_cost(route);
    }
  }
  return out;
}

}  // namespace dtsap
