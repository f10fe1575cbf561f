#include <algorithm>
#include <unordered_map>

#include "dtsap/error.hpp"
#include "dtsap/routing.hpp"

namespace dtsap {

void RoutingTask::validate() const {
  params.validate();
  std::vector<CustomerId> ids;
  ids.reserve(jobs.size());
  for (const auto& j : jobs) {
    if (!(0.0 <= j.window.earliest && j.window.earliest <= j.window.deadline)) {
      throw Error("task: job " + std::to_string(j.id) + " window must satisfy 0 <= a <= b");
    }
    ids.push_back(j.id);
  }
  std::sort(ids.begin(), ids.end());
  if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) throw Error("task: duplicate job id");
}

namespace {

const Job& find_job(const RoutingTask& task, CustomerId id) {
  auto it = std::find_if(task.jobs.begin(), task.jobs.end(), [&](const Job& j) { return j.id == id; });
  if (it == task.jobs.end()) throw Error("unknown job id " + std::to_string(id));
  return *it;
}

void append_route(RouteEvaluation& ev, std::span<const CustomerId> route, const RoutingTask& task) {
  const auto& p = task.params;
  double t = 0.0;
  Point prev = task.depot;
  double cost = 0.0;
  for (CustomerId id : route) {
    const Job& job = find_job(task, id);
    double leg = travel_time(p, prev, job.position);
    Visit v;
    v.id = id;
    v.arrival = t + leg;
    v.wait = std::max(0.0, job.window.earliest - v.arrival);
    v.delay = std::max(0.0, v.arrival - job.window.deadline);
    cost += leg + v.wait + p.delay_penalty * v.delay;
    ev.travel += leg;
    ev.wait += v.wait;
    ev.delay_hours += v.delay;
    t = v.start() + p.service_time;
    prev = job.position;
    ev.visits.push_back(v);
  }
  if (!route.empty()) {
    double back = travel_time(p, prev, task.depot);
    cost += back;
    ev.travel += back;
  }
  ev.route_costs.push_back(cost);
}

void finalize(RouteEvaluation& ev, const SystemParams& p) {
  ev.delay_penalty = p.delay_penalty * ev.delay_hours;
  ev.objective = 0.0;
  for (double c : ev.route_costs) ev.objective += c;
}

}  // namespace

RouteEvaluation evaluate_route(std::span<const CustomerId> route, const RoutingTask& task) {
  RouteEvaluation ev;
  append_route(ev, route, task);
  finalize(ev, task.params);
  return ev;
}

RouteEvaluation evaluate_plan(const RoutePlan& plan, const RoutingTask& task) {
  if (plan.routes.size() > static_cast<std::size_t>(task.params.vehicles)) {
    throw Error("plan: more routes than vehicles");
  }
  std::unordered_map<CustomerId, int> seen;
  for (const auto& r : plan.routes) {
    for (CustomerId id : r) {
      if (++seen[id] > 1) throw Error("plan: job " + std::to_string(id) + " visited more than once");
    }
  }
  for (const auto& j : task.jobs) {
    if (!seen.contains(j.id)) throw Error("plan: job " + std::to_string(j.id) + " is not visited");
  }
  if (seen.size() != task.jobs.size()) throw Error("plan: route references an unknown job");
  RouteEvaluation ev;
  for (const auto& r : plan.routes) append_route(ev, r, task);
  finalize(ev, task.params);
  return ev;
}

}  // namespace dtsap
