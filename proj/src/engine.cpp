#include "dtsap/engine.hpp"

#include <algorithm>
#include <chrono>

#include "json.hpp"

#include "dtsap/error.hpp"
#include "dtsap/serialization.hpp"

namespace dtsap {

namespace {

void assign_in_place(State& state, const SlotId& slot, const SlotCalendar& calendar) {
  if (!state.new_customer) throw Error("apply_tsa: no pending customer");
  if (!is_assignable(slot, state.day, calendar)) {
    throw Error("apply_tsa: slot " + to_string(slot) + " is not assignable on day " + std::to_string(state.day) +
                " (customer " + std::to_string(state.new_customer->id) + ")");
  }
  state.assigned.push_back(std::move(*state.new_customer));
  state.decisions.push_back(slot);
  state.new_customer.reset();
  ++state.epoch;
}

EpochOutcome route_in_place(State& state, const Router& router, const Point& depot, const SystemParams& params,
                            bool keep_detail) {
  if (state.new_customer) throw Error("apply_rp: a customer is still waiting for a slot");
  const int service_day = state.day + 1;
  EpochOutcome out;
  out.kind = EpochKind::Routing;
  out.day = state.day;
  out.epoch = state.epoch;
  out.routed_day = service_day;
  out.assigned_before = state.assigned.size();

  RoutingTask task = routing_task_for_day(state, service_day, depot, params);
  if (!task.jobs.empty()) {
    Solution sol = router.solve(task);
    out.cost = sol.evaluation.objective;
    out.travel = sol.evaluation.travel;
    out.wait = sol.evaluation.wait;
    out.delay_hours = sol.evaluation.delay_hours;
    out.delay_penalty = sol.evaluation.delay_penalty;
    if (keep_detail) out.plan = std::move(sol.plan);
  }

  std::size_t keep = 0;
  for (std::size_t i = 0; i < state.assigned.size(); ++i) {
    if (state.decisions[i].day == service_day) {
      if (keep_detail) out.routed.emplace_back(state.assigned[i].id, state.decisions[i]);
      continue;
    }
    if (keep != i) {
      state.assigned[keep] = std::move(state.assigned[i]);
      state.decisions[keep] = state.decisions[i];
    }
    ++keep;
  }
  state.assigned.resize(keep);
  state.decisions.resize(keep);
  state.day = service_day;
  state.epoch = 1;
  return out;
}

// Drives the day loop; `result` is null when only the cost is needed.
double run_days(State& state, std::span<const std::vector<Customer>> arrivals, int horizon_days,
                const Policy& policy, const Router& router, const Point& depot, const SystemParams& params,
                Rng& rng, EpisodeResult* result) {
  using clock = std::chrono::steady_clock;
  const auto& cal = params.calendar;
  const int first_day = state.day;
  const int last_routed_day = horizon_days + cal.lookahead_days() - 1;
  double total = 0.0;

  while (state.day < horizon_days) {
    const auto offset = static_cast<std::size_t>(state.day - first_day);
    if (offset < arrivals.size()) {
      const auto allowed = assignable_slots(state.day, cal);
      for (const Customer& c : arrivals[offset]) {
        state.new_customer = c;
        const auto started = clock::now();
        SlotId slot = policy.decide(state, allowed, rng);
        const double seconds = std::chrono::duration<double>(clock::now() - started).count();
        if (!is_assignable(slot, state.day, cal)) {
          throw Error("policy '" + policy.name() + "' returned slot " + to_string(slot) + " on day " +
                      std::to_string(state.day) + " for customer " + std::to_string(c.id) +
                      "; allowed days are " + std::to_string(state.day + 1) + ".." +
                      std::to_string(state.day + cal.lookahead_days()));
        }
        const double penalty = assignment_penalty(c.preferences, slot, params.assignment_penalty);
        total += penalty;
        if (result) {
          EpochOutcome out;
          out.kind = EpochKind::Assignment;
          out.day = state.day;
          out.epoch = state.epoch;
          out.cost = penalty;
          out.assigned_before = state.assigned.size();
          out.customer = c.id;
          out.slot = slot;
          out.satisfied = c.prefers(slot);
          out.decision_seconds = seconds;
          result->ledger.push_back(std::move(out));
          result->customers.push_back({c.id, true, c.preferences, slot});
          result->assignment_penalties += penalty;
          result->decision_seconds += seconds;
          ++result->assignment_epochs;
        }
        assign_in_place(state, slot, cal);
      }
    }
    EpochOutcome out = route_in_place(state, router, depot, params, result != nullptr);
    total += out.cost;
    if (result) result->ledger.push_back(std::move(out));
  }
  // tail days: routing only
  while (state.day < last_routed_day) {
    EpochOutcome out = route_in_place(state, router, depot, params, result != nullptr);
    total += out.cost;
    if (result) result->ledger.push_back(std::move(out));
  }
  if (!state.assigned.empty()) {
    throw Error("episode: " + std::to_string(state.assigned.size()) + " customers left unrouted after the tail days");
  }
  return total;
}

}  // namespace

State apply_tsa(State state, const SlotId& slot, const SlotCalendar& calendar) {
  assign_in_place(state, slot, calendar);
  return state;
}

std::pair<State, EpochOutcome> apply_rp(State state, const Router& router, const Point& depot,
                                        const SystemParams& params) {
  EpochOutcome out = route_in_place(state, router, depot, params, true);
  return {std::move(state), std::move(out)};
}

double epoch_cost(const EpochOutcome& outcome) { return outcome.cost; }

RoutingTask routing_task_for_day(const State& state, int service_day, const Point& depot,
                                 const SystemParams& params) {
  RoutingTask task;
  task.depot = depot;
  task.params = params;
  for (std::size_t i = 0; i < state.assigned.size(); ++i) {
    const SlotId& s = state.decisions[i];
    if (s.day != service_day) continue;
    task.jobs.push_back({state.assigned[i].id, state.assigned[i].position, slot_window(s, params.calendar)});
  }
  return task;
}

State initial_state(const Instance& inst) {
  State s;
  for (const auto& a : inst.preexisting) {
    s.assigned.push_back(a.customer);
    s.decisions.push_back(a.slot);
  }
  return s;
}

EpisodeResult run_episode(const Instance& inst, const Policy& policy, const Router& router, Rng& rng) {
  inst.validate();
  const auto& params = inst.params;
  EpisodeResult result;
  State state = initial_state(inst);
  for (const auto& a : inst.preexisting) result.customers.push_back({a.customer.id, false, a.customer.preferences, a.slot});

  run_days(state, inst.arrivals, inst.horizon_days(), policy, router, inst.depot, params, rng, &result);

  const int last_day = inst.horizon_days() + params.calendar.lookahead_days() - 1;
  result.served_per_day.assign(static_cast<std::size_t>(last_day), 0);
  for (const auto& e : result.ledger) {
    result.total_cost += e.cost;
    if (e.kind != EpochKind::Routing) continue;
    result.served_per_day[static_cast<std::size_t>(e.routed_day - 1)] = static_cast<int>(e.routed.size());
    result.travel += e.travel;
    result.wait += e.wait;
    result.delay_penalty += e.delay_penalty;
  }
  return result;
}

double simulate_remaining(State state, std::span<const std::vector<Customer>> arrivals, int horizon_days,
                          const Policy& policy, const Router& router, const Point& depot,
                          const SystemParams& params, Rng& rng) {
  return run_days(state, arrivals, horizon_days, policy, router, depot, params, rng, nullptr);
}

std::string episode_trace(const EpisodeResult& result) {
  std::string out;
  for (const auto& e : result.ledger) {
    nlohmann::json j;
    j["day"] = e.day;
    j["epoch"] = e.epoch;
    j["assigned"] = e.assigned_before;
    j["cost"] = e.cost;
    if (e.kind == EpochKind::Assignment) {
      j["kind"] = "TSA";
      j["customer"] = e.customer;
      j["slot"] = to_json(e.slot);
      j["satisfied"] = e.satisfied;
    } else {
      j["kind"] = "RP";
      j["routed_day"] = e.routed_day;
      j["served"] = e.routed.size();
      j["travel"] = e.travel;
      j["wait"] = e.wait;
      j["delay_penalty"] = e.delay_penalty;
    }
    out += j.dump();
    out += '\n';
  }
  return out;
}

}  // namespace dtsap
