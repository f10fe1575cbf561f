#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dtsap/core.hpp"
#include "dtsap/instance.hpp"
#include "dtsap/random.hpp"
#include "dtsap/routing.hpp"

namespace dtsap {

// Decision state: the pending customer (if any) and the committed
// assignments, aligned by index.
struct State {
  int day = 0;
  int epoch = 1;
  std::optional<Customer> new_customer;
  std::vector<Customer> assigned;
  std::vector<SlotId> decisions;
};

struct ScoredSlot {
  SlotId slot;
  double score = 0.0;
};

class Policy {
 public:
  virtual ~Policy() = default;
  virtual std::string name() const = 0;
  // Must return an element of `allowed`.
  virtual SlotId decide(const State& state, std::span<const SlotId> allowed, Rng& rng) const = 0;
  // Scored candidates for pruned rollouts; empty when the policy has no scores.
  virtual std::vector<ScoredSlot> candidate_actions(const State& state,
                                                    std::span<const SlotId> allowed) const {
    (void)state;
    (void)allowed;
    return {};
  }
};

enum class EpochKind { Assignment, Routing };

struct EpochOutcome {
  EpochKind kind = EpochKind::Assignment;
  int day = 0;
  int epoch = 0;
  double cost = 0.0;
  std::size_t assigned_before = 0;  // |C| when the epoch started

  // assignment epochs
  CustomerId customer = 0;
  SlotId slot;
  bool satisfied = true;
  double decision_seconds = 0.0;

  // routing epochs
  int routed_day = 0;
  std::vector<std::pair<CustomerId, SlotId>> routed;
  RoutePlan plan;
  double travel = 0.0;
  double wait = 0.0;
  double delay_hours = 0.0;
  double delay_penalty = 0.0;
};

struct CustomerRecord {
  CustomerId id = 0;
  bool dynamic = true;
  std::vector<SlotId> preferences;
  SlotId slot;
};

struct EpisodeResult {
  std::vector<EpochOutcome> ledger;
  std::vector<int> served_per_day;  // [0] is day 1, through day T + n_d - 1
  std::vector<CustomerRecord> customers;
  double total_cost = 0.0;
  double travel = 0.0;
  double wait = 0.0;
  double delay_penalty = 0.0;
  double assignment_penalties = 0.0;
  double decision_seconds = 0.0;
  int assignment_epochs = 0;

  double travel_cost() const { return travel + wait; }
};

State apply_tsa(State state, const SlotId& slot, const SlotCalendar& calendar);

// Routes every customer committed to day state.day + 1 and advances the day.
std::pair<State, EpochOutcome> apply_rp(State state, const Router& router, const Point& depot,
                                        const SystemParams& params);

double epoch_cost(const EpochOutcome& outcome);

RoutingTask routing_task_for_day(const State& state, int service_day, const Point& depot,
                                 const SystemParams& params);

// Initial state of an instance: pre-existing assignments, day 0, no pending customer.
State initial_state(const Instance& inst);

EpisodeResult run_episode(const Instance& inst, const Policy& policy, const Router& router, Rng& rng);

// Cost of continuing from `state` (no pending customer) to the end of the
// tail days. arrivals[0] holds the remaining arrivals of state.day,
// arrivals[i] those of state.day + i; days up to horizon_days - 1 take arrivals.
double simulate_remaining(State state, std::span<const std::vector<Customer>> arrivals, int horizon_days,
                          const Policy& policy, const Router& router, const Point& depot,
                          const SystemParams& params, Rng& rng);

// One JSON object per epoch.
std::string episode_trace(const EpisodeResult& result);

}  // namespace dtsap
