#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "dtsap/engine.hpp"
#include "dtsap/instance.hpp"
#include "dtsap/parallel.hpp"
#include "dtsap/routing.hpp"

namespace dtsap {

// Uniform draw over the allowed slots.
class RandomPolicy final : public Policy {
 public:
  std::string name() const override { return "RAN"; }
  SlotId decide(const State& state, std::span<const SlotId> allowed, Rng& rng) const override;
};

// Angular sector of `p` around `depot`, 1..regions, counterclockwise from
// the positive x-axis, lower bound inclusive. The depot itself is region 1.
int seg_region(const Point& p, const Point& depot, int regions = 10);

// Slot that the segmentation rule gives to `region` on `day`.
SlotId seg_slot(int day, int region, const SlotCalendar& calendar);

// Assigns by the customer's angular sector, one sector per slot.
class SegmentationPolicy final : public Policy {
 public:
  SegmentationPolicy(Point depot, SlotCalendar calendar) : depot_(depot), calendar_(std::move(calendar)) {}
  std::string name() const override { return "SEG"; }
  SlotId decide(const State& state, std::span<const SlotId> allowed, Rng& rng) const override;

 private:
  Point depot_;
  SlotCalendar calendar_;
};

// Customers expected from the current epoch until `last_day` (inclusive).
// Entry 0 is the residual of `day`: a fresh daily draw minus `seen`, clamped
// at zero; entries 1.. are full draws for the following days. Ids are
// assigned consecutively from `first_id`.
std::vector<std::vector<Customer>> sample_future_customers(int day, int seen, int last_day, const GenParams& dist,
                                                           const SlotCalendar& calendar, Rng& rng,
                                                           CustomerId first_id);

// Mode of the votes; ties go to the smallest slot.
SlotId consensus(std::span<const SlotId> votes);

// Ids of sampled customers start here so they never collide with real ones.
inline constexpr CustomerId kSampledIdBase = CustomerId{1} << 48;

enum class ActionSet { All, BasePruned };

struct RolloutConfig {
  int rollouts = 10;
  ActionSet actions = ActionSet::All;
  GenParams future;          // customer process used for the sampled futures
  SolverBudget fast_budget;  // routing inside rollouts
  Execution execution = Execution::Parallel;
};

struct RolloutEstimate {
  std::vector<SlotId> actions;
  std::vector<std::vector<double>> costs;  // [rollout][action]
  std::vector<double> mean;                // per action
  // fingerprint of the sampled futures and continuation stream seen by each (rollout, action)
  std::vector<std::vector<std::uint64_t>> fingerprints;
  SlotId best;
};

// Evaluates each candidate slot by simulating sampled futures under a base
// policy and returns the slot of least mean remaining-horizon cost.
class RolloutPolicy final : public Policy {
 public:
  RolloutPolicy(std::shared_ptr<const Policy> base, RolloutConfig config, SystemParams params, Point depot);
  std::string name() const override { return base_->name() + "-RE"; }
  SlotId decide(const State& state, std::span<const SlotId> allowed, Rng& rng) const override;
  RolloutEstimate evaluate(const State& state, std::span<const SlotId> allowed, Rng& rng) const;

 private:
  std::shared_ptr<const Policy> base_;
  RolloutConfig config_;
  SystemParams params_;
  Point depot_;
  HeuristicRouter fast_router_;
};

enum class FutureWindows { Infinite, Finite };

struct SbpConfig {
  int scenarios = 30;
  int sampling_horizon = 1;  // days, counting the current one
  FutureWindows future_windows = FutureWindows::Infinite;
  GenParams dist;
  SolverBudget budget;
  Execution execution = Execution::Parallel;
};

// Slot on `day` whose window contains `start`; the smaller half wins inside an
// overlap, and a start outside every window takes the nearest one.
SlotId slot_for_start(int day, double start, const SlotCalendar& calendar);

struct ScenarioVotes {
  std::vector<SlotId> votes;  // one per scenario
  std::vector<double> objectives;
  SlotId decision;
};

// Samples scenarios, plans each as a multi-period routing problem and assigns
// the most frequent implied slot.
class ScenarioPolicy final : public Policy {
 public:
  ScenarioPolicy(SbpConfig config, SystemParams params, Point depot);
  std::string name() const override { return "SBP"; }
  SlotId decide(const State& state, std::span<const SlotId> allowed, Rng& rng) const override;
  ScenarioVotes evaluate(const State& state, Rng& rng) const;

  // Planning jobs of one scenario given the sampled future customers.
  std::vector<PlanningJob> scenario_jobs(const State& state, std::span<const std::vector<Customer>> futures) const;

 private:
  SbpConfig config_;
  SystemParams params_;
  Point depot_;
};

}  // namespace dtsap
