#include "dtsap/policies.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>
#include <numbers>
#include <tuple>

#include "dtsap/error.hpp"

namespace dtsap {

namespace {

// Memoizes solutions by job list. Valid because sampled customers carry
// unique ids, so equal keys mean equal tasks.
class CachingRouter final : public Router {
 public:
  explicit CachingRouter(const Router& inner) : inner_(inner) {}

  Solution solve(const RoutingTask& task) const override {
    key_.clear();
    for (const auto& j : task.jobs) key_.emplace_back(j.id, j.window.earliest, j.window.deadline);
    if (auto it = cache_.find(key_); it != cache_.end()) return it->second;
    Solution sol = inner_.solve(task);
    cache_.emplace(key_, sol);
    return sol;
  }

 private:
  using Key = std::vector<std::tuple<CustomerId, double, double>>;
  const Router& inner_;
  mutable Key key_;
  mutable std::map<Key, Solution> cache_;
};

std::uint64_t bits_of(double v) {
  std::uint64_t b = 0;
  std::memcpy(&b, &v, sizeof b);
  return b;
}

std::uint64_t fingerprint(std::span<const std::vector<Customer>> days) {
  std::uint64_t h = 0x243f6a8885a308d3ULL;
  for (const auto& day : days) {
    h = mix64(h ^ day.size());
    for (const auto& c : day) {
      h = mix64(h ^ c.id);
      h = mix64(h ^ bits_of(c.position.x));
      h = mix64(h ^ bits_of(c.position.y));
      for (const auto& s : c.preferences) h = mix64(h ^ (static_cast<std::uint64_t>(s.day) << 8 | static_cast<std::uint64_t>(s.half)));
    }
  }
  return h;
}

}  // namespace

SlotId RandomPolicy::decide(const State&, std::span<const SlotId> allowed, Rng& rng) const {
  if (allowed.empty()) throw Error("RAN: empty allowed set");
  std::uniform_int_distribution<std::size_t> pick(0, allowed.size() - 1);
  return allowed[pick(rng)];
}

int seg_region(const Point& p, const Point& depot, int regions) {
  if (p == depot) return 1;
  double angle = std::atan2(p.y - depot.y, p.x - depot.x);
  if (angle < 0.0) angle += 2.0 * std::numbers::pi;
  const double width = 2.0 * std::numbers::pi / regions;
  int region = 1 + static_cast<int>(std::floor(angle / width));
  return std::clamp(region, 1, regions);
}

SlotId seg_slot(int day, int region, const SlotCalendar& calendar) {
  const int ns = calendar.slots_per_day();
  const int nd = calendar.lookahead_days();
  if (region < 1 || region > ns * nd) throw Error("seg_slot: region outside 1..n_s*n_d");
  const int pair = (region - 1) / ns + 1;
  const int half = (region - 1) % ns + 1;
  // the unique service day in day+1..day+nd congruent to pair+1 modulo nd
  const int first = day + 1;
  const int shift = (((pair + 1 - first) % nd) + nd) % nd;
  return SlotId{first + shift, half};
}

SlotId SegmentationPolicy::decide(const State& state, std::span<const SlotId>, Rng&) const {
  if (!state.new_customer) throw Error("SEG: no pending customer");
  const int regions = calendar_.slots_per_day() * calendar_.lookahead_days();
  return seg_slot(state.day, seg_region(state.new_customer->position, depot_, regions), calendar_);
}

std::vector<std::vector<Customer>> sample_future_customers(int day, int seen, int last_day, const GenParams& dist,
                                                           const SlotCalendar& calendar, Rng& rng,
                                                           CustomerId first_id) {
  std::vector<std::vector<Customer>> out;
  CustomerId next = first_id;
  for (int d = day; d <= last_day; ++d) {
    int count = sample_count(dist.daily_mean, dist.count_sd, rng);
    if (d == day) count = std::max(0, count - seen);
    auto& list = out.emplace_back();
    list.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) list.push_back(sample_customer(d, dist, calendar, rng));
    std::stable_sort(list.begin(), list.end(),
                     [](const Customer& a, const Customer& b) { return a.arrival_time < b.arrival_time; });
    for (auto& c : list) c.id = next++;
  }
  return out;
}

SlotId consensus(std::span<const SlotId> votes) {
  if (votes.empty()) throw Error("consensus: empty votes");
  std::map<SlotId, int> counts;
  for (const auto& v : votes) ++counts[v];
  SlotId best = counts.begin()->first;
  int best_count = 0;
  for (const auto& [slot, n] : counts) {
    if (n > best_count) {
      best = slot;
      best_count = n;
    }
  }
  return best;
}

// ---- rollout ----------------------------------------------------------------

RolloutPolicy::RolloutPolicy(std::shared_ptr<const Policy> base, RolloutConfig config, SystemParams params,
                             Point depot)
    : base_(std::move(base)),
      config_(std::move(config)),
      params_(std::move(params)),
      depot_(depot),
      fast_router_(config_.fast_budget) {
  if (!base_) throw Error("rollout: base policy required");
  if (config_.rollouts < 1) throw Error("rollout: rollout count must be >= 1");
}

RolloutEstimate RolloutPolicy::evaluate(const State& state, std::span<const SlotId> allowed, Rng& rng) const {
  if (!state.new_customer) throw Error("rollout: no pending customer");
  RolloutEstimate est;
  if (config_.actions == ActionSet::All) {
    est.actions.assign(allowed.begin(), allowed.end());
  } else {
    for (const auto& c : base_->candidate_actions(state, allowed)) {
      if (c.score > 0.0 && std::find(allowed.begin(), allowed.end(), c.slot) != allowed.end()) {
        est.actions.push_back(c.slot);
      }
    }
  }
  std::sort(est.actions.begin(), est.actions.end());
  est.actions.erase(std::unique(est.actions.begin(), est.actions.end()), est.actions.end());
  if (est.actions.empty()) throw Error("rollout: empty action set");

  const auto m = static_cast<std::size_t>(config_.rollouts);
  const std::size_t n_actions = est.actions.size();
  const std::uint64_t stream = rng();
  const Customer& current = *state.new_customer;
  const int horizon = config_.future.horizon_days;
  est.costs.assign(m, std::vector<double>(n_actions, 0.0));
  est.fingerprints.assign(m, std::vector<std::uint64_t>(n_actions, 0));

  for_each_index(m, config_.execution, [&](std::size_t i) {
    Rng sampler(derive_seed(stream, {i, 0}));
    const auto futures = sample_future_customers(state.day, state.epoch, horizon - 1, config_.future,
                                                 params_.calendar, sampler, kSampledIdBase);
    const std::uint64_t continuation = derive_seed(stream, {i, 1});
    CachingRouter router(fast_router_);
    for (std::size_t a = 0; a < n_actions; ++a) {
      const SlotId& action = est.actions[a];
      Rng policy_rng(continuation);
      est.fingerprints[i][a] = mix64(fingerprint(futures) ^ Rng(continuation)());
      State next = apply_tsa(state, action, params_.calendar);
      est.costs[i][a] = assignment_penalty(current.preferences, action, params_.assignment_penalty) +
                        simulate_remaining(std::move(next), futures, horizon, *base_, router, depot_, params_,
                                           policy_rng);
    }
  });

  est.mean.assign(n_actions, 0.0);
  for (std::size_t a = 0; a < n_actions; ++a) {
    double sum = 0.0;
    for (std::size_t i = 0; i < m; ++i) sum += est.costs[i][a];
    est.mean[a] = sum / static_cast<double>(m);
  }
  std::size_t best = 0;
  for (std::size_t a = 1; a < n_actions; ++a) {
    if (est.mean[a] < est.mean[best]) best = a;
  }
  est.best = est.actions[best];
  return est;
}

SlotId RolloutPolicy::decide(const State& state, std::span<const SlotId> allowed, Rng& rng) const {
  return evaluate(state, allowed, rng).best;
}

// ---- scenario-based planning -------------------------------------------------

SlotId slot_for_start(int day, double start, const SlotCalendar& calendar) {
  int best = 1;
  double best_gap = kInfinity;
  for (int h = 1; h <= calendar.slots_per_day(); ++h) {
    const auto& w = calendar.windows()[static_cast<std::size_t>(h - 1)];
    double gap = start < w.earliest ? w.earliest - start : (start > w.deadline ? start - w.deadline : 0.0);
    if (gap < best_gap) {
      best_gap = gap;
      best = h;
    }
  }
  return SlotId{day, best};
}

ScenarioPolicy::ScenarioPolicy(SbpConfig config, SystemParams params, Point depot)
    : config_(std::move(config)), params_(std::move(params)), depot_(depot) {
  if (config_.scenarios < 1) throw Error("SBP: scenario count must be >= 1");
  if (config_.sampling_horizon < 1) throw Error("SBP: sampling horizon must be >= 1");
}

std::vector<PlanningJob> ScenarioPolicy::scenario_jobs(const State& state,
                                                       std::span<const std::vector<Customer>> futures) const {
  const auto& cal = params_.calendar;
  std::vector<PlanningJob> jobs;
  jobs.reserve(state.assigned.size() + 1);
  for (std::size_t i = 0; i < state.assigned.size(); ++i) {
    const SlotId& s = state.decisions[i];
    jobs.push_back({state.assigned[i].id, state.assigned[i].position, {{s.day, slot_window(s, cal)}}});
  }
  // one candidate per distinct preferred day; `window_of` gives the window on that day
  auto flexible = [&](const Customer& c, auto window_of) {
    PlanningJob job{c.id, c.position, {}};
    for (const auto& s : c.preferences) {
      auto it = std::find_if(job.candidates.begin(), job.candidates.end(),
                             [&](const DayCandidate& d) { return d.day == s.day; });
      TimeWindow w = window_of(s);
      if (it == job.candidates.end()) {
        job.candidates.push_back({s.day, w});
      } else {
        it->window.earliest = std::min(it->window.earliest, w.earliest);
        it->window.deadline = std::max(it->window.deadline, w.deadline);
      }
    }
    return job;
  };
  const double day_end = cal.day_length();
  jobs.push_back(flexible(*state.new_customer, [&](const SlotId&) { return TimeWindow{0.0, day_end}; }));
  for (const auto& day : futures) {
    for (const auto& c : day) {
      if (config_.future_windows == FutureWindows::Infinite) {
        jobs.push_back(flexible(c, [](const SlotId&) { return TimeWindow{0.0, kInfinity}; }));
      } else {
        jobs.push_back(flexible(c, [&](const SlotId& s) { return slot_window(s, cal); }));
      }
    }
  }
  return jobs;
}

ScenarioVotes ScenarioPolicy::evaluate(const State& state, Rng& rng) const {
  if (!state.new_customer) throw Error("SBP: no pending customer");
  const auto q = static_cast<std::size_t>(config_.scenarios);
  const std::uint64_t stream = rng();
  const int last_day = std::min(config_.dist.horizon_days - 1, state.day + config_.sampling_horizon - 1);
  const std::size_t current = state.assigned.size();
  ScenarioVotes out;
  out.votes.resize(q);
  out.objectives.resize(q);

  for_each_index(q, config_.execution, [&](std::size_t l) {
    Rng sampler(derive_seed(stream, {l}));
    std::vector<std::vector<Customer>> futures;
    if (last_day >= state.day) {
      futures = sample_future_customers(state.day, state.epoch, last_day, config_.dist, params_.calendar, sampler,
                                        kSampledIdBase);
    }
    const auto jobs = scenario_jobs(state, futures);
    int max_day = state.day + 1;
    for (const auto& j : jobs) {
      for (const auto& c : j.candidates) max_day = std::max(max_day, c.day);
    }
    std::vector<int> days;
    for (int d = state.day + 1; d <= max_day; ++d) days.push_back(d);
    const ScenarioPlan plan = solve_multiperiod(jobs, days, depot_, params_, config_.budget);
    const auto& visit = plan.visits[current];
    out.votes[l] = slot_for_start(visit.day, visit.start, params_.calendar);
    out.objectives[l] = plan.objective;
  });

  out.decision = consensus(out.votes);
  return out;
}

SlotId ScenarioPolicy::decide(const State& state, std::span<const SlotId> allowed, Rng& rng) const {
  SlotId slot = evaluate(state, rng).decision;
  if (std::find(allowed.begin(), allowed.end(), slot) == allowed.end()) {
    throw Error("SBP: implied slot " + to_string(slot) + " is not allowed");
  }
  return slot;
}

}  // namespace dtsap
