#include <algorithm>
#include <chrono>
#include <numeric>
#include <unordered_map>

#include "dtsap/error.hpp"
#include "dtsap/routing.hpp"
#include "route_model.hpp"

namespace dtsap {
namespace detail {

namespace {

constexpr double kImprovement = 1e-9;

struct Descent {
  const RouteModel& model;
  IndexPlan& plan;
  std::vector<double> costs;
  std::vector<int> scratch;

  Descent(const RouteModel& m, IndexPlan& p) : model(m), plan(p) {
    for (const auto& r : plan) costs.push_back(model.route_cost(r));
  }

  // Moves one job to another position, possibly in another route.
  bool relocate() {
    for (std::size_t r = 0; r < plan.size(); ++r) {
      for (std::size_t i = 0; i < plan[r].size(); ++i) {
        int job = plan[r][i];
        scratch = plan[r];
        scratch.erase(scratch.begin() + static_cast<std::ptrdiff_t>(i));
        double without = model.route_cost(scratch);
        for (std::size_t r2 = 0; r2 < plan.size(); ++r2) {
          if (r2 == r) {
            for (std::size_t j = 0; j <= scratch.size(); ++j) {
              if (j == i) continue;
              double c = model.cost_with_insert(scratch, j, job);
              if (c - costs[r] < -kImprovement) {
                scratch.insert(scratch.begin() + static_cast<std::ptrdiff_t>(j), job);
                plan[r] = scratch;
                costs[r] = c;
                return true;
              }
            }
            continue;
          }
          // inserting into one of several identical empty routes is the same move
          if (plan[r2].empty() && (plan[r].size() == 1 || first_empty() != r2)) continue;
          for (std::size_t j = 0; j <= plan[r2].size(); ++j) {
            double c = model.cost_with_insert(plan[r2], j, job);
            if (without + c - costs[r] - costs[r2] < -kImprovement) {
              plan[r] = scratch;
              costs[r] = without;
              plan[r2].insert(plan[r2].begin() + static_cast<std::ptrdiff_t>(j), job);
              costs[r2] = c;
              return true;
            }
          }
        }
      }
    }
    return false;
  }

  // Reverses a segment inside one route.
  bool two_opt() {
    for (std::size_t r = 0; r < plan.size(); ++r) {
      const std::size_t n = plan[r].size();
      for (std::size_t i = 0; i + 1 < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
          scratch = plan[r];
          std::reverse(scratch.begin() + static_cast<std::ptrdiff_t>(i),
                       scratch.begin() + static_cast<std::ptrdiff_t>(j) + 1);
          double c = model.route_cost(scratch);
          if (c - costs[r] < -kImprovement) {
            plan[r] = scratch;
            costs[r] = c;
            return true;
          }
        }
      }
    }
    return false;
  }

  // Exchanges two jobs between different routes.
  bool swap() {
    for (std::size_t r = 0; r < plan.size(); ++r) {
      for (std::size_t r2 = r + 1; r2 < plan.size(); ++r2) {
        for (std::size_t i = 0; i < plan[r].size(); ++i) {
          for (std::size_t j = 0; j < plan[r2].size(); ++j) {
            std::swap(plan[r][i], plan[r2][j]);
            double c1 = model.route_cost(plan[r]);
            double c2 = model.route_cost(plan[r2]);
            if (c1 + c2 - costs[r] - costs[r2] < -kImprovement) {
              costs[r] = c1;
              costs[r2] = c2;
              return true;
            }
            std::swap(plan[r][i], plan[r2][j]);
          }
        }
      }
    }
    return false;
  }

  // Moves a segment of two to four jobs, possibly reversed, to another position.
  bool or_opt() {
    for (std::size_t r = 0; r < plan.size(); ++r) {
      const auto& src = plan[r];
      for (std::size_t len = 2; len <= std::min<std::size_t>(src.size(), 4); ++len) {
        for (std::size_t i = 0; i + len <= src.size(); ++i) {
          // src without the segment, as a virtual sequence
          const std::size_t rest_size = src.size() - len;
          auto rest_at = [&](std::size_t k) { return src[k < i ? k : k + len]; };
          RouteModel::Walker rw(model);
          for (std::size_t k = 0; k < rest_size; ++k) rw.step(rest_at(k));
          const double without = rw.finish();
          for (int flip = 0; flip < 2; ++flip) {
            auto seg_at = [&](std::size_t k) { return src[flip ? i + len - 1 - k : i + k]; };
            for (std::size_t r2 = 0; r2 < plan.size(); ++r2) {
              if (r2 != r && plan[r2].empty() && first_empty() != r2) continue;
              const bool same = r2 == r;
              const std::size_t host_size = same ? rest_size : plan[r2].size();
              auto host_at = [&](std::size_t k) { return same ? rest_at(k) : plan[r2][k]; };
              for (std::size_t j = 0; j <= host_size; ++j) {
                if (same && j == i && !flip) continue;
                RouteModel::Walker w(model);
                for (std::size_t k = 0; k < j; ++k) w.step(host_at(k));
                for (std::size_t k = 0; k < len; ++k) w.step(seg_at(k));
                for (std::size_t k = j; k < host_size; ++k) w.step(host_at(k));
                const double c = w.finish();
                const double delta = same ? c - costs[r] : without + c - costs[r] - costs[r2];
                if (delta < -kImprovement) {
                  scratch.clear();
                  for (std::size_t k = 0; k < j; ++k) scratch.push_back(host_at(k));
                  for (std::size_t k = 0; k < len; ++k) scratch.push_back(seg_at(k));
                  for (std::size_t k = j; k < host_size; ++k) scratch.push_back(host_at(k));
                  if (!same) {
                    std::vector<int> rest;
                    for (std::size_t k = 0; k < rest_size; ++k) rest.push_back(rest_at(k));
                    plan[r2] = scratch;
                    costs[r2] = c;
                    plan[r] = std::move(rest);
                    costs[r] = without;
                  } else {
                    plan[r] = scratch;
                    costs[r] = c;
                  }
                  return true;
                }
              }
            }
          }
        }
      }
    }
    return false;
  }

  // Exchanges the tails of two routes.
  bool two_opt_star() {
    for (std::size_t r = 0; r < plan.size(); ++r) {
      for (std::size_t r2 = r + 1; r2 < plan.size(); ++r2) {
        const auto& a = plan[r];
        const auto& b = plan[r2];
        for (std::size_t i = 0; i <= a.size(); ++i) {
          for (std::size_t j = 0; j <= b.size(); ++j) {
            if ((i == a.size() && j == b.size()) || (i == 0 && j == 0)) continue;
            RouteModel::Walker wa(model), wb(model);
            for (std::size_t k = 0; k < i; ++k) wa.step(a[k]);
            for (std::size_t k = j; k < b.size(); ++k) wa.step(b[k]);
            for (std::size_t k = 0; k < j; ++k) wb.step(b[k]);
            for (std::size_t k = i; k < a.size(); ++k) wb.step(a[k]);
            const double c1 = wa.finish(), c2 = wb.finish();
            if (c1 + c2 - costs[r] - costs[r2] < -kImprovement) {
              std::vector<int> na(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(i));
              na.insert(na.end(), b.begin() + static_cast<std::ptrdiff_t>(j), b.end());
              std::vector<int> nb(b.begin(), b.begin() + static_cast<std::ptrdiff_t>(j));
              nb.insert(nb.end(), a.begin() + static_cast<std::ptrdiff_t>(i), a.end());
              plan[r] = std::move(na);
              plan[r2] = std::move(nb);
              costs[r] = c1;
              costs[r2] = c2;
              return true;
            }
          }
        }
      }
    }
    return false;
  }

  // Exchanges two jobs of the same route.
  bool exchange() {
    for (std::size_t r = 0; r < plan.size(); ++r) {
      for (std::size_t i = 0; i + 1 < plan[r].size(); ++i) {
        for (std::size_t j = i + 1; j < plan[r].size(); ++j) {
          std::swap(plan[r][i], plan[r][j]);
          const double c = model.route_cost(plan[r]);
          if (c - costs[r] < -kImprovement) {
            costs[r] = c;
            return true;
          }
          std::swap(plan[r][i], plan[r][j]);
        }
      }
    }
    return false;
  }

  std::size_t first_empty() const {
    for (std::size_t r = 0; r < plan.size(); ++r) {
      if (plan[r].empty()) return r;
    }
    return plan.size();
  }
};

}  // namespace

double plan_cost(const RouteModel& model, const IndexPlan& plan) {
  double total = 0.0;
  for (const auto& r : plan) total += model.route_cost(r);
  return total;
}

void insert_cheapest(const RouteModel& model, IndexPlan& plan, std::span<const int> order) {
  std::vector<double> costs;
  costs.reserve(plan.size());
  for (const auto& r : plan) costs.push_back(model.route_cost(r));
  for (int job : order) {
    double best = kInfinity;
    std::size_t best_r = 0, best_pos = 0;
    bool tried_empty = false;
    for (std::size_t r = 0; r < plan.size(); ++r) {
      if (plan[r].empty()) {
        if (tried_empty) continue;
        tried_empty = true;
      }
      for (std::size_t pos = 0; pos <= plan[r].size(); ++pos) {
        double delta = model.cost_with_insert(plan[r], pos, job) - costs[r];
        if (delta < best) {
          best = delta;
          best_r = r;
          best_pos = pos;
        }
      }
    }
    plan[best_r].insert(plan[best_r].begin() + static_cast<std::ptrdiff_t>(best_pos), job);
    costs[best_r] = model.route_cost(plan[best_r]);
  }
}

int local_search(const RouteModel& model, IndexPlan& plan, const SolverBudget& budget) {
  using clock = std::chrono::steady_clock;
  const auto started = clock::now();
  Descent d(model, plan);
  int sweeps = 0;
  while (sweeps < budget.max_sweeps) {
    ++sweeps;
    bool improved = d.relocate();
    improved = d.two_opt() || improved;
    improved = d.swap() || improved;
    improved = d.exchange() || improved;
    improved = d.or_opt() || improved;
    improved = d.two_opt_star() || improved;
    if (!improved) break;
    if (budget.time_limit_ms > 0.0) {
      std::chrono::duration<double, std::milli> elapsed = clock::now() - started;
      if (elapsed.count() >= budget.time_limit_ms) break;
    }
  }
  return sweeps;
}

}  // namespace detail

namespace {

struct IndexedTask {
  detail::RouteModel model;
  std::vector<CustomerId> ids;
};

IndexedTask index_task(const RoutingTask& task) {
  std::vector<Point> positions;
  std::vector<TimeWindow> windows;
  std::vector<CustomerId> ids;
  for (const auto& j : task.jobs) {
    positions.push_back(j.position);
    windows.push_back(j.window);
    ids.push_back(j.id);
  }
  return {detail::RouteModel(task.depot, positions, windows, task.params), std::move(ids)};
}

RoutePlan to_plan(const detail::IndexPlan& plan, const std::vector<CustomerId>& ids) {
  RoutePlan out;
  for (const auto& r : plan) {
    auto& route = out.routes.emplace_back();
    for (int j : r) route.push_back(ids[static_cast<std::size_t>(j)]);
  }
  return out;
}

std::vector<int> construction_order(const RoutingTask& task) {
  std::vector<int> order(task.jobs.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    const auto& wa = task.jobs[static_cast<std::size_t>(a)].window;
    const auto& wb = task.jobs[static_cast<std::size_t>(b)].window;
    if (wa.earliest != wb.earliest) return wa.earliest < wb.earliest;
    return wa.deadline < wb.deadline;
  });
  return order;
}

detail::IndexPlan empty_plan(const SystemParams& p) {
  return detail::IndexPlan(static_cast<std::size_t>(p.vehicles));
}

}  // namespace

Solution construct_cheapest_insertion(const RoutingTask& task) {
  task.validate();
  auto indexed = index_task(task);
  auto plan = empty_plan(task.params);
  detail::insert_cheapest(indexed.model, plan, construction_order(task));
  RoutePlan out = to_plan(plan, indexed.ids);
  auto ev = evaluate_plan(out, task);
  return {std::move(out), std::move(ev)};
}

Solution improve_plan(const RoutingTask& task, const RoutePlan& start, const SolverBudget& budget) {
  task.validate();
  auto indexed = index_task(task);
  std::unordered_map<CustomerId, int> index;
  for (std::size_t i = 0; i < indexed.ids.size(); ++i) index[indexed.ids[i]] = static_cast<int>(i);
  evaluate_plan(start, task);  // validates the partition
  auto plan = empty_plan(task.params);
  for (std::size_t r = 0; r < start.routes.size(); ++r) {
    for (CustomerId id : start.routes[r]) plan[r].push_back(index.at(id));
  }
  detail::local_search(indexed.model, plan, budget);
  RoutePlan out = to_plan(plan, indexed.ids);
  auto ev = evaluate_plan(out, task);
  return {std::move(out), std::move(ev)};
}

Solution solve_vrpstw(const RoutingTask& task, const SolverBudget& budget, Rng& rng) {
  task.validate();
  auto indexed = index_task(task);
  const auto& model = indexed.model;
  auto plan = empty_plan(task.params);
  detail::insert_cheapest(model, plan, construction_order(task));
  detail::local_search(model, plan, budget);
  double best_cost = detail::plan_cost(model, plan);

  const int n = model.size();
  for (int round = 0; round < budget.restarts && n > 1; ++round) {
    auto trial = plan;
    if (round % 2 == 0) {
      // ruin a random subset and recreate it in random order
      const int remove = std::uniform_int_distribution<int>(1, std::max(1, n / 2))(rng);
      std::vector<int> all(static_cast<std::size_t>(n));
      std::iota(all.begin(), all.end(), 0);
      std::shuffle(all.begin(), all.end(), rng);
      all.resize(static_cast<std::size_t>(remove));
      for (auto& r : trial) {
        std::erase_if(r, [&](int j) { return std::find(all.begin(), all.end(), j) != all.end(); });
      }
      detail::insert_cheapest(model, trial, all);
    } else {
      // double bridge inside the longest route
      auto& r = *std::max_element(trial.begin(), trial.end(),
                                  [](const auto& a, const auto& b) { return a.size() < b.size(); });
      if (r.size() >= 4) {
        std::uniform_int_distribution<std::size_t> cut(1, r.size() - 1);
        std::size_t c[3] = {cut(rng), cut(rng), cut(rng)};
        std::sort(c, c + 3);
        std::vector<int> next(r.begin(), r.begin() + static_cast<std::ptrdiff_t>(c[0]));
        next.insert(next.end(), r.begin() + static_cast<std::ptrdiff_t>(c[2]), r.end());
        next.insert(next.end(), r.begin() + static_cast<std::ptrdiff_t>(c[1]), r.begin() + static_cast<std::ptrdiff_t>(c[2]));
        next.insert(next.end(), r.begin() + static_cast<std::ptrdiff_t>(c[0]), r.begin() + static_cast<std::ptrdiff_t>(c[1]));
        r = std::move(next);
      } else {
        std::shuffle(r.begin(), r.end(), rng);
      }
    }
    detail::local_search(model, trial, budget);
    double c = detail::plan_cost(model, trial);
    if (c < best_cost - 1e-9) {
      best_cost = c;
      plan = std::move(trial);
    }
  }

  RoutePlan out = to_plan(plan, indexed.ids);
  auto ev = evaluate_plan(out, task);
  return {std::move(out), std::move(ev)};
}

Solution HeuristicRouter::solve(const RoutingTask& task) const {
  Rng rng(seed_);
  return solve_vrpstw(task, budget_, rng);
}

}  // namespace dtsap
