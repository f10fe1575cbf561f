#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"

#include "dtsap/error.hpp"
#include "dtsap/instance.hpp"
#include "dtsap/routing.hpp"

using namespace dtsap;

namespace {

RoutingTask hand_task(double p_tra) {
  RoutingTask t;
  t.depot = {1, 1};
  t.params.travel_coefficient = p_tra;
  t.params.service_time = 1.0;
  t.params.delay_penalty = 3.0;
  t.jobs = {{1, {1, 2}, {0, 5}}, {2, {1, 0}, {0, 5}}};
  return t;
}

RoutingTask random_task(Rng& rng, int n, const SystemParams& params) {
  std::uniform_real_distribution<double> u(0.0, 2.0);
  std::uniform_int_distribution<int> half(0, 2);
  RoutingTask t;
  t.depot = {1, 1};
  t.params = params;
  for (int i = 0; i < n; ++i) {
    const int h = half(rng);
    TimeWindow w = h == 0 ? TimeWindow{0, 5} : h == 1 ? TimeWindow{4, 9} : TimeWindow{1.5, 3};
    t.jobs.push_back({static_cast<CustomerId>(10 + i), {u(rng), u(rng)}, w});
  }
  return t;
}

}  // namespace

TEST_CASE("hand example: forward recursion") {
  auto ev = evaluate_route(std::vector<CustomerId>{1, 2}, hand_task(1.0));
  REQUIRE(ev.visits.size() == 2);
  CHECK(ev.visits[0].arrival == doctest::Approx(1.0));
  CHECK(ev.visits[1].arrival == doctest::Approx(4.0));
  CHECK(ev.visits[0].wait == 0.0);
  CHECK(ev.visits[1].delay == 0.0);
  CHECK(ev.objective == doctest::Approx(4.0));

  auto slow = evaluate_route(std::vector<CustomerId>{1, 2}, hand_task(2.0));
  CHECK(slow.visits[0].arrival == doctest::Approx(2.0));
  CHECK(slow.visits[1].arrival == doctest::Approx(7.0));
  CHECK(slow.visits[1].delay == doctest::Approx(2.0));
  CHECK(slow.travel == doctest::Approx(8.0));
  CHECK(slow.delay_penalty == doctest::Approx(6.0));
  CHECK(slow.objective == doctest::Approx(14.0));

  // cross-check against the wait-grid oracle
  CHECK(oracle::wait_grid_minimum(hand_task(1.0), {1, 2}, 0.05, 20) == doctest::Approx(4.0));
  CHECK(oracle::wait_grid_minimum(hand_task(2.0), {1, 2}, 0.05, 20) == doctest::Approx(14.0));
}

TEST_CASE("waiting is charged until the window opens") {
  RoutingTask t = hand_task(1.0);
  t.jobs[0].window = {3, 5};
  auto ev = evaluate_route(std::vector<CustomerId>{1}, t);
  CHECK(ev.visits[0].wait == doctest::Approx(2.0));
  CHECK(ev.visits[0].start() == doctest::Approx(3.0));
  CHECK(ev.objective == doctest::Approx(4.0));
}

TEST_CASE("empty routes and plans") {
  auto t = hand_task(1.0);
  CHECK(evaluate_route(std::vector<CustomerId>{}, t).objective == 0.0);
  t.jobs.clear();
  auto ev = evaluate_plan(RoutePlan{{{}, {}}}, t);
  CHECK(ev.objective == 0.0);
  CHECK(ev.visits.empty());
}

TEST_CASE("plan evaluation is additive and checks the partition") {
  auto t = hand_task(1.0);
  auto split = evaluate_plan(RoutePlan{{{1}, {2}}}, t);
  // two round trips of length 1 each
  CHECK(split.objective == doctest::Approx(4.0));
  t.jobs.pop_back();
  auto single = evaluate_plan(RoutePlan{{{}, {1}}}, t);
  CHECK(single.objective == doctest::Approx(evaluate_route(std::vector<CustomerId>{1}, t).objective));

  t = hand_task(1.0);
  CHECK_THROWS_AS(evaluate_plan(RoutePlan{{{1, 2}, {2}}}, t), Error);
  CHECK_THROWS_AS(evaluate_plan(RoutePlan{{{1}}}, t), Error);
  CHECK_THROWS_AS(evaluate_plan(RoutePlan{{{1, 2, 3}}}, t), Error);
  CHECK_THROWS_AS(evaluate_plan(RoutePlan{{{1}, {2}, {}}}, t), Error);
  CHECK_THROWS_AS(evaluate_route(std::vector<CustomerId>{7}, t), Error);
}

TEST_CASE("task validation") {
  auto t = hand_task(1.0);
  t.jobs[1].id = 1;
  CHECK_THROWS_AS(t.validate(), Error);
  t = hand_task(1.0);
  t.jobs[0].window = {5, 4};
  CHECK_THROWS_AS(t.validate(), Error);
}

TEST_CASE("forward recursion is never beaten by extra waiting") {
  Rng rng(17);
  SystemParams params;
  std::uniform_int_distribution<int> len(1, 6);
  for (int k = 0; k < 300; ++k) {
    auto t = random_task(rng, len(rng), params);
    std::vector<CustomerId> route;
    for (const auto& j : t.jobs) route.push_back(j.id);
    std::shuffle(route.begin(), route.end(), rng);
    const double grid = oracle::wait_grid_minimum(t, route, 0.05, route.size() > 4 ? 3 : 5);
    CHECK(evaluate_route(route, t).objective == doctest::Approx(grid).epsilon(1e-9));
  }
}

TEST_CASE("objective is invariant under rigid motions") {
  Rng rng(23);
  SystemParams params;
  for (int k = 0; k < 50; ++k) {
    auto t = random_task(rng, 5, params);
    RoutePlan plan{{{t.jobs[0].id, t.jobs[1].id}, {t.jobs[4].id, t.jobs[3].id, t.jobs[2].id}}};
    const double base = evaluate_plan(plan, t).objective;
    const double th = 0.7;
    auto move = [&](Point p) {
      return Point{std::cos(th) * p.x - std::sin(th) * p.y + 3.0, std::sin(th) * p.x + std::cos(th) * p.y - 1.0};
    };
    t.depot = move(t.depot);
    for (auto& j : t.jobs) j.position = move(j.position);
    CHECK(evaluate_plan(plan, t).objective == doctest::Approx(base).epsilon(1e-9));
  }
}

TEST_CASE("heuristic: trivial tasks") {
  Rng rng(1);
  RoutingTask t = hand_task(1.0);
  t.jobs.clear();
  auto empty = solve_vrpstw(t, {}, rng);
  CHECK(empty.evaluation.objective == 0.0);

  t = hand_task(1.0);
  t.jobs.pop_back();
  auto one = solve_vrpstw(t, {}, rng);
  CHECK(one.evaluation.objective == doctest::Approx(2.0 * travel_time(t.params, t.depot, t.jobs[0].position)));
}

TEST_CASE("heuristic evaluation matches evaluate_plan and improves on construction") {
  Rng gen(29);
  auto preset = system_preset("S1");
  for (int k = 0; k < 100; ++k) {
    auto t = random_task(gen, 3 + k % 12, preset.params);
    Rng rng(static_cast<std::uint64_t>(k));
    auto sol = solve_vrpstw(t, {}, rng);
    auto check = evaluate_plan(sol.plan, t);
    CHECK(sol.evaluation.objective == check.objective);
    CHECK(sol.plan.routes.size() <= static_cast<std::size_t>(t.params.vehicles));
    CHECK(sol.evaluation.objective <= construct_cheapest_insertion(t).evaluation.objective + 1e-9);
  }
}

TEST_CASE("heuristic is deterministic for a fixed stream") {
  Rng gen(31);
  auto t = random_task(gen, 12, SystemParams{});
  Rng a(5), b(5);
  SolverBudget budget;
  budget.restarts = 5;
  CHECK(solve_vrpstw(t, budget, a).plan == solve_vrpstw(t, budget, b).plan);
}

TEST_CASE("exact solver: small cases") {
  auto t = hand_task(1.0);
  t.params.vehicles = 1;
  // two orderings of two jobs
  const double o12 = oracle::route_objective(t, {1, 2}), o21 = oracle::route_objective(t, {2, 1});
  CHECK(solve_vrpstw_exact(t).evaluation.objective == doctest::Approx(std::min(o12, o21)));

  t.jobs.pop_back();
  Rng rng(1);
  CHECK(solve_vrpstw_exact(t).evaluation.objective == doctest::Approx(solve_vrpstw(t, {}, rng).evaluation.objective));

  Rng gen(37);
  auto big = random_task(gen, 10, SystemParams{});
  CHECK_THROWS_AS(solve_vrpstw_exact(big), Error);
}

TEST_CASE("labeled plan enumeration counts") {
  std::size_t count = 0;
  oracle::for_each_labeled_plan({1, 2, 3}, 2, [&](const auto&) { ++count; });
  CHECK(count == 24);
  count = 0;
  oracle::for_each_labeled_plan({1, 2, 3, 4}, 3, [&](const auto&) { ++count; });
  // 3 * 4 * 5 * 6
  CHECK(count == 360);
}

TEST_CASE("exact solver agrees with brute-force enumeration") {
  Rng gen(41);
  for (int k = 0; k < 60; ++k) {
    SystemParams params;
    params.vehicles = 1 + k % 3;
    params.travel_coefficient = 0.75 + 0.25 * (k % 4);
    auto t = random_task(gen, 1 + k % 5, params);
    const double brute = oracle::brute_force_optimum(t);
    const auto sol = solve_vrpstw_exact(t);
    CHECK(sol.evaluation.objective == doctest::Approx(brute).epsilon(1e-9));
    CHECK(sol.plan.routes.size() == static_cast<std::size_t>(params.vehicles));
  }
}

TEST_CASE("exact optimum is no worse than random plans") {
  Rng gen(43);
  SystemParams params;
  for (int k = 0; k < 10; ++k) {
    auto t = random_task(gen, 7, params);
    const double best = solve_vrpstw_exact(t).evaluation.objective;
    for (int r = 0; r < 100; ++r) {
      RoutePlan plan;
      plan.routes.resize(2);
      std::vector<CustomerId> ids;
      for (const auto& j : t.jobs) ids.push_back(j.id);
      std::shuffle(ids.begin(), ids.end(), gen);
      for (auto id : ids) plan.routes[gen() % 2].push_back(id);
      CHECK(best <= evaluate_plan(plan, t).objective + 1e-9);
    }
  }
}

TEST_CASE("exact optimum without delay penalty is a lower bound") {
  Rng gen(47);
  for (int k = 0; k < 20; ++k) {
    SystemParams params;
    params.travel_coefficient = 2.0;
    auto t = random_task(gen, 6, params);
    const double with_beta = solve_vrpstw_exact(t).evaluation.objective;
    t.params.delay_penalty = 0.0;
    CHECK(solve_vrpstw_exact(t).evaluation.objective <= with_beta + 1e-9);
  }
}

TEST_CASE("exact ties go to the lexicographically smallest route list") {
  // two identical-cost mirror jobs; one vehicle per job is cheapest
  RoutingTask t;
  t.depot = {1, 1};
  t.params.travel_coefficient = 1.0;
  t.params.service_time = 5.0;
  t.jobs = {{4, {1, 2}, {0, 1}}, {3, {1, 0}, {0, 1}}};
  auto sol = solve_vrpstw_exact(t);
  CHECK(sol.evaluation.objective == doctest::Approx(4.0));
  REQUIRE(sol.plan.routes.size() == 2);
  CHECK(sol.plan.routes[0] == Route{3});
  CHECK(sol.plan.routes[1] == Route{4});
}

TEST_CASE("routers") {
  Rng gen(53);
  auto t = random_task(gen, 6, SystemParams{});
  HeuristicRouter h;
  ExactRouter e;
  CHECK(h.solve(t).plan == h.solve(t).plan);
  CHECK(e.solve(t).evaluation.objective <= h.solve(t).evaluation.objective + 1e-9);
}

TEST_CASE("multi-period: committed jobs only reduce to the single-day problem") {
  Rng gen(59);
  auto t = random_task(gen, 6, SystemParams{});
  std::vector<PlanningJob> jobs;
  for (const auto& j : t.jobs) jobs.push_back({j.id, j.position, {{3, j.window}}});
  std::vector<int> days{3};
  auto plan = solve_multiperiod(jobs, days, t.depot, t.params, {});
  REQUIRE(plan.visits.size() == jobs.size());
  RoutePlan rp;
  rp.routes.resize(static_cast<std::size_t>(t.params.vehicles));
  std::vector<PlannedVisit> ordered = plan.visits;
  std::sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) {
    return std::tie(a.route, a.position) < std::tie(b.route, b.position);
  });
  for (const auto& v : ordered) {
    CHECK(v.day == 3);
    rp.routes[static_cast<std::size_t>(v.route)].push_back(v.id);
  }
  const auto ev = evaluate_plan(rp, t);
  CHECK(plan.objective == doctest::Approx(ev.objective));
  for (const auto& v : plan.visits) {
    for (const auto& visit : ev.visits) {
      if (visit.id == v.id) CHECK(v.start == doctest::Approx(visit.start()));
    }
  }
  Rng rng(1);
  CHECK(plan.objective <= construct_cheapest_insertion(t).evaluation.objective + 1e-9);
}

TEST_CASE("multi-period: a flexible job goes to the cheaper day") {
  SystemParams params;
  const Point depot{1, 1};
  std::vector<PlanningJob> jobs = {
      {1, {1.0, 1.9}, {{2, {0, 5}}}},
      {2, {0.1, 1.0}, {{2, {0, 5}}}},
      {3, {1.9, 1.0}, {{2, {0, 5}}}},
      {4, {1.0, 0.1}, {{2, {0, 5}}}},
      {5, {1.0, 1.8}, {{2, {0, 9}}, {3, {0, 9}}}},
  };
  // evaluate both options independently
  auto cost_with = [&](int day) {
    RoutingTask a{depot, {}, params}, b{depot, {}, params};
    for (std::size_t i = 0; i < 4; ++i) a.jobs.push_back({jobs[i].id, jobs[i].position, jobs[i].candidates[0].window});
    if (day == 2) {
      a.jobs.push_back({5, jobs[4].position, {0, 9}});
    } else {
      b.jobs.push_back({5, jobs[4].position, {0, 9}});
    }
    return solve_vrpstw_exact(a).evaluation.objective + solve_vrpstw_exact(b).evaluation.objective;
  };
  const int cheaper = cost_with(2) < cost_with(3) ? 2 : 3;
  std::vector<int> days{2, 3};
  auto plan = solve_multiperiod(jobs, days, depot, params, {});
  CHECK(plan.visits[4].day == cheaper);
}

TEST_CASE("multi-period: unbounded windows never incur delay") {
  SystemParams params;
  params.travel_coefficient = 3.0;
  std::vector<PlanningJob> jobs;
  Rng gen(61);
  std::uniform_real_distribution<double> u(0, 2);
  for (int i = 0; i < 20; ++i) jobs.push_back({CustomerId(i + 1), {u(gen), u(gen)}, {{1, {0, kInfinity}}, {2, {0, kInfinity}}}});
  std::vector<int> days{1, 2};
  auto plan = solve_multiperiod(jobs, days, {1, 1}, params, {});
  // objective is pure travel + wait; recompute from the planned days
  double total = 0.0;
  for (int d : days) {
    RoutingTask t{{1, 1}, {}, params};
    RoutePlan rp;
    rp.routes.resize(2);
    std::vector<PlannedVisit> vs;
    for (const auto& v : plan.visits) {
      if (v.day == d) vs.push_back(v);
    }
    std::sort(vs.begin(), vs.end(), [](const auto& a, const auto& b) {
      return std::tie(a.route, a.position) < std::tie(b.route, b.position);
    });
    for (const auto& v : vs) {
      t.jobs.push_back({v.id, jobs[v.id - 1].position, {0, kInfinity}});
      rp.routes[static_cast<std::size_t>(v.route)].push_back(v.id);
    }
    auto ev = evaluate_plan(rp, t);
    CHECK(ev.delay_hours == 0.0);
    total += ev.objective;
  }
  CHECK(plan.objective == doctest::Approx(total));
}

TEST_CASE("multi-period input errors") {
  std::vector<PlanningJob> jobs = {{1, {0, 0}, {}}};
  std::vector<int> days{1};
  CHECK_THROWS_AS(solve_multiperiod(jobs, days, {1, 1}, SystemParams{}, {}), Error);
  jobs[0].candidates = {{4, {0, 5}}};
  CHECK_THROWS_AS(solve_multiperiod(jobs, days, {1, 1}, SystemParams{}, {}), Error);
}

TEST_CASE("MILP export names the model variables") {
  auto t = hand_task(1.0);
  const std::string lp = export_milp(t);
  CHECK(lp.find("Minimize") != std::string::npos);
  CHECK(lp.find("y_0_1_1") != std::string::npos);
  CHECK(lp.find("z_2") != std::string::npos);
  CHECK(lp.find("w_1") != std::string::npos);
  CHECK(lp.find("d_2") != std::string::npos);
  CHECK(lp.find("Binaries") != std::string::npos);
  CHECK(lp.find("End") != std::string::npos);
  t.jobs.clear();
  CHECK_NOTHROW(export_milp(t));
}
