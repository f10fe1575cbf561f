#pragma once

// Index-based view of a routing task used by the solvers. Jobs are 0..n-1 and
// the depot is node n.

#include <algorithm>
#include <memory>
#include <span>
#include <vector>

#include "dtsap/routing.hpp"

namespace dtsap::detail {

class RouteModel {
 public:
  RouteModel(const Point& depot, std::span<const Point> positions, std::span<const TimeWindow> windows,
             const SystemParams& params)
      : n_(static_cast<int>(positions.size())),
        service_(params.service_time),
        beta_(params.delay_penalty),
        windows_(windows.begin(), windows.end()) {
    auto matrix = std::make_shared<std::vector<double>>(static_cast<std::size_t>((n_ + 1) * (n_ + 1)));
    auto at = [&](int i) { return i == n_ ? depot : positions[static_cast<std::size_t>(i)]; };
    for (int i = 0; i <= n_; ++i) {
      for (int j = 0; j <= n_; ++j) {
        (*matrix)[static_cast<std::size_t>(i * (n_ + 1) + j)] = travel_time(params, at(i), at(j));
      }
    }
    travel_ = std::move(matrix);
  }

  // Same nodes and travel times, different windows.
  RouteModel with_windows(std::vector<TimeWindow> windows) const {
    RouteModel m = *this;
    m.windows_ = std::move(windows);
    return m;
  }

  int size() const { return n_; }
  int depot() const { return n_; }
  double travel(int i, int j) const { return (*travel_)[static_cast<std::size_t>(i * (n_ + 1) + j)]; }
  const TimeWindow& window(int i) const { return windows_[static_cast<std::size_t>(i)]; }
  double service() const { return service_; }
  double beta() const { return beta_; }

  // travel + wait + beta * delay of a closed tour from the depot.
  double route_cost(std::span<const int> route) const {
    if (route.empty()) return 0.0;
    Walker w(*this);
    for (int j : route) w.step(j);
    return w.finish();
  }

  // Cost of `route` with `job` inserted before position `pos`.
  double cost_with_insert(std::span<const int> route, std::size_t pos, int job) const {
    Walker w(*this);
    for (std::size_t k = 0; k < route.size(); ++k) {
      if (k == pos) w.step(job);
      w.step(route[k]);
    }
    if (pos >= route.size()) w.step(job);
    return w.finish();
  }

  // Cost of `route` without the element at position `pos`.
  double cost_without(std::span<const int> route, std::size_t pos) const {
    if (route.size() <= 1) return 0.0;
    Walker w(*this);
    for (std::size_t k = 0; k < route.size(); ++k) {
      if (k != pos) w.step(route[k]);
    }
    return w.finish();
  }

  // Incremental forward recursion.
  class Walker {
   public:
    explicit Walker(const RouteModel& m) : m_(m), prev_(m.n_) {}
    void step(int j) {
      double leg = m_.travel(prev_, j);
      double arrival = time_ + leg;
      const auto& w = m_.windows_[static_cast<std::size_t>(j)];
      double wait = std::max(0.0, w.earliest - arrival);
      double delay = std::max(0.0, arrival - w.deadline);
      cost_ += leg + wait + m_.beta_ * delay;
      last_start_ = arrival + wait;
      time_ = last_start_ + m_.service_;
      prev_ = j;
    }
    double last_start() const { return last_start_; }
    double finish() const { return prev_ == m_.n_ ? 0.0 : cost_ + m_.travel(prev_, m_.n_); }

   private:
    const RouteModel& m_;
    int prev_;
    double time_ = 0.0;
    double cost_ = 0.0;
    double last_start_ = 0.0;
  };

 private:
  int n_;
  double service_;
  double beta_;
  std::vector<TimeWindow> windows_;
  std::shared_ptr<const std::vector<double>> travel_;
};

using IndexPlan = std::vector<std::vector<int>>;

// Cheapest insertion of `order` into `plan` (which may be partly filled).
void insert_cheapest(const RouteModel& model, IndexPlan& plan, std::span<const int> order);

// First-improvement descent; returns the number of sweeps performed.
int local_search(const RouteModel& model, IndexPlan& plan, const SolverBudget& budget);

double plan_cost(const RouteModel& model, const IndexPlan& plan);

}  // namespace dtsap::detail
