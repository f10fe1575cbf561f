#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "dtsap/routing.hpp"

namespace dtsap {

namespace {

std::string num(double v) {
  std::ostringstream os;
  os << std::setprecision(12) << v;
  return os.str();
}

}  // namespace

std::string export_milp(const RoutingTask& task) {
  task.validate();
  const int n = static_cast<int>(task.jobs.size());
  const int nv = task.params.vehicles;
  const double s = task.params.service_time;
  auto pos = [&](int i) { return i == 0 ? task.depot : task.jobs[static_cast<std::size_t>(i - 1)].position; };
  auto D = [&](int i, int j) { return travel_time(task.params, pos(i), pos(j)); };
  auto y = [](int i, int j, int v) {
    return "y_" + std::to_string(i) + "_" + std::to_string(j) + "_" + std::to_string(v);
  };

  double max_leg = 0.0, max_open = 0.0;
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j <= n; ++j) max_leg = std::max(max_leg, D(i, j));
  }
  for (const auto& j : task.jobs) max_open = std::max(max_open, j.window.earliest);
  // no feasible schedule needs a clock beyond the latest opening plus every remaining leg
  const double big_m = max_open + n * (s + max_leg) + max_leg + 1.0;

  std::ostringstream out;
  out << "\\ VRPSTW: " << n << " jobs, " << nv << " vehicles, node 0 = depot\n";
  out << "\\ departure from the depot at time 0; no service time at the depot\n";
  for (int i = 1; i <= n; ++i) out << "\\ node " << i << " = job " << task.jobs[static_cast<std::size_t>(i - 1)].id << "\n";
  out << "Minimize\n obj:";
  for (int v = 1; v <= nv; ++v) {
    for (int i = 0; i <= n; ++i) {
      for (int j = 0; j <= n; ++j) {
        if (i != j) out << " + " << num(D(i, j)) << " " << y(i, j, v);
      }
    }
  }
  for (int i = 1; i <= n; ++i) out << " + w_" << i;
  for (int i = 1; i <= n; ++i) out << " + " << num(task.params.delay_penalty) << " d_" << i;
  if (n == 0) out << " 0 z_0";
  out << "\nSubject To\n";
  for (int i = 1; i <= n; ++i) {
    out << " visit_" << i << ":";
    for (int v = 1; v <= nv; ++v) {
      for (int j = 0; j <= n; ++j) {
        if (j != i) out << " + " << y(i, j, v);
      }
    }
    out << " = 1\n";
  }
  for (int v = 1; v <= nv && n > 0; ++v) {
    out << " depot_balance_" << v << ":";
    for (int i = 1; i <= n; ++i) out << " + " << y(i, 0, v);
    for (int j = 1; j <= n; ++j) out << " - " << y(0, j, v);
    out << " = 0\n";
    out << " depot_once_" << v << ":";
    for (int j = 1; j <= n; ++j) out << " + " << y(0, j, v);
    out << " <= 1\n";
    for (int i = 1; i <= n; ++i) {
      out << " flow_" << i << "_" << v << ":";
      for (int j = 0; j <= n; ++j) {
        if (j != i) out << " + " << y(i, j, v) << " - " << y(j, i, v);
      }
      out << " = 0\n";
    }
  }
  for (int v = 1; v <= nv; ++v) {
    for (int i = 0; i <= n; ++i) {
      for (int j = 1; j <= n; ++j) {
        if (i == j) continue;
        // z_j >= z_i + s + D(i,j) + w_i - M (1 - y_ijv)
        const double service = i == 0 ? 0.0 : s;
        out << " time_" << i << "_" << j << "_" << v << ": z_" << j << " - z_" << i;
        if (i != 0) out << " - w_" << i;
        out << " - " << num(big_m) << " " << y(i, j, v) << " >= " << num(service + D(i, j) - big_m) << "\n";
      }
    }
  }
  for (int i = 1; i <= n; ++i) {
    const auto& w = task.jobs[static_cast<std::size_t>(i - 1)].window;
    out << " early_" << i << ": z_" << i << " + w_" << i << " >= " << num(w.earliest) << "\n";
    if (std::isfinite(w.deadline)) out << " late_" << i << ": z_" << i << " - d_" << i << " <= " << num(w.deadline) << "\n";
  }
  out << " depart: z_0 = 0\n";
  out << "Bounds\n";
  for (int i = 0; i <= n; ++i) out << " z_" << i << " >= 0\n";
  for (int i = 1; i <= n; ++i) out << " w_" << i << " >= 0\n d_" << i << " >= 0\n";
  out << "Binaries\n";
  for (int v = 1; v <= nv; ++v) {
    for (int i = 0; i <= n; ++i) {
      for (int j = 0; j <= n; ++j) {
        if (i != j) out << " " << y(i, j, v) << "\n";
      }
    }
  }
  out << "End\n";
  return out.str();
}

}  // namespace dtsap
