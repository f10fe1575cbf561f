#include "dtsap/serialization.hpp"

#include <cmath>

namespace dtsap {

using nlohmann::json;

json to_json(const Point& p) { return json::array({p.x, p.y}); }

json to_json(const SlotId& s) { return json::array({s.day, s.half}); }

json to_json(const TimeWindow& w) {
  json dl = std::isinf(w.deadline) ? json(nullptr) : json(w.deadline);
  return json::array({w.earliest, dl});
}

json to_json(const SlotCalendar& c) {
  json windows = json::array();
  for (const auto& w : c.windows()) windows.push_back(to_json(w));
  return {{"lookahead_days", c.lookahead_days()}, {"day_length", c.day_length()}, {"windows", windows}};
}

json to_json(const SystemParams& p) {
  return {{"vehicles", p.vehicles},
          {"alpha", p.assignment_penalty},
          {"beta", p.delay_penalty},
          {"p_tra", p.travel_coefficient},
          {"p_ser", p.service_time},
          {"calendar", to_json(p.calendar)}};
}

json to_json(const GenParams& g) {
  json j = {{"horizon_days", g.horizon_days},
            {"preexisting_mean", g.preexisting_mean},
            {"daily_mean", g.daily_mean},
            {"count_sd", g.count_sd},
            {"area_side", g.area_side},
            {"depot", to_json(g.depot)},
            {"preferences", g.preferences}};
  if (g.location_pool) {
    json pool = json::array();
    for (const auto& p : *g.location_pool) pool.push_back(to_json(p));
    j["location_pool"] = std::move(pool);
  }
  return j;
}

json to_json(const Customer& c) {
  json prefs = json::array();
  for (const auto& s : c.preferences) prefs.push_back(to_json(s));
  return {{"id", c.id},
          {"position", to_json(c.position)},
          {"arrival_day", c.arrival_day},
          {"arrival_time", c.arrival_time},
          {"preferences", prefs}};
}

Point point_from_json(const json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

SlotId slot_from_json(const json& j) { return {j.at(0).get<int>(), j.at(1).get<int>()}; }

TimeWindow window_from_json(const json& j) {
  TimeWindow w;
  w.earliest = j.at(0).get<double>();
  w.deadline = j.at(1).is_null() ? kInfinity : j.at(1).get<double>();
  return w;
}

SlotCalendar calendar_from_json(const json& j) {
  std::vector<TimeWindow> windows;
  for (const auto& w : j.at("windows")) windows.push_back(window_from_json(w));
  return SlotCalendar(j.at("lookahead_days").get<int>(), j.at("day_length").get<double>(),
                      std::move(windows));
}

SystemParams system_params_from_json(const json& j) {
  SystemParams p;
  p.vehicles = j.value("vehicles", p.vehicles);
  p.assignment_penalty = j.value("alpha", p.assignment_penalty);
  p.delay_penalty = j.value("beta", p.delay_penalty);
  p.travel_coefficient = j.value("p_tra", p.travel_coefficient);
  p.service_time = j.value("p_ser", p.service_time);
  if (j.contains("calendar")) p.calendar = calendar_from_json(j.at("calendar"));
  p.validate();
  return p;
}

GenParams gen_params_from_json(const json& j) {
  GenParams g;
  g.horizon_days = j.value("horizon_days", g.horizon_days);
  g.preexisting_mean = j.value("preexisting_mean", g.preexisting_mean);
  g.daily_mean = j.value("daily_mean", g.daily_mean);
  g.count_sd = j.value("count_sd", g.count_sd);
  g.area_side = j.value("area_side", g.area_side);
  g.depot = j.contains("depot") ? point_from_json(j.at("depot")) : Point{g.area_side / 2, g.area_side / 2};
  g.preferences = j.value("preferences", g.preferences);
  if (j.contains("location_pool")) {
    std::vector<Point> pool;
    for (const auto& p : j.at("location_pool")) pool.push_back(point_from_json(p));
    g.location_pool = std::move(pool);
  }
  return g;
}

Customer customer_from_json(const json& j) {
  Customer c;
  c.id = j.at("id").get<CustomerId>();
  c.position = point_from_json(j.at("position"));
  c.arrival_day = j.at("arrival_day").get<int>();
  c.arrival_time = j.at("arrival_time").get<double>();
  for (const auto& s : j.at("preferences")) c.preferences.push_back(slot_from_json(s));
  return c;
}

}  // namespace dtsap
