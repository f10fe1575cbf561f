#include "dtsap/core.hpp"

#include <algorithm>
#include <cmath>

#include "dtsap/error.hpp"

namespace dtsap {

std::string to_string(const SlotId& slot) {
  return "(" + std::to_string(slot.day) + "," + std::to_string(slot.half) + ")";
}

SlotCalendar SlotCalendar::standard() {
  return SlotCalendar(5, 9.0, {{0.0, 5.0}, {4.0, 9.0}});
}

SlotCalendar::SlotCalendar(int lookahead_days, double day_length,
                           std::vector<TimeWindow> windows)
    : lookahead_days_(lookahead_days), day_length_(day_length), windows_(std::move(windows)) {
  if (lookahead_days_ < 1) throw Error("calendar: lookahead_days must be >= 1");
  if (!(day_length_ > 0.0)) throw Error("calendar: day_length must be > 0");
  if (windows_.empty()) throw Error("calendar: at least one slot per day is required");
  for (const auto& w : windows_) {
    if (!(0.0 <= w.earliest && w.earliest <= w.deadline && w.deadline <= day_length_)) {
      throw Error("calendar: slot window must satisfy 0 <= a <= b <= U");
    }
  }
}

long SlotCalendar::ordinal(const SlotId& slot) const {
  return static_cast<long>(slot.day - 1) * slots_per_day() + slot.half;
}

SlotId SlotCalendar::slot_at(long ordinal) const {
  const long ns = slots_per_day();
  // floor division so that non-positive ordinals (day <= 0) still round-trip
  long q = ordinal - 1;
  long day0 = q >= 0 ? q / ns : -((-q + ns - 1) / ns);
  return SlotId{static_cast<int>(day0 + 1), static_cast<int>(q - day0 * ns + 1)};
}

void SystemParams::validate() const {
  if (vehicles < 1) throw Error("params: vehicles must be >= 1");
  if (!(assignment_penalty >= 0.0)) throw Error("params: alpha must be >= 0");
  if (!(delay_penalty >= 0.0)) throw Error("params: beta must be >= 0");
  if (!(travel_coefficient > 0.0)) throw Error("params: travel coefficient must be > 0");
  if (!(service_time >= 0.0)) throw Error("params: service time must be >= 0");
}

bool Customer::prefers(const SlotId& slot) const {
  return std::binary_search(preferences.begin(), preferences.end(), slot);
}

void validate_customer(const Customer& c, const SlotCalendar& calendar) {
  if (c.arrival_day < 0) throw Error("customer " + std::to_string(c.id) + ": arrival_day < 0");
  if (!(c.arrival_time >= 0.0 && c.arrival_time < calendar.day_length())) {
    throw Error("customer " + std::to_string(c.id) + ": arrival_time outside [0, U)");
  }
  if (!std::is_sorted(c.preferences.begin(), c.preferences.end()) ||
      std::adjacent_find(c.preferences.begin(), c.preferences.end()) != c.preferences.end()) {
    throw Error("customer " + std::to_string(c.id) + ": preferences must be sorted and distinct");
  }
  for (const auto& s : c.preferences) {
    if (!is_assignable(s, c.arrival_day, calendar)) {
      throw Error("customer " + std::to_string(c.id) + ": preference " + to_string(s) +
                  " outside the lookahead window of day " + std::to_string(c.arrival_day));
    }
  }
}

std::vector<SlotId> assignable_slots(int day, const SlotCalendar& calendar) {
  std::vector<SlotId> out;
  out.reserve(static_cast<std::size_t>(calendar.slots_per_day() * calendar.lookahead_days()));
  for (int d = day + 1; d <= day + calendar.lookahead_days(); ++d) {
    for (int h = 1; h <= calendar.slots_per_day(); ++h) out.push_back({d, h});
  }
  return out;
}

bool is_assignable(const SlotId& slot, int day, const SlotCalendar& calendar) {
  return slot.day > day && slot.day <= day + calendar.lookahead_days() && slot.half >= 1 &&
         slot.half <= calendar.slots_per_day();
}

TimeWindow slot_window(const SlotId& slot, const SlotCalendar& calendar) {
  if (slot.half < 1 || slot.half > calendar.slots_per_day()) {
    throw Error("slot " + to_string(slot) + ": half outside 1..n_s");
  }
  return calendar.windows()[static_cast<std::size_t>(slot.half - 1)];
}

double assignment_penalty(std::span<const SlotId> preferences, const SlotId& chosen,
                          double alpha) {
  return std::find(preferences.begin(), preferences.end(), chosen) != preferences.end() ? 0.0
                                                                                         : alpha;
}

double distance(const Point& p, const Point& q) { return std::hypot(p.x - q.x, p.y - q.y); }

double travel_time(const SystemParams& params, const Point& p, const Point& q) {
  return params.travel_coefficient * distance(p, q);
}

}  // namespace dtsap
