#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace dtsap {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct Point {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point&, const Point&) = default;
};

// Within-day window in hours from day start. The deadline is soft.
struct TimeWindow {
  double earliest = 0.0;
  double deadline = kInfinity;
  friend bool operator==(const TimeWindow&, const TimeWindow&) = default;
};

// A service slot: a service day (>= 1) and a within-day index (1..n_s).
// Ordering is lexicographic in (day, half), which is also ordinal order.
struct SlotId {
  int day = 1;
  int half = 1;
  friend auto operator<=>(const SlotId&, const SlotId&) = default;
};

std::string to_string(const SlotId& slot);

class SlotCalendar {
 public:
  // Two overlapping slots per day (0-5h and 4-9h), five-day lookahead.
  static SlotCalendar standard();

  SlotCalendar(int lookahead_days, double day_length,
               std::vector<TimeWindow> windows);

  int slots_per_day() const { return static_cast<int>(windows_.size()); }
  int lookahead_days() const { return lookahead_days_; }
  double day_length() const { return day_length_; }
  const std::vector<TimeWindow>& windows() const { return windows_; }

  // 1-based ordinal counted from the morning of day 1.
  long ordinal(const SlotId& slot) const;
  SlotId slot_at(long ordinal) const;

  // Index of `slot` in the decision set of day t: the morning of day t+1 is
  // labelled 2t-1 under the standard calendar. Equals ordinal - n_s.
  long decision_index(const SlotId& slot) const { return ordinal(slot) - slots_per_day(); }
  SlotId slot_from_decision_index(long index) const { return slot_at(index + slots_per_day()); }

  friend bool operator==(const SlotCalendar&, const SlotCalendar&) = default;

 private:
  int lookahead_days_;
  double day_length_;
  std::vector<TimeWindow> windows_;
};

struct SystemParams {
  int vehicles = 2;
  double assignment_penalty = 2.0;  // alpha
  double delay_penalty = 3.0;       // beta, per hour late
  double travel_coefficient = 1.0;  // hours per distance unit
  double service_time = 0.6667;     // hours per visit
  SlotCalendar calendar = SlotCalendar::standard();

  void validate() const;
  friend bool operator==(const SystemParams&, const SystemParams&) = default;
};

using CustomerId = std::uint64_t;

struct Customer {
  CustomerId id = 0;
  Point position;
  int arrival_day = 0;
  double arrival_time = 0.0;
  std::vector<SlotId> preferences;  // sorted ascending, distinct

  bool prefers(const SlotId& slot) const;
  friend bool operator==(const Customer&, const Customer&) = default;
};

// Throws Error naming the violated invariant.
void validate_customer(const Customer& c, const SlotCalendar& calendar);

// Slots assignable on day t: days t+1 .. t+n_d in ordinal order.
std::vector<SlotId> assignable_slots(int day, const SlotCalendar& calendar);
bool is_assignable(const SlotId& slot, int day, const SlotCalendar& calendar);

TimeWindow slot_window(const SlotId& slot, const SlotCalendar& calendar);

double assignment_penalty(std::span<const SlotId> preferences, const SlotId& chosen,
                          double alpha);

double distance(const Point& p, const Point& q);
double travel_time(const SystemParams& params, const Point& p, const Point& q);

}  // namespace dtsap
