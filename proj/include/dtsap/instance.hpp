#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dtsap/core.hpp"
#include "dtsap/random.hpp"

namespace dtsap {

// Parameters of the stochastic customer process.
struct GenParams {
  int horizon_days = 10;
  double preexisting_mean = 30.0;
  double daily_mean = 15.0;
  double count_sd = 3.0;
  double area_side = 2.0;
  Point depot{1.0, 1.0};
  int preferences = 3;
  std::optional<std::vector<Point>> location_pool;

  void validate(const SlotCalendar& calendar) const;
  friend bool operator==(const GenParams&, const GenParams&) = default;
};

struct Assignment {
  Customer customer;
  SlotId slot;
  friend bool operator==(const Assignment&, const Assignment&) = default;
};

struct Instance {
  SystemParams params;
  GenParams gen;
  Point depot;
  std::vector<Assignment> preexisting;
  std::vector<std::vector<Customer>> arrivals;  // arrivals[t], sorted by arrival_time

  int horizon_days() const { return static_cast<int>(arrivals.size()); }
  std::size_t customer_count() const;

  // Throws Error naming the first violated invariant.
  void validate() const;
  friend bool operator==(const Instance&, const Instance&) = default;
};

struct SystemPreset {
  SystemParams params;
  GenParams gen;
};

// Named systems S1..S6.
SystemPreset system_preset(const std::string& name);
std::vector<std::string> preset_names();

int sample_count(double mean, double sd, Rng& rng);

std::vector<SlotId> sample_preferences(int day, int count, const SlotCalendar& calendar, Rng& rng);

// Draws a position from the pool (uniform, with replacement) or the square area.
Point sample_position(const GenParams& gen, Rng& rng);

// A freshly arrived customer on `day`; the caller assigns the id.
Customer sample_customer(int day, const GenParams& gen, const SlotCalendar& calendar, Rng& rng);

Instance generate_instance(const SystemParams& sys, const GenParams& gen, std::uint64_t seed);

// One "x y" pair per line; '#' starts a comment.
std::vector<Point> load_location_pool(const std::filesystem::path& path);
std::vector<Point> parse_location_pool(const std::string& text);

inline constexpr const char* kInstanceSchema = "dtsap-instance/1";

std::string encode_instance(const Instance& inst);
Instance decode_instance(const std::string& text);

}  // namespace dtsap
