#include "dtsap/instance.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "dtsap/error.hpp"
#include "dtsap/serialization.hpp"

namespace dtsap {

using nlohmann::json;

void GenParams::validate(const SlotCalendar& calendar) const {
  if (horizon_days < 1) throw Error("gen: horizon_days must be >= 1");
  if (!(preexisting_mean >= 0.0) || !(daily_mean >= 0.0)) throw Error("gen: means must be >= 0");
  if (!(count_sd >= 0.0)) throw Error("gen: count_sd must be >= 0");
  if (!(area_side > 0.0)) throw Error("gen: area side must be > 0");
  if (preferences < 1 || preferences > calendar.slots_per_day() * calendar.lookahead_days()) {
    throw Error("gen: preferences must lie in 1..n_s*n_d");
  }
  if (location_pool && location_pool->empty()) throw Error("gen: empty pool");
}

std::size_t Instance::customer_count() const {
  std::size_t n = preexisting.size();
  for (const auto& day : arrivals) n += day.size();
  return n;
}

namespace {

bool inside_area(const Point& p, const GenParams& gen) {
  return p.x >= 0.0 && p.x <= gen.area_side && p.y >= 0.0 && p.y <= gen.area_side;
}

bool in_pool(const Point& p, const std::vector<Point>& pool) {
  return std::find(pool.begin(), pool.end(), p) != pool.end();
}

}  // namespace

void Instance::validate() const {
  params.validate();
  gen.validate(params.calendar);
  const auto& cal = params.calendar;
  auto check_position = [&](const Customer& c) {
    bool ok = gen.location_pool ? in_pool(c.position, *gen.location_pool) : inside_area(c.position, gen);
    if (!ok) throw Error("customer " + std::to_string(c.id) + ": position outside the service area");
  };
  std::vector<CustomerId> ids;
  for (const auto& a : preexisting) {
    validate_customer(a.customer, cal);
    check_position(a.customer);
    if (a.customer.arrival_day != 0) {
      throw Error("customer " + std::to_string(a.customer.id) + ": pre-existing customers arrive on day 0");
    }
    if (!is_assignable(a.slot, 0, cal)) {
      throw Error("customer " + std::to_string(a.customer.id) + ": pre-existing slot outside day-0 window");
    }
    if (!a.customer.prefers(a.slot)) {
      throw Error("customer " + std::to_string(a.customer.id) + ": pre-existing slot not preferred");
    }
    ids.push_back(a.customer.id);
  }
  for (std::size_t t = 0; t < arrivals.size(); ++t) {
    double last = -1.0;
    for (const auto& c : arrivals[t]) {
      validate_customer(c, cal);
      check_position(c);
      if (c.arrival_day != static_cast<int>(t)) {
        throw Error("customer " + std::to_string(c.id) + ": arrival_day does not match its day list");
      }
      if (c.arrival_time < last) throw Error("day " + std::to_string(t) + ": arrivals not sorted by time");
      last = c.arrival_time;
      ids.push_back(c.id);
    }
  }
  std::sort(ids.begin(), ids.end());
  if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) throw Error("instance: duplicate customer id");
}

SystemPreset system_preset(const std::string& name) {
  struct Row {
    const char* name;
    double n_pre, n_daily;
    int vehicles;
    double p_tra, p_ser;
  };
  static constexpr Row rows[] = {
      {"S1", 30, 15, 2, 1.0, 0.6667},  {"S2", 30, 15, 3, 1.5, 1.0},
      {"S3", 30, 15, 4, 2.0, 1.3333},  {"S4", 40, 20, 2, 0.75, 0.5},
      {"S5", 40, 20, 3, 1.125, 0.75},  {"S6", 40, 20, 4, 1.5, 1.0},
  };
  for (const auto& r : rows) {
    if (name == r.name) {
      SystemPreset p;
      p.params.vehicles = r.vehicles;
      p.params.travel_coefficient = r.p_tra;
      p.params.service_time = r.p_ser;
      p.gen.preexisting_mean = r.n_pre;
      p.gen.daily_mean = r.n_daily;
      return p;
    }
  }
  throw Error("unknown system preset '" + name + "'");
}

std::vector<std::string> preset_names() { return {"S1", "S2", "S3", "S4", "S5", "S6"}; }

int sample_count(double mean, double sd, Rng& rng) {
  if (!(sd >= 0.0)) throw Error("sample_count: sd must be >= 0");
  double draw = mean;
  if (sd > 0.0) draw = std::normal_distribution<double>(mean, sd)(rng);
  return std::max(0, static_cast<int>(std::lround(draw)));
}

std::vector<SlotId> sample_preferences(int day, int count, const SlotCalendar& calendar, Rng& rng) {
  auto slots = assignable_slots(day, calendar);
  if (count < 0 || count > static_cast<int>(slots.size())) {
    throw Error("sample_preferences: count exceeds the number of assignable slots");
  }
  std::vector<SlotId> out;
  out.reserve(static_cast<std::size_t>(count));
  std::sample(slots.begin(), slots.end(), std::back_inserter(out), count, rng);
  return out;
}

Point sample_position(const GenParams& gen, Rng& rng) {
  if (gen.location_pool) {
    std::uniform_int_distribution<std::size_t> pick(0, gen.location_pool->size() - 1);
    return (*gen.location_pool)[pick(rng)];
  }
  std::uniform_real_distribution<double> u(0.0, gen.area_side);
  double x = u(rng);
  double y = u(rng);
  return {x, y};
}

Customer sample_customer(int day, const GenParams& gen, const SlotCalendar& calendar, Rng& rng) {
  Customer c;
  c.arrival_day = day;
  c.position = sample_position(gen, rng);
  c.arrival_time = std::uniform_real_distribution<double>(0.0, calendar.day_length())(rng);
  c.preferences = sample_preferences(day, gen.preferences, calendar, rng);
  return c;
}

Instance generate_instance(const SystemParams& sys, const GenParams& gen, std::uint64_t seed) {
  sys.validate();
  gen.validate(sys.calendar);
  Rng rng(seed);
  Instance inst;
  inst.params = sys;
  inst.gen = gen;
  inst.depot = gen.depot;
  CustomerId next_id = 1;

  int n_pre = sample_count(gen.preexisting_mean, gen.count_sd, rng);
  for (int i = 0; i < n_pre; ++i) {
    Customer c = sample_customer(0, gen, sys.calendar, rng);
    c.id = next_id++;
    c.arrival_time = 0.0;
    std::uniform_int_distribution<std::size_t> pick(0, c.preferences.size() - 1);
    SlotId slot = c.preferences[pick(rng)];
    inst.preexisting.push_back({std::move(c), slot});
  }

  inst.arrivals.resize(static_cast<std::size_t>(gen.horizon_days));
  for (int t = 0; t < gen.horizon_days; ++t) {
    int k = sample_count(gen.daily_mean, gen.count_sd, rng);
    auto& day = inst.arrivals[static_cast<std::size_t>(t)];
    for (int i = 0; i < k; ++i) day.push_back(sample_customer(t, gen, sys.calendar, rng));
    std::stable_sort(day.begin(), day.end(),
                     [](const Customer& a, const Customer& b) { return a.arrival_time < b.arrival_time; });
    for (auto& c : day) c.id = next_id++;
  }
  return inst;
}

std::vector<Point> parse_location_pool(const std::string& text) {
  std::vector<Point> pool;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream row(line);
    std::string first;
    if (!(row >> first)) continue;
    std::istringstream row2(line);
    double x = 0, y = 0;
    std::string extra;
    if (!(row2 >> x >> y) || (row2 >> extra) || !std::isfinite(x) || !std::isfinite(y)) {
      throw Error("location pool: malformed row at line " + std::to_string(line_no));
    }
    pool.push_back({x, y});
  }
  if (pool.empty()) throw Error("location pool: empty pool");
  return pool;
}

std::vector<Point> load_location_pool(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("location pool: cannot open '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_location_pool(buf.str());
}

std::string encode_instance(const Instance& inst) {
  json doc;
  doc["schema"] = kInstanceSchema;
  doc["params"] = to_json(inst.params);
  doc["gen"] = to_json(inst.gen);
  doc["depot"] = to_json(inst.depot);
  json pre = json::array();
  for (const auto& a : inst.preexisting) {
    pre.push_back({{"customer", to_json(a.customer)}, {"slot", to_json(a.slot)}});
  }
  doc["preexisting"] = std::move(pre);
  json days = json::array();
  for (const auto& day : inst.arrivals) {
    json list = json::array();
    for (const auto& c : day) list.push_back(to_json(c));
    days.push_back(std::move(list));
  }
  doc["arrivals"] = std::move(days);
  return doc.dump(1) + "\n";
}

Instance decode_instance(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(std::string("instance: parse error: ") + e.what());
  }
  if (!doc.is_object() || doc.value("schema", std::string()) != kInstanceSchema) {
    throw Error(std::string("instance: schema mismatch (expected ") + kInstanceSchema + ")");
  }
  Instance inst;
  try {
    inst.params = system_params_from_json(doc.at("params"));
    inst.gen = gen_params_from_json(doc.at("gen"));
    inst.depot = point_from_json(doc.at("depot"));
    for (const auto& a : doc.at("preexisting")) {
      inst.preexisting.push_back({customer_from_json(a.at("customer")), slot_from_json(a.at("slot"))});
    }
    for (const auto& day : doc.at("arrivals")) {
      auto& list = inst.arrivals.emplace_back();
      for (const auto& c : day) list.push_back(customer_from_json(c));
    }
  } catch (const json::exception& e) {
    throw Error(std::string("instance: missing or mistyped field: ") + e.what());
  }
  if (inst.arrivals.size() != static_cast<std::size_t>(inst.gen.horizon_days)) {
    throw Error("instance: arrivals must list exactly horizon_days days");
  }
  inst.validate();
  return inst;
}

}  // namespace dtsap
