#pragma once

#include "json.hpp"

#include "dtsap/core.hpp"
#include "dtsap/instance.hpp"

// JSON mappings shared by the instance, task and config file formats.
// Slots are [day, half] pairs; an unbounded deadline is written as null.
namespace dtsap {

nlohmann::json to_json(const Point& p);
nlohmann::json to_json(const SlotId& s);
nlohmann::json to_json(const TimeWindow& w);
nlohmann::json to_json(const SlotCalendar& c);
nlohmann::json to_json(const SystemParams& p);
nlohmann::json to_json(const GenParams& g);
nlohmann::json to_json(const Customer& c);

Point point_from_json(const nlohmann::json& j);
SlotId slot_from_json(const nlohmann::json& j);
TimeWindow window_from_json(const nlohmann::json& j);
SlotCalendar calendar_from_json(const nlohmann::json& j);
SystemParams system_params_from_json(const nlohmann::json& j);
GenParams gen_params_from_json(const nlohmann::json& j);
Customer customer_from_json(const nlohmann::json& j);

}  // namespace dtsap
