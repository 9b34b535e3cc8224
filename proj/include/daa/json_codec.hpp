#pragma once

#include <json.hpp>

#include "daa/encounters.hpp"
#include "daa/geometry.hpp"

// ADL codecs for the small value types shared by the file schemas and the
// detector wire protocol. Keys are lowerCamelCase.

namespace daa {

inline void to_json(nlohmann::json& j, const AircraftState& s) {
  j = {{"east", s.east},
       {"north", s.north},
       {"up", s.up},
       {"heading", s.heading_deg},
       {"pitch", s.pitch_deg},
       {"roll", s.roll_deg},
       {"groundSpeed", s.ground_speed},
       {"verticalRate", s.vertical_rate}};
}

inline void from_json(const nlohmann::json& j, AircraftState& s) {
  j.at("east").get_to(s.east);
  j.at("north").get_to(s.north);
  j.at("up").get_to(s.up);
  j.at("heading").get_to(s.heading_deg);
  j.at("pitch").get_to(s.pitch_deg);
  j.at("roll").get_to(s.roll_deg);
  j.at("groundSpeed").get_to(s.ground_speed);
  j.at("verticalRate").get_to(s.vertical_rate);
}

inline void to_json(nlohmann::json& j, const BoundingBox& b) {
  j = {{"cx", b.center_x}, {"cy", b.center_y},   {"w", b.width},
       {"h", b.height},    {"classId", b.class_id}, {"conf", b.confidence}};
}

inline void from_json(const nlohmann::json& j, BoundingBox& b) {
  j.at("cx").get_to(b.center_x);
  j.at("cy").get_to(b.center_y);
  j.at("w").get_to(b.width);
  j.at("h").get_to(b.height);
  b.class_id = j.value("classId", 0);
  b.confidence = j.value("conf", 1.0);
}

inline void to_json(nlohmann::json& j, const Conditions& c) {
  j = {{"weather", weather_name(c.weather)},
       {"region", region_name(c.region)},
       {"aircraft", aircraft_class_name(c.aircraft)},
       {"localTime", c.local_time}};
}

inline void from_json(const nlohmann::json& j, Conditions& c) {
  const auto w = parse_weather(j.at("weather").get<std::string>());
  if (!w) throw std::invalid_argument("unknown weather: " + j.at("weather").dump());
  const auto r = parse_region(j.at("region").get<std::string>());
  if (!r) throw std::invalid_argument("unknown region: " + j.at("region").dump());
  const auto a = parse_aircraft_class(j.at("aircraft").get<std::string>());
  if (!a) throw std::invalid_argument("unknown aircraft: " + j.at("aircraft").dump());
  c.weather = *w;
  c.region = *r;
  c.aircraft = *a;
  j.at("localTime").get_to(c.local_time);
}

inline void to_json(nlohmann::json& j, const EncounterFeatures& f) {
  j = {{"ownshipSpeed", f.ownship_speed},
       {"intruderSpeed", f.intruder_speed},
       {"hmd", f.hmd},
       {"vmd", f.vmd},
       {"relativeHeading", f.relative_heading}};
}

inline void from_json(const nlohmann::json& j, EncounterFeatures& f) {
  j.at("ownshipSpeed").get_to(f.ownship_speed);
  j.at("intruderSpeed").get_to(f.intruder_speed);
  j.at("hmd").get_to(f.hmd);
  j.at("vmd").get_to(f.vmd);
  j.at("relativeHeading").get_to(f.relative_heading);
}

}  // namespace daa
