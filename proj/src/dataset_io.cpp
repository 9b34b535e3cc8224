#include "daa/dataset_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "daa/json_codec.hpp"

namespace daa {

namespace {

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream ss(line);
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

double parse_double_field(const std::string& tok, int line_no, const char* what) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw ParseError(line_no, std::string("non-numeric ") + what + ": '" + tok + "'");
  }
  return v;
}

int parse_int_field(const std::string& tok, int line_no, const char* what) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw ParseError(line_no, std::string("non-numeric ") + what + ": '" + tok + "'");
  }
  return v;
}

double parse_coord(const std::string& tok, int line_no, const char* what) {
  const double v = parse_double_field(tok, line_no, what);
  if (v < 0.0 || v > 1.0) {
    throw ParseError(line_no,
                     std::string(what) + " out of range [0,1]: '" + tok + "'");
  }
  return v;
}

LabelRecord parse_label_fields(const std::vector<std::string>& f, int line_no) {
  LabelRecord r;
  r.class_id = parse_int_field(f[0], line_no, "class id");
  if (r.class_id < 0) throw ParseError(line_no, "negative class id");
  r.center_x = parse_coord(f[1], line_no, "center_x");
  r.center_y = parse_coord(f[2], line_no, "center_y");
  r.width = parse_coord(f[3], line_no, "width");
  r.height = parse_coord(f[4], line_no, "height");
  return r;
}

template <typename Fn>
void for_each_line(const std::string& text, const Fn& fn) {
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = text.find('\n', pos);
    const std::string line =
        text.substr(pos, end == std::string::npos ? std::string::npos : end - pos);
    ++line_no;
    fn(line, line_no);
    if (end == std::string::npos) break;
    pos = end + 1;
  }
}

}  // namespace

std::vector<LabelRecord> parse_yolo_labels(const std::string& text) {
  std::vector<LabelRecord> out;
  for_each_line(text, [&](const std::string& line, int line_no) {
    const auto fields = split_ws(line);
    if (fields.empty()) return;  // blank line
    if (fields.size() != 5) {
      throw ParseError(line_no, "expected 5 fields, found " +
                                    std::to_string(fields.size()));
    }
    out.push_back(parse_label_fields(fields, line_no));
  });
  return out;
}

std::string write_yolo_labels(std::span<const LabelRecord> records) {
  std::string out;
  char buf[128];
  for (const auto& r : records) {
    std::snprintf(buf, sizeof(buf), "%d %.6f %.6f %.6f %.6f\n", r.class_id,
                  r.center_x, r.center_y, r.width, r.height);
    out += buf;
  }
  return out;
}

std::vector<PredictionRecord> parse_yolo_predictions(const std::string& text) {
  std::vector<PredictionRecord> out;
  for_each_line(text, [&](const std::string& line, int line_no) {
    const auto fields = split_ws(line);
    if (fields.empty()) return;
    if (fields.size() != 6) {
      throw ParseError(line_no, "expected 6 fields, found " +
                                    std::to_string(fields.size()));
    }
    PredictionRecord p;
    p.box = parse_label_fields(fields, line_no);
    p.confidence = parse_double_field(fields[5], line_no, "confidence");
    if (p.confidence < 0.0 || p.confidence > 1.0) {
      throw ParseError(line_no, "confidence out of range [0,1]: '" + fields[5] + "'");
    }
    out.push_back(p);
  });
  return out;
}

std::string write_yolo_predictions(std::span<const PredictionRecord> records) {
  std::string out;
  char buf[160];
  for (const auto& r : records) {
    std::snprintf(buf, sizeof(buf), "%d %.6f %.6f %.6f %.6f %.6f\n", r.box.class_id,
                  r.box.center_x, r.box.center_y, r.box.width, r.box.height,
                  r.confidence);
    out += buf;
  }
  return out;
}

BoundingBox to_bounding_box(const LabelRecord& r, double confidence) {
  BoundingBox b;
  b.center_x = r.center_x;
  b.center_y = r.center_y;
  b.width = r.width;
  b.height = r.height;
  b.class_id = r.class_id;
  b.confidence = confidence;
  return b;
}

LabelRecord to_label_record(const BoundingBox& b) {
  LabelRecord r;
  r.class_id = b.class_id;
  r.center_x = b.center_x;
  r.center_y = b.center_y;
  r.width = b.width;
  r.height = b.height;
  return r;
}

namespace {

const char* const kKnownMetaKeys[] = {
    "weather",      "region",       "aircraft",  "localTime",
    "ownshipEast",  "ownshipNorth", "ownshipUp", "heading",
    "pitch",        "roll",         "intruderRange",
    "intruderVerticalOffset", "bbox"};

bool is_known_meta_key(const std::string& key) {
  for (const char* k : kKnownMetaKeys) {
    if (key == k) return true;
  }
  return false;
}

const nlohmann::json& require_field(const nlohmann::json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end()) {
    throw SchemaError(std::string("missing required field '") + key + "'");
  }
  return *it;
}

double require_number(const nlohmann::json& j, const char* key) {
  const auto& v = require_field(j, key);
  if (!v.is_number()) {
    throw SchemaError(std::string("field '") + key + "' must be a number");
  }
  return v.get<double>();
}

std::string require_string(const nlohmann::json& j, const char* key) {
  const auto& v = require_field(j, key);
  if (!v.is_string()) {
    throw SchemaError(std::string("field '") + key + "' must be a string");
  }
  return v.get<std::string>();
}

}  // namespace

ImageMetadata parse_metadata(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("invalid metadata JSON: ") + e.what());
  }
  if (!j.is_object()) throw SchemaError("metadata must be a JSON object");

  ImageMetadata m;
  const std::string weather = require_string(j, "weather");
  const auto w = parse_weather(weather);
  if (!w) throw SchemaError("field 'weather': unknown value '" + weather + "'");
  m.conditions.weather = *w;

  const std::string region = require_string(j, "region");
  const auto r = parse_region(region);
  if (!r) throw SchemaError("field 'region': unknown value '" + region + "'");
  m.conditions.region = *r;

  const std::string aircraft = require_string(j, "aircraft");
  const auto a = parse_aircraft_class(aircraft);
  if (!a) throw SchemaError("field 'aircraft': unknown value '" + aircraft + "'");
  m.conditions.aircraft = *a;

  m.conditions.local_time = require_number(j, "localTime");
  if (m.conditions.local_time < 8.0 || m.conditions.local_time > 17.0) {
    throw SchemaError("field 'localTime': out of range [8, 17]");
  }

  m.ownship.east = require_number(j, "ownshipEast");
  m.ownship.north = require_number(j, "ownshipNorth");
  m.ownship.up = require_number(j, "ownshipUp");
  m.ownship.heading_deg = require_number(j, "heading");
  m.ownship.pitch_deg = require_number(j, "pitch");
  m.ownship.roll_deg = require_number(j, "roll");
  m.intruder_range = require_number(j, "intruderRange");
  if (!(m.intruder_range > 0.0)) {
    throw SchemaError("field 'intruderRange': must be positive");
  }
  m.intruder_vertical_offset = require_number(j, "intruderVerticalOffset");

  if (const auto it = j.find("bbox"); it != j.end() && !it->is_null()) {
    try {
      m.bbox = it->get<BoundingBox>();
    } catch (const nlohmann::json::exception& e) {
      throw SchemaError(std::string("field 'bbox': ") + e.what());
    }
  }

  m.extra = nlohmann::json::object();
  for (const auto& [key, value] : j.items()) {
    if (!is_known_meta_key(key)) m.extra[key] = value;
  }
  return m;
}

std::string write_metadata(const ImageMetadata& m) {
  nlohmann::json j = m.extra.is_object() ? m.extra : nlohmann::json::object();
  j["weather"] = weather_name(m.conditions.weather);
  j["region"] = region_name(m.conditions.region);
  j["aircraft"] = aircraft_class_name(m.conditions.aircraft);
  j["localTime"] = m.conditions.local_time;
  j["ownshipEast"] = m.ownship.east;
  j["ownshipNorth"] = m.ownship.north;
  j["ownshipUp"] = m.ownship.up;
  j["heading"] = m.ownship.heading_deg;
  j["pitch"] = m.ownship.pitch_deg;
  j["roll"] = m.ownship.roll_deg;
  j["intruderRange"] = m.intruder_range;
  j["intruderVerticalOffset"] = m.intruder_vertical_offset;
  if (m.bbox) j["bbox"] = *m.bbox;
  return j.dump(2);
}

AircraftState metadata_intruder_state(const ImageMetadata& meta,
                                      const CameraModel& cam) {
  if (!meta.bbox) throw SchemaError("metadata has no bbox to reconstruct from");
  const double tan_half_h = std::tan(0.5 * cam.hfov_deg * kDegToRad);
  const double tan_half_v = std::tan(0.5 * cam.vfov_deg() * kDegToRad);
  const double bearing =
      std::atan((2.0 * meta.bbox->center_x - 1.0) * tan_half_h) * kRadToDeg;
  const double elevation =
      -std::atan((2.0 * meta.bbox->center_y - 1.0) * tan_half_v) * kRadToDeg;
  const auto ray = camera_ray_to_world(meta.ownship, bearing, elevation);
  AircraftState intr;
  intr.east = meta.ownship.east + meta.intruder_range * ray[0];
  intr.north = meta.ownship.north + meta.intruder_range * ray[1];
  intr.up = meta.ownship.up + meta.intruder_range * ray[2];
  return intr;
}

std::vector<SyntheticSample> generate_synthetic_dataset(int n, Rng& rng,
                                                        const SceneConfig& scene_cfg,
                                                        const CameraModel& cam,
                                                        const ClassTable& classes) {
  if (n <= 0) throw std::invalid_argument("sample count must be positive");
  constexpr int kStrata = kNumWeather * kNumRegions * kNumAircraftClasses;
  const int base = n / kStrata;
  const int remainder = n % kStrata;

  std::vector<SyntheticSample> out;
  out.reserve(n);
  char stem[32];
  int stratum = 0;
  for (int w = 0; w < kNumWeather; ++w) {
    for (int r = 0; r < kNumRegions; ++r) {
      for (int a = 0; a < kNumAircraftClasses; ++a, ++stratum) {
        const int count = base + (stratum < remainder ? 1 : 0);
        for (int k = 0; k < count; ++k) {
          const SceneSpec scene = sample_image_scene(
              rng, scene_cfg, static_cast<Weather>(w), static_cast<Region>(r),
              static_cast<AircraftClassName>(a));
          const AircraftState intr = scene_intruder_state(scene, cam);
          const auto box =
              project_to_image(cam, scene.ownship, intr,
                               class_for(classes, scene.conditions.aircraft));
          if (!box) {
            throw std::logic_error("in-FOV scene placement failed to project");
          }
          SyntheticSample sample;
          std::snprintf(stem, sizeof(stem), "img_%06zu", out.size());
          sample.stem = stem;
          sample.label = to_label_record(clip_box(*box));
          sample.meta.conditions = scene.conditions;
          sample.meta.ownship = scene.ownship;
          sample.meta.intruder_range = scene.intruder_range;
          sample.meta.intruder_vertical_offset = intr.up - scene.ownship.up;
          sample.meta.bbox = *box;
          out.push_back(std::move(sample));
        }
      }
    }
  }
  return out;
}

void write_synthetic_dataset(std::span<const SyntheticSample> samples,
                             const std::filesystem::path& dir) {
  const std::filesystem::path labels = dir / "labels";
  std::filesystem::create_directories(labels);
  for (const auto& s : samples) {
    {
      std::ofstream out(labels / (s.stem + ".txt"));
      if (!out) throw std::runtime_error("cannot write label for " + s.stem);
      out << write_yolo_labels(std::span<const LabelRecord>(&s.label, 1));
    }
    std::ofstream out(labels / (s.stem + ".json"));
    if (!out) throw std::runtime_error("cannot write metadata for " + s.stem);
    out << write_metadata(s.meta) << '\n';
  }
}

namespace {

nlohmann::json state_array(const std::vector<AircraftState>& states) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& s : states) arr.push_back(s);
  return arr;
}

std::vector<AircraftState> state_vector(const nlohmann::json& arr) {
  std::vector<AircraftState> out;
  out.reserve(arr.size());
  for (const auto& j : arr) out.push_back(j.get<AircraftState>());
  return out;
}

void check_schema_version(const nlohmann::json& j, const char* what) {
  const auto it = j.find("schemaVersion");
  if (it == j.end()) {
    throw SchemaError(std::string(what) + ": missing required field 'schemaVersion'");
  }
  if (it->get<int>() != kSchemaVersion) {
    throw SchemaError(std::string(what) + ": unsupported schemaVersion " + it->dump());
  }
}

}  // namespace

nlohmann::json encounter_to_json(const Encounter& enc) {
  return {{"schemaVersion", kSchemaVersion},
          {"seed", enc.seed},
          {"durationS", enc.duration_s},
          {"cpaTimeS", enc.cpa_time_s},
          {"dtS", enc.dt_s},
          {"placed", enc.placed},
          {"features", enc.features},
          {"conditions", enc.conditions},
          {"ownship", state_array(enc.ownship_script)},
          {"intruder", state_array(enc.intruder_script)}};
}

Encounter encounter_from_json(const nlohmann::json& j) {
  check_schema_version(j, "encounter");
  Encounter enc;
  enc.seed = j.at("seed").get<std::uint64_t>();
  enc.duration_s = j.at("durationS").get<double>();
  enc.cpa_time_s = j.at("cpaTimeS").get<double>();
  enc.dt_s = j.at("dtS").get<double>();
  enc.placed = j.at("placed").get<bool>();
  enc.features = j.at("features").get<EncounterFeatures>();
  enc.conditions = j.at("conditions").get<Conditions>();
  enc.ownship_script = state_vector(j.at("ownship"));
  enc.intruder_script = state_vector(j.at("intruder"));
  if (enc.ownship_script.size() != enc.intruder_script.size() ||
      enc.ownship_script.empty()) {
    throw SchemaError("encounter: scripts must be non-empty and equal length");
  }
  return enc;
}

void save_encounter(const Encounter& enc, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << encounter_to_json(enc).dump() << '\n';
}

Encounter load_encounter(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(path.string() + ": invalid JSON: " + e.what());
  }
  return encounter_from_json(j);
}

nlohmann::json result_to_json(const EncounterResult& res) {
  nlohmann::json steps = nlohmann::json::array();
  for (const auto& s : res.steps) {
    steps.push_back({{"t", s.t},
                     {"own", s.ownship},
                     {"intruder", s.intruder},
                     {"detected", s.detected},
                     {"advisory", advisory_name(s.advisory)},
                     {"commandedRate", s.commanded_rate},
                     {"actualRate", s.actual_rate}});
  }
  return {{"schemaVersion", kSchemaVersion},
          {"id", res.id},
          {"seed", res.seed},
          {"nmac", res.nmac},
          {"minHorizontalSep", res.min_horizontal_sep},
          {"minVerticalSepAtMinHorizontal", res.min_vertical_sep_at_min_horizontal},
          {"alertSteps", res.alert_steps},
          {"totalSteps", res.total_steps},
          {"conditions", res.conditions},
          {"failed", res.failed},
          {"error", res.error},
          {"steps", steps}};
}

EncounterResult result_from_json(const nlohmann::json& j) {
  check_schema_version(j, "result");
  EncounterResult res;
  res.id = j.at("id").get<int>();
  res.seed = j.at("seed").get<std::uint64_t>();
  res.nmac = j.at("nmac").get<bool>();
  res.min_horizontal_sep = j.at("minHorizontalSep").get<double>();
  res.min_vertical_sep_at_min_horizontal =
      j.at("minVerticalSepAtMinHorizontal").get<double>();
  res.alert_steps = j.at("alertSteps").get<int>();
  res.total_steps = j.at("totalSteps").get<int>();
  res.conditions = j.at("conditions").get<Conditions>();
  res.failed = j.value("failed", false);
  res.error = j.value("error", std::string());
  for (const auto& js : j.at("steps")) {
    StepRecord s;
    s.t = js.at("t").get<double>();
    s.ownship = js.at("own").get<AircraftState>();
    s.intruder = js.at("intruder").get<AircraftState>();
    s.detected = js.at("detected").get<bool>();
    const auto adv = parse_advisory(js.at("advisory").get<std::string>());
    if (!adv) throw SchemaError("result: unknown advisory " + js.at("advisory").dump());
    s.advisory = *adv;
    s.commanded_rate = js.at("commandedRate").get<double>();
    s.actual_rate = js.at("actualRate").get<double>();
    res.steps.push_back(s);
  }
  return res;
}

void save_results_jsonl(std::span<const EncounterResult> results,
                        const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  for (const auto& r : results) out << result_to_json(r).dump() << '\n';
}

std::vector<EncounterResult> load_results_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::vector<EncounterResult> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      out.push_back(result_from_json(nlohmann::json::parse(line)));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(line_no, std::string("invalid result JSON: ") + e.what());
    }
  }
  return out;
}

}  // namespace daa
