#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "daa/encounters.hpp"
#include "daa/geometry.hpp"
#include "daa/perception.hpp"
#include "daa/rng.hpp"
#include "daa/simulator_types.hpp"

namespace daa {

constexpr int kSchemaVersion = 1;

// Parse failures carry the 1-based line number (0 when not line-oriented).
struct ParseError : std::runtime_error {
  ParseError(int line_no, const std::string& msg)
      : std::runtime_error(line_no > 0 ? "line " + std::to_string(line_no) + ": " + msg
                                       : msg),
        line(line_no) {}
  int line;
};

// "class cx cy w h", normalized coordinates. Parsers reject rather than
// coerce: wrong field counts, non-numeric fields, and out-of-range
// coordinates all fail with the offending line number.
struct LabelRecord {
  int class_id = 0;
  double center_x = 0.0;
  double center_y = 0.0;
  double width = 0.0;
  double height = 0.0;
};

std::vector<LabelRecord> parse_yolo_labels(const std::string& text);
std::string write_yolo_labels(std::span<const LabelRecord> records);

// Prediction files add a sixth confidence column: "class cx cy w h conf".
struct PredictionRecord {
  LabelRecord box;
  double confidence = 1.0;
};
std::vector<PredictionRecord> parse_yolo_predictions(const std::string& text);
std::string write_yolo_predictions(std::span<const PredictionRecord> records);

BoundingBox to_bounding_box(const LabelRecord& r, double confidence = 1.0);
LabelRecord to_label_record(const BoundingBox& b);

// Per-image metadata, one JSON document per image, lowerCamelCase keys.
// Unknown fields round-trip unchanged.
struct ImageMetadata {
  Conditions conditions;
  AircraftState ownship;          // ground_speed/vertical_rate unused here
  double intruder_range = 0.0;    // slant, m
  double intruder_vertical_offset = 0.0;
  std::optional<BoundingBox> bbox;  // geometric (unclipped) box
  nlohmann::json extra;             // preserved unknown fields
};

struct SchemaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

ImageMetadata parse_metadata(const std::string& json_text);
std::string write_metadata(const ImageMetadata& meta);

// Rebuild the intruder position from the stored camera box center, slant
// range, and ownship pose.
AircraftState metadata_intruder_state(const ImageMetadata& meta, const CameraModel& cam);

struct SyntheticSample {
  std::string stem;
  LabelRecord label;   // clipped to [0,1]^2
  ImageMetadata meta;  // carries the geometric box
};

// n samples stratified equally over 6 weather x 4 regions x 3 aircraft = 72
// strata; a remainder of n mod 72 is spread round-robin over the strata in
// enumeration order (weather-major, then region, then aircraft). Throws when
// n <= 0.
std::vector<SyntheticSample> generate_synthetic_dataset(int n, Rng& rng,
                                                        const SceneConfig& scene_cfg,
                                                        const CameraModel& cam,
                                                        const ClassTable& classes);

// labels/<stem>.txt plus <stem>.json beside it.
void write_synthetic_dataset(std::span<const SyntheticSample> samples,
                             const std::filesystem::path& dir);

// Encounter files: one JSON document per encounter, schema_version required.
nlohmann::json encounter_to_json(const Encounter& enc);
Encounter encounter_from_json(const nlohmann::json& j);
void save_encounter(const Encounter& enc, const std::filesystem::path& path);
Encounter load_encounter(const std::filesystem::path& path);

// Batch results: JSON-lines, one EncounterResult per line, each line carrying
// schema_version.
nlohmann::json result_to_json(const EncounterResult& res);
EncounterResult result_from_json(const nlohmann::json& j);
void save_results_jsonl(std::span<const EncounterResult> results,
                        const std::filesystem::path& path);
std::vector<EncounterResult> load_results_jsonl(const std::filesystem::path& path);

}  // namespace daa
