#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>

#include "daa/dataset_io.hpp"
#include "daa/json_codec.hpp"
#include "daa/metrics.hpp"

using namespace daa;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const char* name) {
  const fs::path dir = fs::temp_directory_path() / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("YOLO label parsing") {
  SUBCASE("single centered box") {
    const auto records = parse_yolo_labels("0 0.5 0.5 0.1 0.2\n");
    REQUIRE(records.size() == 1);
    CHECK(records[0].class_id == 0);
    CHECK(records[0].center_x == doctest::Approx(0.5));
    CHECK(records[0].height == doctest::Approx(0.2));
  }
  SUBCASE("blank lines are skipped") {
    CHECK(parse_yolo_labels("\n\n0 0.5 0.5 0.1 0.2\n\n").size() == 1);
    CHECK(parse_yolo_labels("").empty());
  }
  SUBCASE("wrong field count names the line") {
    try {
      parse_yolo_labels("0 0.5 0.5 0.1 0.2\n0 0.5 0.5 0.1\n");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line == 2);
      CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
  }
  SUBCASE("non-numeric and out-of-range fields are rejected") {
    CHECK_THROWS_AS(parse_yolo_labels("0 x 0.5 0.1 0.2\n"), ParseError);
    CHECK_THROWS_AS(parse_yolo_labels("0 1.5 0.5 0.1 0.2\n"), ParseError);
    CHECK_THROWS_AS(parse_yolo_labels("-1 0.5 0.5 0.1 0.2\n"), ParseError);
  }
}

TEST_CASE("label round trip is exact at six decimals") {
  Rng rng(14);
  std::vector<LabelRecord> records;
  for (int i = 0; i < 1000; ++i) {
    LabelRecord r;
    r.class_id = 0;
    r.center_x = rng.uniform();
    r.center_y = rng.uniform();
    r.width = rng.uniform();
    r.height = rng.uniform();
    records.push_back(r);
  }
  const auto parsed = parse_yolo_labels(write_yolo_labels(records));
  REQUIRE(parsed.size() == records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    CHECK(parsed[i].center_x == doctest::Approx(records[i].center_x).epsilon(0).scale(1).epsilon(5e-7));
    CHECK(parsed[i].width == doctest::Approx(records[i].width).scale(1).epsilon(5e-7));
  }
  // Re-serializing the parsed records reproduces the text exactly.
  CHECK(write_yolo_labels(parsed) == write_yolo_labels(records));
}

TEST_CASE("prediction files carry the sixth confidence column") {
  const auto preds = parse_yolo_predictions("0 0.5 0.5 0.1 0.2 0.875\n");
  REQUIRE(preds.size() == 1);
  CHECK(preds[0].confidence == doctest::Approx(0.875));
  CHECK_THROWS_AS(parse_yolo_predictions("0 0.5 0.5 0.1 0.2\n"), ParseError);
  CHECK_THROWS_AS(parse_yolo_predictions("0 0.5 0.5 0.1 0.2 1.5\n"), ParseError);

  std::vector<PredictionRecord> records = {{{0, 0.5, 0.5, 0.1, 0.2}, 0.875}};
  CHECK(parse_yolo_predictions(write_yolo_predictions(records))[0].confidence ==
        doctest::Approx(0.875));
}

TEST_CASE("metadata schema validation") {
  ImageMetadata meta;
  meta.conditions.weather = Weather::Scattered;
  meta.conditions.region = Region::RNO;
  meta.conditions.aircraft = AircraftClassName::Boeing737;
  meta.conditions.local_time = 14.25;
  meta.ownship.east = 120.5;
  meta.ownship.north = -44.0;
  meta.ownship.up = 310.0;
  meta.ownship.heading_deg = 271.5;
  meta.ownship.pitch_deg = -3.0;
  meta.ownship.roll_deg = 12.0;
  meta.intruder_range = 412.0;
  meta.intruder_vertical_offset = -18.0;
  meta.bbox = BoundingBox{0.4, 0.6, 0.05, 0.03, 0, 1.0};

  SUBCASE("round trip") {
    const ImageMetadata back = parse_metadata(write_metadata(meta));
    CHECK(back.conditions.weather == Weather::Scattered);
    CHECK(back.conditions.local_time == doctest::Approx(14.25));
    CHECK(back.ownship.heading_deg == doctest::Approx(271.5));
    CHECK(back.intruder_range == doctest::Approx(412.0));
    REQUIRE(back.bbox.has_value());
    CHECK(back.bbox->center_x == doctest::Approx(0.4));
  }
  SUBCASE("unknown fields survive the round trip") {
    nlohmann::json j = nlohmann::json::parse(write_metadata(meta));
    j["renderer"] = {{"engine", "custom"}, {"framesPerSecond", 30}};
    const ImageMetadata back = parse_metadata(j.dump());
    CHECK(back.extra.contains("renderer"));
    const nlohmann::json j2 = nlohmann::json::parse(write_metadata(back));
    CHECK(j2["renderer"]["framesPerSecond"] == 30);
    CHECK(j2["weather"] == "Scattered");
  }
  SUBCASE("unknown enum value names the field") {
    nlohmann::json j = nlohmann::json::parse(write_metadata(meta));
    j["weather"] = "Tornado";
    try {
      parse_metadata(j.dump());
      FAIL("expected SchemaError");
    } catch (const SchemaError& e) {
      const std::string msg = e.what();
      CHECK(msg.find("weather") != std::string::npos);
      CHECK(msg.find("Tornado") != std::string::npos);
    }
  }
  SUBCASE("missing required field names the field") {
    nlohmann::json j = nlohmann::json::parse(write_metadata(meta));
    j.erase("intruderRange");
    try {
      parse_metadata(j.dump());
      FAIL("expected SchemaError");
    } catch (const SchemaError& e) {
      CHECK(std::string(e.what()).find("intruderRange") != std::string::npos);
    }
  }
  SUBCASE("out-of-range local time is rejected") {
    nlohmann::json j = nlohmann::json::parse(write_metadata(meta));
    j["localTime"] = 22.0;
    CHECK_THROWS_AS(parse_metadata(j.dump()), SchemaError);
  }
}

TEST_CASE("synthetic dataset stratification and self-consistency") {
  Rng rng(20240101);
  const SceneConfig scene_cfg;
  const CameraModel cam;
  const ClassTable classes = default_class_table();

  SUBCASE("exact equal split when divisible") {
    const auto samples = generate_synthetic_dataset(144, rng, scene_cfg, cam, classes);
    REQUIRE(samples.size() == 144);
    std::map<std::tuple<int, int, int>, int> counts;
    for (const auto& s : samples) {
      counts[{static_cast<int>(s.meta.conditions.weather),
              static_cast<int>(s.meta.conditions.region),
              static_cast<int>(s.meta.conditions.aircraft)}]++;
    }
    CHECK(counts.size() == 72);
    for (const auto& [key, n] : counts) CHECK(n == 2);
  }
  SUBCASE("remainder spreads round-robin") {
    const auto samples = generate_synthetic_dataset(75, rng, scene_cfg, cam, classes);
    REQUIRE(samples.size() == 75);
    std::map<std::tuple<int, int, int>, int> counts;
    for (const auto& s : samples) {
      counts[{static_cast<int>(s.meta.conditions.weather),
              static_cast<int>(s.meta.conditions.region),
              static_cast<int>(s.meta.conditions.aircraft)}]++;
    }
    int with_two = 0, with_one = 0;
    for (const auto& [key, n] : counts) {
      if (n == 2) ++with_two;
      if (n == 1) ++with_one;
    }
    CHECK(with_two == 3);
    CHECK(with_one == 69);
    CHECK_THROWS_AS(generate_synthetic_dataset(0, rng, scene_cfg, cam, classes),
                    std::invalid_argument);
  }
  SUBCASE("labels re-derive from metadata through the projection") {
    const auto samples = generate_synthetic_dataset(72, rng, scene_cfg, cam, classes);
    for (const auto& s : samples) {
      const AircraftState intr = metadata_intruder_state(s.meta, cam);
      const auto box =
          project_to_image(cam, s.meta.ownship, intr,
                           class_for(classes, s.meta.conditions.aircraft));
      REQUIRE(box.has_value());
      REQUIRE(s.meta.bbox.has_value());
      CHECK(box->center_x == doctest::Approx(s.meta.bbox->center_x).epsilon(1e-9));
      CHECK(box->center_y == doctest::Approx(s.meta.bbox->center_y).epsilon(1e-9));
      CHECK(box->width == doctest::Approx(s.meta.bbox->width).epsilon(1e-9));
      CHECK(box->height == doctest::Approx(s.meta.bbox->height).epsilon(1e-9));
      const BoundingBox clipped = clip_box(*box);
      CHECK(clipped.center_x == doctest::Approx(s.label.center_x).epsilon(1e-9));
      CHECK(clipped.width == doctest::Approx(s.label.width).epsilon(1e-9));
      // Range respects the class minimum.
      CHECK(s.meta.intruder_range >
            min_range_for(SceneConfig{}, s.meta.conditions.aircraft));
    }
  }
  SUBCASE("written files parse back") {
    const auto samples = generate_synthetic_dataset(8, rng, scene_cfg, cam, classes);
    const fs::path dir = temp_dir("daa_dataset_test");
    write_synthetic_dataset(samples, dir);
    for (const auto& s : samples) {
      std::ifstream label_in(dir / "labels" / (s.stem + ".txt"));
      REQUIRE(label_in.good());
      std::string text((std::istreambuf_iterator<char>(label_in)),
                       std::istreambuf_iterator<char>());
      const auto labels = parse_yolo_labels(text);
      REQUIRE(labels.size() == 1);
      CHECK(labels[0].class_id == 0);

      std::ifstream meta_in(dir / "labels" / (s.stem + ".json"));
      REQUIRE(meta_in.good());
      std::string jtext((std::istreambuf_iterator<char>(meta_in)),
                        std::istreambuf_iterator<char>());
      const ImageMetadata meta = parse_metadata(jtext);
      CHECK(meta.conditions.weather == s.meta.conditions.weather);
    }
    fs::remove_all(dir);
  }
}

TEST_CASE("encounter files round trip exactly") {
  const EncounterConfig cfg;
  const Encounter enc = sample_encounter(909, cfg);
  const fs::path dir = temp_dir("daa_encounter_test");
  const fs::path path = dir / "enc.json";
  save_encounter(enc, path);
  const Encounter back = load_encounter(path);
  REQUIRE(back.ownship_script.size() == enc.ownship_script.size());
  REQUIRE(back.ownship_script.size() == 51);
  for (std::size_t i = 0; i < enc.ownship_script.size(); ++i) {
    CHECK(back.ownship_script[i].east == enc.ownship_script[i].east);
    CHECK(back.ownship_script[i].up == enc.ownship_script[i].up);
    CHECK(back.intruder_script[i].north == enc.intruder_script[i].north);
    CHECK(back.intruder_script[i].heading_deg == enc.intruder_script[i].heading_deg);
  }
  CHECK(back.seed == enc.seed);
  CHECK(back.features.hmd == enc.features.hmd);
  CHECK(back.conditions.weather == enc.conditions.weather);

  // Missing schema version is an explicit error.
  nlohmann::json j = encounter_to_json(enc);
  j.erase("schemaVersion");
  CHECK_THROWS_AS(encounter_from_json(j), SchemaError);
  j["schemaVersion"] = 99;
  CHECK_THROWS_AS(encounter_from_json(j), SchemaError);
  fs::remove_all(dir);
}

TEST_CASE("result JSON lines round trip") {
  EncounterResult res;
  res.id = 3;
  res.seed = 1234567890123ull;
  res.nmac = true;
  res.min_horizontal_sep = 12.25;
  res.min_vertical_sep_at_min_horizontal = 4.5;
  res.alert_steps = 7;
  res.total_steps = 50;
  StepRecord step;
  step.t = 1.0;
  step.detected = true;
  step.advisory = Advisory::CL1500;
  step.commanded_rate = 7.62;
  step.actual_rate = 2.45;
  step.ownship.east = 10.0;
  res.steps.push_back(step);

  const fs::path dir = temp_dir("daa_results_test");
  const fs::path path = dir / "results.jsonl";
  save_results_jsonl(std::vector<EncounterResult>{res, res}, path);
  const auto back = load_results_jsonl(path);
  REQUIRE(back.size() == 2);
  CHECK(back[0].nmac);
  CHECK(back[0].seed == res.seed);
  CHECK(back[0].min_horizontal_sep == res.min_horizontal_sep);
  REQUIRE(back[0].steps.size() == 1);
  CHECK(back[0].steps[0].advisory == Advisory::CL1500);
  CHECK(back[0].steps[0].ownship.east == 10.0);

  // Byte-identical re-serialization.
  const fs::path path2 = dir / "results2.jsonl";
  save_results_jsonl(back, path2);
  std::ifstream f1(path), f2(path2);
  const std::string b1((std::istreambuf_iterator<char>(f1)),
                       std::istreambuf_iterator<char>());
  const std::string b2((std::istreambuf_iterator<char>(f2)),
                       std::istreambuf_iterator<char>());
  CHECK(b1 == b2);
  fs::remove_all(dir);
}

TEST_CASE("malformed result lines report their line number") {
  const fs::path dir = temp_dir("daa_badjsonl_test");
  {
    std::ofstream out(dir / "bad.jsonl");
    EncounterResult res;
    res.total_steps = 50;
    out << result_to_json(res).dump() << '\n';
    out << "{broken\n";
  }
  try {
    load_results_jsonl(dir / "bad.jsonl");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line == 2);
  }
  fs::remove_all(dir);
}

TEST_CASE("range-bucket proportions of the synthetic mixture") {
  // Gamma(2,200) for the small types, Gamma(3,200) for the Boeing, with the
  // class minimums applied; mixture weights 2/3 and 1/3. Expected bucket
  // shares computed from the closed-form gamma CDF.
  Rng rng(777);
  const SceneConfig cfg;
  const CameraModel cam;
  const auto samples =
      generate_synthetic_dataset(18000, rng, cfg, cam, default_class_table());
  long counts[3] = {0, 0, 0};
  for (const auto& s : samples) {
    counts[static_cast<int>(range_bucket(s.meta.intruder_range))]++;
  }
  const double near = double(counts[0]) / samples.size();
  const double mid = double(counts[1]) / samples.size();
  const double far = double(counts[2]) / samples.size();
  // Reference shares 9124/35932/26944 out of 72000.
  CHECK(std::abs(near - 9124.0 / 72000.0) < 0.015);
  CHECK(std::abs(mid - 35932.0 / 72000.0) < 0.015);
  CHECK(std::abs(far - 26944.0 / 72000.0) < 0.015);
}
