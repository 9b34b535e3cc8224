#include <doctest.h>

#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>

#include "daa/perception.hpp"
#include "daa/rng.hpp"

using namespace daa;

namespace {

AircraftState own_at_origin() {
  AircraftState s;
  s.ground_speed = 60.0;
  return s;
}

AircraftState intruder_ahead(double north, double up = 0.0) {
  AircraftState s;
  s.north = north;
  s.up = up;
  s.heading_deg = 180.0;
  s.ground_speed = 60.0;
  return s;
}

Conditions cessna_conditions() {
  Conditions c;
  c.aircraft = AircraftClassName::CessnaSkyhawk;
  return c;
}

}  // namespace

TEST_CASE("perfect perception detects exactly the in-FOV states") {
  const CameraModel cam;
  auto perception = make_perfect_perception(cam, default_class_table());
  Rng rng(1);
  const Conditions cond = cessna_conditions();

  const auto ahead = perception->perceive(own_at_origin(), intruder_ahead(800, 60),
                                          cond, rng);
  REQUIRE(ahead.has_value());
  CHECK(ahead->source == PerceptionSource::Perfect);
  CHECK(ahead->rel.horizontal_range == doctest::Approx(800.0));
  CHECK(ahead->rel.vertical_offset == doctest::Approx(60.0));
  REQUIRE(ahead->detected_box.has_value());
  CHECK(ahead->detected_box->confidence == 1.0);

  const auto behind =
      perception->perceive(own_at_origin(), intruder_ahead(-800), cond, rng);
  CHECK_FALSE(behind.has_value());

  // Truth-derived sign of the vertical offset.
  const auto below = perception->perceive(own_at_origin(), intruder_ahead(700, -90),
                                          cond, rng);
  REQUIRE(below.has_value());
  CHECK(below->rel.vertical_offset < 0.0);
}

TEST_CASE("detection probability composes buckets, multipliers, and scale") {
  DetectorProfile profile = default_detector_profile();
  const Conditions cond = cessna_conditions();
  CHECK(detection_probability(profile, 100.0, cond) == doctest::Approx(0.983));
  CHECK(detection_probability(profile, 150.0, cond) == doctest::Approx(0.960));
  CHECK(detection_probability(profile, 300.0, cond) == doctest::Approx(0.960));
  CHECK(detection_probability(profile, 2000.0, cond) == doctest::Approx(0.818));

  profile.weather_multipliers[Weather::Clear] = 0.5;
  CHECK(detection_probability(profile, 300.0, cond) == doctest::Approx(0.48));

  profile.probability_scale = 3.0;  // composition clamps to [0, 1]
  CHECK(detection_probability(profile, 300.0, cond) == 1.0);
}

TEST_CASE("stochastic perception extremes") {
  const CameraModel cam;
  const Conditions cond = cessna_conditions();

  DetectorProfile always = default_detector_profile();
  always.recall_by_range = {{std::numeric_limits<double>::infinity(), 1.0}};
  auto p1 = make_stochastic_perception(cam, default_class_table(), always);
  DetectorProfile never = default_detector_profile();
  never.probability_scale = 0.0;
  auto p0 = make_stochastic_perception(cam, default_class_table(), never);

  Rng rng(2);
  for (int i = 0; i < 200; ++i) {
    CHECK(p1->perceive(own_at_origin(), intruder_ahead(500), cond, rng).has_value());
    CHECK_FALSE(
        p0->perceive(own_at_origin(), intruder_ahead(500), cond, rng).has_value());
  }
  // Out of view: never detected even at probability 1.
  CHECK_FALSE(
      p1->perceive(own_at_origin(), intruder_ahead(-500), cond, rng).has_value());
}

TEST_CASE("stochastic calibration per range bucket") {
  const CameraModel cam;
  const Conditions cond = cessna_conditions();
  auto perception =
      make_stochastic_perception(cam, default_class_table(), default_detector_profile());

  const struct {
    double range;
    double expected;
  } buckets[] = {{100.0, 0.983}, {300.0, 0.960}, {900.0, 0.818}};
  Rng rng(20240601);
  for (const auto& bucket : buckets) {
    int detected = 0;
    const int n = 10000;
    for (int i = 0; i < n; ++i) {
      if (perception->perceive(own_at_origin(), intruder_ahead(bucket.range), cond, rng)
              .has_value()) {
        ++detected;
      }
    }
    const double rate = static_cast<double>(detected) / n;
    CHECK(std::abs(rate - bucket.expected) < 0.02);
  }
}

TEST_CASE("shared seeds couple detection sets monotonically") {
  const CameraModel cam;
  const Conditions cond = cessna_conditions();
  const double scales[] = {0.0, 0.5, 0.8, 1.0};

  // A mixed truth sequence: some steps out of view.
  std::vector<AircraftState> intruders;
  for (int i = 0; i < 400; ++i) {
    intruders.push_back(intruder_ahead(i % 7 == 0 ? -400.0 : 200.0 + 3.0 * i));
  }

  std::vector<std::set<int>> detected_sets;
  for (const double scale : scales) {
    DetectorProfile profile = default_detector_profile();
    profile.probability_scale = scale;
    auto perception = make_stochastic_perception(cam, default_class_table(), profile);
    Rng rng(777);  // same stream for every scale
    std::set<int> detected;
    for (int i = 0; i < static_cast<int>(intruders.size()); ++i) {
      if (perception->perceive(own_at_origin(), intruders[i], cond, rng).has_value()) {
        detected.insert(i);
      }
    }
    detected_sets.push_back(std::move(detected));
  }
  CHECK(detected_sets[0].empty());
  for (std::size_t k = 1; k < detected_sets.size(); ++k) {
    for (int idx : detected_sets[k - 1]) {
      CHECK(detected_sets[k].count(idx) == 1);
    }
  }
  // Perfect perception dominates every stochastic set.
  auto perfect = make_perfect_perception(cam, default_class_table());
  Rng rng(777);
  std::set<int> perfect_set;
  for (int i = 0; i < static_cast<int>(intruders.size()); ++i) {
    if (perfect->perceive(own_at_origin(), intruders[i], cond, rng).has_value()) {
      perfect_set.insert(i);
    }
  }
  for (int idx : detected_sets.back()) CHECK(perfect_set.count(idx) == 1);
}

TEST_CASE("optional estimate noise perturbs geometry, not detection") {
  const CameraModel cam;
  const Conditions cond = cessna_conditions();
  DetectorProfile always = default_detector_profile();
  always.recall_by_range = {{std::numeric_limits<double>::infinity(), 1.0}};
  EstimateNoise noise;
  noise.enabled = true;
  noise.bearing_sigma_deg = 1.0;
  noise.elevation_sigma_deg = 0.5;
  noise.range_sigma_frac = 0.05;
  auto noisy = make_stochastic_perception(cam, default_class_table(), always, noise);

  Rng rng(99);
  const AircraftState truth = intruder_ahead(600, 40);
  const RelativeGeometry exact = relative_geometry(own_at_origin(), truth);
  int detections = 0;
  double sum_range = 0.0;
  bool any_range_differs = false;
  for (int i = 0; i < 500; ++i) {
    const auto est = noisy->perceive(own_at_origin(), truth, cond, rng);
    REQUIRE(est.has_value());
    ++detections;
    sum_range += est->rel.horizontal_range;
    any_range_differs =
        any_range_differs || est->rel.horizontal_range != exact.horizontal_range;
  }
  CHECK(detections == 500);  // noise never gates detection
  CHECK(any_range_differs);
  // Unbiased around the truth at this sigma.
  CHECK(sum_range / 500.0 ==
        doctest::Approx(exact.horizontal_range).epsilon(0.01));
}

TEST_CASE("box-geometry estimates recover truth through the projection") {
  const CameraModel cam;
  const Conditions cond = cessna_conditions();
  auto perception = make_box_geometry_perception(cam, default_class_table());
  Rng rng(5);

  const auto est =
      perception->perceive(own_at_origin(), intruder_ahead(400, 30), cond, rng);
  REQUIRE(est.has_value());
  CHECK(est->source == PerceptionSource::BoxGeometry);
  const RelativeGeometry truth =
      relative_geometry(own_at_origin(), intruder_ahead(400, 30));
  CHECK(std::abs(est->rel.horizontal_range - truth.horizontal_range) <
        0.01 * truth.horizontal_range);
  CHECK(est->rel.vertical_offset > 0.0);

  CHECK_FALSE(
      perception->perceive(own_at_origin(), intruder_ahead(-400), cond, rng).has_value());

  // Bearing sign matches truth on both sides.
  AircraftState right = intruder_ahead(600);
  right.east = 100.0;
  const auto est_right = perception->perceive(own_at_origin(), right, cond, rng);
  REQUIRE(est_right.has_value());
  CHECK(est_right->rel.bearing_deg > 0.0);
  AircraftState left = intruder_ahead(600);
  left.east = -100.0;
  const auto est_left = perception->perceive(own_at_origin(), left, cond, rng);
  REQUIRE(est_left.has_value());
  CHECK(est_left->rel.bearing_deg < 0.0);
}

TEST_CASE("external detector round trips boxes over the line protocol") {
  const CameraModel cam;
  const Conditions cond = cessna_conditions();
  Rng rng(6);

  // Echo responder: always one centered box whose width encodes 400 m.
  const AircraftClass cls = default_aircraft_class(AircraftClassName::CessnaSkyhawk);
  const double width = 2.0 * std::atan2(0.5 * cls.wingspan, 400.0) /
                       (cam.hfov_deg * kDegToRad);
  char script[512];
  std::snprintf(script,
                sizeof(script),
                "python3 -c 'import sys, json\n"
                "for line in sys.stdin:\n"
                "    req = json.loads(line)\n"
                "    print(json.dumps({\"id\": req[\"id\"], \"boxes\": "
                "[{\"cx\": 0.5, \"cy\": 0.5, \"w\": %.12f, \"h\": 0.01, "
                "\"conf\": 0.9}]}), flush=True)'",
                width);

  DetectorEndpoint ep;
  ep.spec = script;
  ep.timeout_ms = 10000;
  ep.hard_fail = true;
  auto perception = make_external_perception(cam, default_class_table(), ep);
  const auto est = perception->perceive(own_at_origin(), intruder_ahead(400), cond, rng);
  REQUIRE(est.has_value());
  CHECK(est->source == PerceptionSource::External);
  CHECK(est->rel.horizontal_range == doctest::Approx(400.0).epsilon(1e-6));
  CHECK(est->detected_box->confidence == doctest::Approx(0.9));

  // Several sequential requests reuse the channel with matching ids.
  for (int i = 0; i < 5; ++i) {
    CHECK(perception->perceive(own_at_origin(), intruder_ahead(400), cond, rng)
              .has_value());
  }
}

TEST_CASE("external detector: empty box list means undetected") {
  const CameraModel cam;
  DetectorEndpoint ep;
  ep.spec =
      "python3 -c 'import sys, json\n"
      "for line in sys.stdin:\n"
      "    print(json.dumps({\"id\": json.loads(line)[\"id\"], \"boxes\": []}), "
      "flush=True)'";
  ep.timeout_ms = 10000;
  ep.hard_fail = true;
  auto perception = make_external_perception(cam, default_class_table(), ep);
  Rng rng(7);
  CHECK_FALSE(perception
                  ->perceive(own_at_origin(), intruder_ahead(400),
                             cessna_conditions(), rng)
                  .has_value());
}

TEST_CASE("external detector: malformed responses raise protocol errors") {
  const CameraModel cam;
  DetectorEndpoint ep;
  ep.spec = "python3 -c 'import sys\nfor line in sys.stdin:\n    print(\"not json\", flush=True)'";
  ep.timeout_ms = 10000;
  ep.hard_fail = true;
  auto perception = make_external_perception(cam, default_class_table(), ep);
  Rng rng(8);
  try {
    perception->perceive(own_at_origin(), intruder_ahead(400), cessna_conditions(), rng);
    FAIL("expected PerceptionError");
  } catch (const PerceptionError& e) {
    CHECK(std::string(e.what()).find("not json") != std::string::npos);
  }
}

TEST_CASE("external detector: timeout surfaces per the failure policy") {
  const CameraModel cam;
  DetectorEndpoint ep;
  ep.spec = "python3 -c 'import time, sys\nsys.stdin.readline()\ntime.sleep(30)'";
  ep.timeout_ms = 300;

  SUBCASE("soft failure degrades to undetected") {
    ep.hard_fail = false;
    auto perception = make_external_perception(cam, default_class_table(), ep);
    Rng rng(9);
    CHECK_FALSE(perception
                    ->perceive(own_at_origin(), intruder_ahead(400),
                               cessna_conditions(), rng)
                    .has_value());
  }
  SUBCASE("hard failure throws") {
    ep.hard_fail = true;
    auto perception = make_external_perception(cam, default_class_table(), ep);
    Rng rng(10);
    CHECK_THROWS_AS(perception->perceive(own_at_origin(), intruder_ahead(400),
                                         cessna_conditions(), rng),
                    PerceptionError);
  }
}

TEST_CASE("external detector speaks the protocol over TCP") {
  namespace fs = std::filesystem;
  const fs::path port_file = fs::temp_directory_path() / "daa_tcp_port";
  fs::remove(port_file);

  // One-connection echo server; binds an ephemeral port and publishes it.
  std::string server =
      "python3 -c 'import socket, json\n"
      "srv = socket.socket()\n"
      "srv.bind((\"127.0.0.1\", 0))\n"
      "srv.listen(1)\n"
      "srv.settimeout(20)\n"
      "open(\"" + port_file.string() + "\", \"w\").write(str(srv.getsockname()[1]))\n"
      "conn, _ = srv.accept()\n"
      "f = conn.makefile(\"rw\")\n"
      "for line in f:\n"
      "    req = json.loads(line)\n"
      "    f.write(json.dumps({\"id\": req[\"id\"], \"boxes\": [{\"cx\": 0.5, "
      "\"cy\": 0.5, \"w\": 0.05, \"h\": 0.02, \"conf\": 0.7}]}) + \"\\n\")\n"
      "    f.flush()' &";
  REQUIRE(std::system(server.c_str()) == 0);

  // Wait for the server to publish its port.
  std::string port;
  for (int i = 0; i < 200 && port.empty(); ++i) {
    usleep(50000);
    std::ifstream in(port_file);
    std::getline(in, port);
  }
  REQUIRE_FALSE(port.empty());

  const CameraModel cam;
  DetectorEndpoint ep;
  ep.spec = "tcp://127.0.0.1:" + port;
  ep.timeout_ms = 10000;
  ep.hard_fail = true;
  auto perception = make_external_perception(cam, default_class_table(), ep);
  Rng rng(12);
  for (int i = 0; i < 3; ++i) {
    const auto est = perception->perceive(own_at_origin(), intruder_ahead(300),
                                          cessna_conditions(), rng);
    REQUIRE(est.has_value());
    CHECK(est->detected_box->confidence == doctest::Approx(0.7));
  }
  fs::remove(port_file);
}

TEST_CASE("id mismatch is a protocol error") {
  const CameraModel cam;
  DetectorEndpoint ep;
  ep.spec =
      "python3 -c 'import sys, json\n"
      "for line in sys.stdin:\n"
      "    print(json.dumps({\"id\": 999, \"boxes\": []}), flush=True)'";
  ep.timeout_ms = 10000;
  ep.hard_fail = true;
  auto perception = make_external_perception(cam, default_class_table(), ep);
  Rng rng(11);
  CHECK_THROWS_AS(perception->perceive(own_at_origin(), intruder_ahead(400),
                                       cessna_conditions(), rng),
                  PerceptionError);
}
