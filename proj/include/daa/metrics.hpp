#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "daa/encounters.hpp"
#include "daa/geometry.hpp"
#include "daa/simulator_types.hpp"

namespace daa {

// Simultaneous loss of separation below 152.4 m horizontally and 30.48 m
// vertically (both strict).
bool is_nmac(const RelativeGeometry& rel);

struct Frequency {
  double value = 0.0;
  double se = 0.0;  // sqrt(p (1 - p) / n)
  long n = 0;
};

Frequency make_frequency(long hits, long n);

// Fraction of encounters with the nmac flag set. Throws on an empty batch.
Frequency nmac_frequency(std::span<const EncounterResult> results);

// Alert steps over total steps across the batch. Throws on an empty batch.
Frequency alert_frequency(std::span<const EncounterResult> results);

// Intersection over union in normalized coordinates.
double iou(const BoundingBox& a, const BoundingBox& b);

// Greedy one-to-one matching by descending confidence; each prediction takes
// the unmatched ground truth of highest IoU >= threshold.
struct Matching {
  std::vector<int> pred_to_gt;  // -1 for unmatched (false positive)
  int num_gt = 0;
};
Matching match_detections(const std::vector<BoundingBox>& preds,
                          const std::vector<BoundingBox>& gts, double iou_threshold);

struct ImageDetections {
  std::vector<BoundingBox> preds;
  std::vector<BoundingBox> gts;
};

struct PrPoint {
  double precision = 1.0;
  double recall = 0.0;
};

// Precision/recall at a confidence threshold, pooled over images. Zero kept
// predictions give precision 1.0 by convention; requires at least one ground
// truth overall.
PrPoint precision_recall(std::span<const ImageDetections> images,
                         double iou_threshold, double conf_threshold);

enum class ApInterp { AllPoint, Points101 };

// Area under the precision-recall curve at one IoU threshold, predictions
// sorted by descending confidence. Throws when no ground truth exists.
double average_precision(std::span<const ImageDetections> images,
                         double iou_threshold, ApInterp interp = ApInterp::AllPoint);

struct ApSettings {
  double iou_threshold = 0.5;
  ApInterp interp = ApInterp::AllPoint;
  bool coco_style = false;  // average over IoU 0.50:0.05:0.95
};

// Single detection class, so mAP reduces to AP under the chosen regime.
double mean_average_precision(std::span<const ImageDetections> images,
                              const ApSettings& settings = {});

// --- sliced aggregation -----------------------------------------------------

enum class Facet { All = 0, Weather, Region, AircraftType, TimeOfDay, RangeBucket,
                   RelativeAltitude };

const char* facet_name(Facet f);
std::optional<Facet> parse_facet(const std::string& s);

enum class RangeBucket { Near = 0, Mid, Far };  // [0,150) [150,500) [500,inf)
RangeBucket range_bucket(double range_m);

struct SliceKey {
  Facet facet = Facet::All;
  int value = 0;
  std::string label() const;
};

struct SliceMetric {
  std::string name;
  double value = 0.0;
  std::optional<double> se;  // standard error, frequency metrics only
};

struct SliceReport {
  SliceKey key;
  long n = 0;
  std::vector<SliceMetric> metrics;
};

// Safety metrics per slice. Applicable facets: All, Weather, Region,
// AircraftType, TimeOfDay; others throw std::invalid_argument.
std::vector<SliceReport> slice_safety(std::span<const EncounterResult> results,
                                      Facet facet);

// Per-image record for detection slicing.
struct DetectionRecord {
  ImageDetections det;
  Conditions conditions;
  double intruder_range = 0.0;    // slant, m
  double vertical_offset = 0.0;   // m, intruder minus ownship
};

struct EvalSettings {
  double iou_threshold = 0.5;
  double conf_threshold = 0.25;
  ApSettings ap;
};

// Precision, recall, and mAP per slice; any facet applies.
std::vector<SliceReport> slice_detection(std::span<const DetectionRecord> records,
                                         Facet facet, const EvalSettings& settings);

// --- report emitters ---------------------------------------------------------

void write_report_csv(std::span<const SliceReport> reports, std::ostream& out);
void write_report_markdown(std::span<const SliceReport> reports, std::ostream& out);
nlohmann::json report_plot_data(Facet facet, std::span<const SliceReport> reports);

}  // namespace daa
