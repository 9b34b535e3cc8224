#include "daa/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace daa {

bool is_nmac(const RelativeGeometry& rel) {
  return rel.horizontal_range < kNmacHorizontalM &&
         std::abs(rel.vertical_offset) < kNmacVerticalM;
}

Frequency make_frequency(long hits, long n) {
  Frequency f;
  f.n = n;
  f.value = static_cast<double>(hits) / static_cast<double>(n);
  f.se = std::sqrt(f.value * (1.0 - f.value) / static_cast<double>(n));
  return f;
}

Frequency nmac_frequency(std::span<const EncounterResult> results) {
  if (results.empty()) throw std::invalid_argument("nmac_frequency: empty batch");
  long hits = 0;
  for (const auto& r : results) hits += r.nmac ? 1 : 0;
  return make_frequency(hits, static_cast<long>(results.size()));
}

Frequency alert_frequency(std::span<const EncounterResult> results) {
  if (results.empty()) throw std::invalid_argument("alert_frequency: empty batch");
  long alerts = 0, steps = 0;
  for (const auto& r : results) {
    alerts += r.alert_steps;
    steps += r.total_steps;
  }
  if (steps == 0) throw std::invalid_argument("alert_frequency: zero steps");
  return make_frequency(alerts, steps);
}

double iou(const BoundingBox& a, const BoundingBox& b) {
  const double ax0 = a.center_x - 0.5 * a.width, ax1 = a.center_x + 0.5 * a.width;
  const double ay0 = a.center_y - 0.5 * a.height, ay1 = a.center_y + 0.5 * a.height;
  const double bx0 = b.center_x - 0.5 * b.width, bx1 = b.center_x + 0.5 * b.width;
  const double by0 = b.center_y - 0.5 * b.height, by1 = b.center_y + 0.5 * b.height;
  const double iw = std::min(ax1, bx1) - std::max(ax0, bx0);
  const double ih = std::min(ay1, by1) - std::max(ay0, by0);
  if (iw <= 0.0 || ih <= 0.0) return 0.0;
  const double inter = iw * ih;
  const double uni = a.width * a.height + b.width * b.height - inter;
  return uni > 0.0 ? inter / uni : 0.0;
}

Matching match_detections(const std::vector<BoundingBox>& preds,
                          const std::vector<BoundingBox>& gts,
                          double iou_threshold) {
  if (!(iou_threshold > 0.0) || iou_threshold > 1.0) {
    throw std::invalid_argument("iou threshold must lie in (0, 1]");
  }
  Matching m;
  m.num_gt = static_cast<int>(gts.size());
  m.pred_to_gt.assign(preds.size(), -1);

  // Descending confidence; ties keep original order.
  std::vector<int> order(preds.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return preds[a].confidence > preds[b].confidence;
  });

  std::vector<bool> gt_taken(gts.size(), false);
  for (int pi : order) {
    double best_iou = 0.0;
    int best_gt = -1;
    for (int gi = 0; gi < static_cast<int>(gts.size()); ++gi) {
      if (gt_taken[gi]) continue;
      const double v = iou(preds[pi], gts[gi]);
      if (v >= iou_threshold && v > best_iou) {
        best_iou = v;
        best_gt = gi;
      }
    }
    if (best_gt >= 0) {
      gt_taken[best_gt] = true;
      m.pred_to_gt[pi] = best_gt;
    }
  }
  return m;
}

namespace {

struct ScoredOutcome {
  double confidence;
  bool tp;
};

// Pooled (confidence, tp) outcomes over all images plus the ground-truth
// count. Matching is per image.
std::pair<std::vector<ScoredOutcome>, long> score_images(
    std::span<const ImageDetections> images, double iou_threshold,
    double conf_threshold) {
  std::vector<ScoredOutcome> scored;
  long total_gt = 0;
  for (const auto& img : images) {
    total_gt += static_cast<long>(img.gts.size());
    std::vector<BoundingBox> kept;
    kept.reserve(img.preds.size());
    for (const auto& p : img.preds) {
      if (p.confidence >= conf_threshold) kept.push_back(p);
    }
    const Matching m = match_detections(kept, img.gts, iou_threshold);
    for (std::size_t i = 0; i < kept.size(); ++i) {
      scored.push_back({kept[i].confidence, m.pred_to_gt[i] >= 0});
    }
  }
  std::stable_sort(scored.begin(), scored.end(),
                   [](const ScoredOutcome& a, const ScoredOutcome& b) {
                     return a.confidence > b.confidence;
                   });
  return {std::move(scored), total_gt};
}

}  // namespace

PrPoint precision_recall(std::span<const ImageDetections> images,
                         double iou_threshold, double conf_threshold) {
  const auto [scored, total_gt] = score_images(images, iou_threshold, conf_threshold);
  if (total_gt == 0) throw std::invalid_argument("precision_recall: no ground truth");
  long tp = 0;
  for (const auto& s : scored) tp += s.tp ? 1 : 0;
  const long fp = static_cast<long>(scored.size()) - tp;
  PrPoint pr;
  pr.precision = scored.empty() ? 1.0 : static_cast<double>(tp) / (tp + fp);
  pr.recall = static_cast<double>(tp) / total_gt;
  return pr;
}

double average_precision(std::span<const ImageDetections> images,
                         double iou_threshold, ApInterp interp) {
  const auto [scored, total_gt] = score_images(images, iou_threshold, 0.0);
  if (total_gt == 0) {
    throw std::invalid_argument("average_precision: no ground truth");
  }
  // One PR point per distinct confidence threshold: tied predictions enter
  // the curve together, so the curve is independent of input order.
  std::vector<double> precision, recall;
  long tp = 0, seen = 0;
  std::size_t i = 0;
  while (i < scored.size()) {
    const double conf = scored[i].confidence;
    while (i < scored.size() && scored[i].confidence == conf) {
      tp += scored[i].tp ? 1 : 0;
      ++seen;
      ++i;
    }
    precision.push_back(static_cast<double>(tp) / static_cast<double>(seen));
    recall.push_back(static_cast<double>(tp) / static_cast<double>(total_gt));
  }
  // Precision envelope from the right.
  for (int k = static_cast<int>(precision.size()) - 2; k >= 0; --k) {
    precision[k] = std::max(precision[k], precision[k + 1]);
  }

  if (interp == ApInterp::Points101) {
    double sum = 0.0;
    for (int k = 0; k <= 100; ++k) {
      const double r = k / 100.0;
      double p = 0.0;
      for (std::size_t n = 0; n < recall.size(); ++n) {
        if (recall[n] >= r) {
          p = precision[n];
          break;
        }
      }
      sum += p;
    }
    return sum / 101.0;
  }

  double ap = 0.0;
  double prev_recall = 0.0;
  for (std::size_t n = 0; n < precision.size(); ++n) {
    ap += (recall[n] - prev_recall) * precision[n];
    prev_recall = recall[n];
  }
  return ap;
}

double mean_average_precision(std::span<const ImageDetections> images,
                              const ApSettings& settings) {
  if (!settings.coco_style) {
    return average_precision(images, settings.iou_threshold, settings.interp);
  }
  double sum = 0.0;
  int count = 0;
  for (double thr = 0.5; thr < 0.96; thr += 0.05) {
    sum += average_precision(images, thr, settings.interp);
    ++count;
  }
  return sum / count;
}

// --- slicing ------------------------------------------------------------------

const char* facet_name(Facet f) {
  switch (f) {
    case Facet::All: return "all";
    case Facet::Weather: return "weather";
    case Facet::Region: return "region";
    case Facet::AircraftType: return "aircraft";
    case Facet::TimeOfDay: return "timeofday";
    case Facet::RangeBucket: return "range";
    case Facet::RelativeAltitude: return "relalt";
  }
  return "?";
}

std::optional<Facet> parse_facet(const std::string& s) {
  for (Facet f : {Facet::All, Facet::Weather, Facet::Region, Facet::AircraftType,
                  Facet::TimeOfDay, Facet::RangeBucket, Facet::RelativeAltitude}) {
    if (s == facet_name(f)) return f;
  }
  return std::nullopt;
}

RangeBucket range_bucket(double range_m) {
  if (range_m < 150.0) return RangeBucket::Near;
  if (range_m < 500.0) return RangeBucket::Mid;
  return RangeBucket::Far;
}

namespace {

int facet_cardinality(Facet f) {
  switch (f) {
    case Facet::All: return 1;
    case Facet::Weather: return kNumWeather;
    case Facet::Region: return kNumRegions;
    case Facet::AircraftType: return kNumAircraftClasses;
    case Facet::TimeOfDay: return kNumTimeWindows;
    case Facet::RangeBucket: return 3;
    case Facet::RelativeAltitude: return 2;
  }
  return 0;
}

int condition_slice_value(Facet f, const Conditions& c) {
  switch (f) {
    case Facet::All: return 0;
    case Facet::Weather: return static_cast<int>(c.weather);
    case Facet::Region: return static_cast<int>(c.region);
    case Facet::AircraftType: return static_cast<int>(c.aircraft);
    case Facet::TimeOfDay: return static_cast<int>(time_of_day_window(c.local_time));
    default:
      throw std::invalid_argument(std::string("facet ") + facet_name(f) +
                                  " does not apply to condition records");
  }
}

}  // namespace

std::string SliceKey::label() const {
  switch (facet) {
    case Facet::All: return "all";
    case Facet::Weather: return weather_name(static_cast<Weather>(value));
    case Facet::Region: return region_name(static_cast<Region>(value));
    case Facet::AircraftType:
      return aircraft_class_name(static_cast<AircraftClassName>(value));
    case Facet::TimeOfDay: return time_window_name(static_cast<TimeWindow>(value));
    case Facet::RangeBucket:
      return value == 0 ? "0-150m" : value == 1 ? "150-500m" : ">500m";
    case Facet::RelativeAltitude: return value == 0 ? "Below" : "Above";
  }
  return "?";
}

std::vector<SliceReport> slice_safety(std::span<const EncounterResult> results,
                                      Facet facet) {
  const int card = facet_cardinality(facet);
  std::vector<std::vector<const EncounterResult*>> groups(card);
  for (const auto& r : results) {
    groups[condition_slice_value(facet, r.conditions)].push_back(&r);
  }
  std::vector<SliceReport> out;
  for (int v = 0; v < card; ++v) {
    SliceReport rep;
    rep.key = {facet, v};
    rep.n = static_cast<long>(groups[v].size());
    if (rep.n > 0) {
      long nmacs = 0, alerts = 0, steps = 0;
      for (const auto* r : groups[v]) {
        nmacs += r->nmac ? 1 : 0;
        alerts += r->alert_steps;
        steps += r->total_steps;
      }
      const Frequency nf = make_frequency(nmacs, rep.n);
      rep.metrics.push_back({"nmacFreq", nf.value, nf.se});
      if (steps > 0) {
        const Frequency af = make_frequency(alerts, steps);
        rep.metrics.push_back({"alertFreq", af.value, af.se});
      }
    }
    out.push_back(std::move(rep));
  }
  return out;
}

std::vector<SliceReport> slice_detection(std::span<const DetectionRecord> records,
                                         Facet facet, const EvalSettings& settings) {
  const int card = facet_cardinality(facet);
  std::vector<std::vector<ImageDetections>> groups(card);
  std::vector<long> counts(card, 0);
  for (const auto& r : records) {
    int v = 0;
    switch (facet) {
      case Facet::RangeBucket: v = static_cast<int>(range_bucket(r.intruder_range)); break;
      case Facet::RelativeAltitude: v = r.vertical_offset < 0.0 ? 0 : 1; break;
      default: v = condition_slice_value(facet, r.conditions); break;
    }
    groups[v].push_back(r.det);
    ++counts[v];
  }
  std::vector<SliceReport> out;
  for (int v = 0; v < card; ++v) {
    SliceReport rep;
    rep.key = {facet, v};
    rep.n = counts[v];
    if (rep.n > 0) {
      bool any_gt = false;
      for (const auto& img : groups[v]) any_gt = any_gt || !img.gts.empty();
      if (any_gt) {
        const PrPoint pr = precision_recall(groups[v], settings.iou_threshold,
                                            settings.conf_threshold);
        rep.metrics.push_back({"precision", pr.precision, std::nullopt});
        rep.metrics.push_back({"recall", pr.recall, std::nullopt});
        rep.metrics.push_back(
            {"map", mean_average_precision(groups[v], settings.ap), std::nullopt});
      }
    }
    out.push_back(std::move(rep));
  }
  return out;
}

}  // namespace daa
