#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "daa/config.hpp"
#include "daa/dataset_io.hpp"
#include "daa/metrics.hpp"
#include "daa/simulator.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace daa;

namespace {

constexpr const char* kToolVersion = "0.1.0";

// Exit codes: 0 success, 1 usage/config error, 2 runtime failure.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string iso_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct Manifest {
  std::string command;
  std::string started_at = iso_now();
  json details = json::object();
  std::vector<std::string> inputs, outputs;

  void write(const fs::path& path, const ToolConfig& cfg, std::uint64_t seed) const {
    json j = {{"command", command},
              {"toolVersion", kToolVersion},
              {"seed", seed},
              {"startedAt", started_at},
              {"finishedAt", iso_now()},
              {"inputs", inputs},
              {"outputs", outputs},
              {"details", details},
              {"config", config_to_json(cfg)}};
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write manifest " + path.string());
    out << j.dump(2) << '\n';
  }
};

ToolConfig resolve_config(const std::string& path) {
  if (path.empty()) return ToolConfig{};
  return load_config(path);
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw UsageError("cannot create output directory " + dir.string());
  const fs::path probe = dir / ".write_probe";
  std::ofstream f(probe);
  if (!f) throw UsageError("output directory is not writable: " + dir.string());
  f.close();
  fs::remove(probe, ec);
}

std::vector<Facet> parse_facet_list(const std::string& spec,
                                    const std::vector<Facet>& fallback) {
  if (spec.empty()) return fallback;
  std::vector<Facet> out;
  std::stringstream ss(spec);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    const auto f = parse_facet(tok);
    if (!f) throw UsageError("unknown facet '" + tok + "'");
    out.push_back(*f);
  }
  return out;
}

json frequency_json(const Frequency& f) {
  return {{"value", f.value}, {"se", f.se}, {"n", f.n}};
}

json slice_reports_json(const std::vector<SliceReport>& reports) {
  json arr = json::array();
  for (const auto& r : reports) {
    json metrics = json::object();
    for (const auto& m : r.metrics) {
      json entry = {{"value", m.value}};
      if (m.se) entry["se"] = *m.se;
      metrics[m.name] = entry;
    }
    arr.push_back({{"value", r.key.label()}, {"n", r.n}, {"metrics", metrics}});
  }
  return arr;
}

// ---- generate ----------------------------------------------------------------

int cmd_generate_encounters(const ToolConfig& cfg, std::uint64_t seed, long n,
                            const std::string& grid, long per_cell,
                            const fs::path& out_dir) {
  ensure_dir(out_dir);
  std::vector<Encounter> encounters;
  if (grid == "factorial") {
    const auto cells = condition_grid();
    long k = per_cell;
    if (k <= 0) {
      if (n % static_cast<long>(cells.size()) != 0) {
        throw UsageError("--n must be a multiple of " + std::to_string(cells.size()) +
                         " for a factorial grid (or pass --per-cell)");
      }
      k = n / static_cast<long>(cells.size());
    }
    long idx = 0;
    for (const auto& cell : cells) {
      for (long i = 0; i < k; ++i, ++idx) {
        encounters.push_back(sample_encounter_in_cell(
            mix64(seed ^ mix64(static_cast<std::uint64_t>(idx) + 1)), cfg.encounter,
            cell));
      }
    }
  } else if (grid == "iid") {
    if (n <= 0) throw UsageError("--n must be positive");
    for (long i = 0; i < n; ++i) {
      encounters.push_back(sample_encounter(
          mix64(seed ^ mix64(static_cast<std::uint64_t>(i) + 1)), cfg.encounter));
    }
  } else {
    throw UsageError("--grid must be iid or factorial");
  }

  char name[64];
  for (std::size_t i = 0; i < encounters.size(); ++i) {
    std::snprintf(name, sizeof(name), "encounter_%06zu.json", i);
    save_encounter(encounters[i], out_dir / name);
  }
  Manifest manifest;
  manifest.command = "generate encounters";
  manifest.details = {{"count", encounters.size()}, {"grid", grid}};
  manifest.outputs = {out_dir.string()};
  manifest.write(out_dir / "manifest.json", cfg, seed);
  std::printf("wrote %zu encounters to %s\n", encounters.size(),
              out_dir.string().c_str());
  return 0;
}

int cmd_generate_dataset(const ToolConfig& cfg, std::uint64_t seed, long n,
                         const fs::path& out_dir) {
  ensure_dir(out_dir);
  Rng rng(seed);
  const auto samples = generate_synthetic_dataset(static_cast<int>(n), rng, cfg.scene,
                                                  cfg.camera, cfg.classes);
  write_synthetic_dataset(samples, out_dir);
  Manifest manifest;
  manifest.command = "generate dataset";
  manifest.details = {{"count", samples.size()}};
  manifest.outputs = {(out_dir / "labels").string()};
  manifest.write(out_dir / "manifest.json", cfg, seed);
  std::printf("wrote %zu samples to %s\n", samples.size(),
              (out_dir / "labels").string().c_str());
  return 0;
}

// ---- solve -------------------------------------------------------------------

int cmd_solve(const ToolConfig& cfg, std::uint64_t seed, const fs::path& out_path,
              const std::string& csv_path) {
  PolicyTable table;
  try {
    table = value_iteration(cfg.mdp, cfg.solve);
  } catch (const SolveError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;  // no partial table is written
  }
  save_policy(table, out_path.string());
  if (!csv_path.empty()) {
    std::ofstream csv(csv_path);
    if (!csv) throw std::runtime_error("cannot write " + csv_path);
    export_q_csv(table, csv);
  }
  Manifest manifest;
  manifest.command = "solve";
  manifest.details = {{"iterations", table.info.iterations},
                      {"residual", table.info.residual},
                      {"backend", table.info.backend},
                      {"qEntries", table.q.size()}};
  manifest.outputs = {out_path.string()};
  manifest.write(fs::path(out_path.string() + ".manifest.json"), cfg, seed);
  std::printf("solved in %d iterations, residual %.3g (%s kernels) -> %s\n",
              table.info.iterations, table.info.residual, table.info.backend.c_str(),
              out_path.string().c_str());
  return 0;
}

// ---- simulate ----------------------------------------------------------------

std::vector<Encounter> load_encounter_dir(const fs::path& dir) {
  if (!fs::is_directory(dir)) {
    throw UsageError("encounter directory not found: " + dir.string());
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.path().extension() == ".json" &&
        entry.path().filename() != "manifest.json") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  std::vector<Encounter> encounters;
  encounters.reserve(files.size());
  for (const auto& f : files) encounters.push_back(load_encounter(f));
  if (encounters.empty()) {
    throw UsageError("no encounter files in " + dir.string());
  }
  return encounters;
}

int cmd_simulate(ToolConfig cfg, std::uint64_t seed, const fs::path& enc_dir,
                 const std::string& policy_path, const std::string& backend,
                 double scale, const std::string& detector,
                 const std::string& facet_spec, bool no_steps, bool fail_fast,
                 int workers, const fs::path& out_dir) {
  if (!fs::exists(policy_path)) {
    throw UsageError("policy file not found: " + policy_path);
  }
  const auto facets =
      parse_facet_list(facet_spec, {Facet::Weather, Facet::Region,
                                    Facet::AircraftType, Facet::TimeOfDay});
  for (const Facet f : facets) {
    if (f == Facet::RangeBucket || f == Facet::RelativeAltitude) {
      throw UsageError(std::string("facet '") + facet_name(f) +
                       "' does not apply to encounter batches");
    }
  }
  ensure_dir(out_dir);
  if (!detector.empty()) cfg.perception.endpoint.spec = detector;
  if (no_steps) cfg.sim.record_steps = false;
  if (fail_fast) cfg.sim.fail_fast = true;

  const PolicyTable policy = load_policy(policy_path);
  const std::vector<Encounter> encounters = load_encounter_dir(enc_dir);
  const auto perception = make_perception(cfg, backend, scale);
  const BatchResult batch =
      run_batch(encounters, *perception, policy, cfg.sim, seed, workers);

  save_results_jsonl(batch.results, out_dir / "results.jsonl");

  std::vector<EncounterResult> ok;
  std::vector<int> failed_ids;
  for (const auto& r : batch.results) {
    if (r.failed) {
      failed_ids.push_back(r.id);
    } else {
      ok.push_back(r);
    }
  }
  if (ok.empty()) throw std::runtime_error("every encounter failed");

  const Frequency nmac = nmac_frequency(ok);
  const Frequency alert = alert_frequency(ok);
  json facet_json = json::object();
  for (const Facet f : facets) {
    facet_json[facet_name(f)] = slice_reports_json(slice_safety(ok, f));
  }
  const json summary = {{"schemaVersion", kSchemaVersion},
                        {"n", ok.size()},
                        {"failed", failed_ids},
                        {"masterSeed", seed},
                        {"perception", perception->name()},
                        {"nmacFreq", frequency_json(nmac)},
                        {"alertFreq", frequency_json(alert)},
                        {"facets", facet_json}};
  {
    std::ofstream out(out_dir / "summary.json");
    out << summary.dump(2) << '\n';
  }

  Manifest manifest;
  manifest.command = "simulate";
  manifest.inputs = {enc_dir.string(), policy_path};
  manifest.outputs = {(out_dir / "results.jsonl").string(),
                      (out_dir / "summary.json").string()};
  manifest.details = {{"n", batch.results.size()},
                      {"failed", failed_ids.size()},
                      {"perception", perception->name()},
                      {"workers", workers},
                      {"nmacFreq", nmac.value},
                      {"alertFreq", alert.value}};
  manifest.write(out_dir / "manifest.json", cfg, seed);

  std::printf("%zu encounters (%zu failed): nmac_freq %.3f +/- %.3f, alert_freq %.3f\n",
              batch.results.size(), failed_ids.size(), nmac.value, nmac.se,
              alert.value);
  return 0;
}

// ---- eval --------------------------------------------------------------------

int cmd_eval(const ToolConfig& cfg, std::uint64_t seed, const fs::path& labels_dir,
             const fs::path& preds_dir, const std::string& facet_spec,
             const EvalSettings& settings, bool strict, const fs::path& out_dir) {
  if (!fs::is_directory(labels_dir)) {
    throw UsageError("label directory not found: " + labels_dir.string());
  }
  if (!fs::is_directory(preds_dir)) {
    throw UsageError("prediction directory not found: " + preds_dir.string());
  }
  ensure_dir(out_dir);

  auto read_file = [](const fs::path& p) {
    std::ifstream in(p);
    return std::string((std::istreambuf_iterator<char>(in)),
                       std::istreambuf_iterator<char>());
  };

  std::vector<fs::path> label_files;
  for (const auto& entry : fs::directory_iterator(labels_dir)) {
    if (entry.path().extension() == ".txt") label_files.push_back(entry.path());
  }
  std::sort(label_files.begin(), label_files.end());

  std::vector<DetectionRecord> records;
  std::vector<std::string> unmatched;
  for (const auto& label_path : label_files) {
    const std::string stem = label_path.stem().string();
    const fs::path meta_path = labels_dir / (stem + ".json");
    if (!fs::exists(meta_path)) {
      throw std::runtime_error("missing metadata beside label: " + meta_path.string());
    }
    DetectionRecord rec;
    const ImageMetadata meta = parse_metadata(read_file(meta_path));
    rec.conditions = meta.conditions;
    rec.intruder_range = meta.intruder_range;
    rec.vertical_offset = meta.intruder_vertical_offset;
    for (const auto& label : parse_yolo_labels(read_file(label_path))) {
      rec.det.gts.push_back(to_bounding_box(label));
    }
    const fs::path pred_path = preds_dir / (stem + ".txt");
    if (fs::exists(pred_path)) {
      for (const auto& pred : parse_yolo_predictions(read_file(pred_path))) {
        rec.det.preds.push_back(to_bounding_box(pred.box, pred.confidence));
      }
    } else {
      unmatched.push_back(stem);
    }
    records.push_back(std::move(rec));
  }
  if (records.empty()) throw UsageError("no label files in " + labels_dir.string());
  if (!unmatched.empty()) {
    std::fprintf(stderr, "%zu label stems have no prediction file:\n",
                 unmatched.size());
    for (const auto& s : unmatched) std::fprintf(stderr, "  %s\n", s.c_str());
    if (strict) throw std::runtime_error("unmatched stems in strict mode");
  }

  const std::vector<Facet> all_facets = {
      Facet::All,       Facet::Weather,     Facet::Region,          Facet::AircraftType,
      Facet::TimeOfDay, Facet::RangeBucket, Facet::RelativeAltitude};
  const auto facets = parse_facet_list(facet_spec, all_facets);

  Manifest manifest;
  manifest.command = "eval";
  manifest.inputs = {labels_dir.string(), preds_dir.string()};
  for (const Facet f : facets) {
    const auto reports = slice_detection(records, f, settings);
    const std::string base = std::string("report_") + facet_name(f);
    {
      std::ofstream csv(out_dir / (base + ".csv"));
      write_report_csv(reports, csv);
    }
    {
      std::ofstream md(out_dir / (base + ".md"));
      write_report_markdown(reports, md);
    }
    {
      std::ofstream plot(out_dir / (base + ".json"));
      plot << report_plot_data(f, reports).dump(2) << '\n';
    }
    manifest.outputs.push_back((out_dir / (base + ".csv")).string());
  }
  manifest.details = {{"images", records.size()},
                      {"unmatched", unmatched.size()},
                      {"iouThreshold", settings.iou_threshold},
                      {"confThreshold", settings.conf_threshold}};
  manifest.write(out_dir / "manifest.json", cfg, seed);
  std::printf("evaluated %zu images across %zu facets -> %s\n", records.size(),
              facets.size(), out_dir.string().c_str());
  return 0;
}

// ---- report ------------------------------------------------------------------

int cmd_report(const ToolConfig& cfg, std::uint64_t seed,
               const std::vector<std::string>& inputs, const std::string& labels_csv,
               const std::string& format, const fs::path& out_dir) {
  if (inputs.empty()) throw UsageError("report needs at least one --inputs file");
  ensure_dir(out_dir);

  std::vector<std::string> labels;
  if (!labels_csv.empty()) {
    std::stringstream ss(labels_csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) labels.push_back(tok);
    if (labels.size() != inputs.size()) {
      throw UsageError("--labels must match --inputs in count");
    }
  } else {
    for (std::size_t i = 0; i < inputs.size(); ++i) {
      labels.push_back("run" + std::to_string(i));
    }
  }

  std::vector<json> summaries;
  for (const auto& path : inputs) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open summary " + path);
    json j;
    in >> j;
    summaries.push_back(std::move(j));
  }

  std::vector<std::string> facet_names;
  for (const auto& [key, value] : summaries[0].at("facets").items()) {
    facet_names.push_back(key);
  }
  for (const auto& s : summaries) {
    std::vector<std::string> names;
    for (const auto& [key, value] : s.at("facets").items()) names.push_back(key);
    if (names != facet_names) {
      throw std::runtime_error("facet sets differ across summary inputs");
    }
  }

  for (const auto& facet : facet_names) {
    std::ofstream csv;
    std::ofstream md;
    if (format == "csv" || format == "both") {
      csv.open(out_dir / ("comparison_" + facet + ".csv"));
      csv << "value,n";
      for (const auto& l : labels) {
        csv << ",nmacFreq_" << l << ",se_" << l << ",alertFreq_" << l;
      }
      csv << '\n';
    }
    if (format == "md" || format == "both") {
      md.open(out_dir / ("comparison_" + facet + ".md"));
      md << "| value | n |";
      for (const auto& l : labels) {
        md << " nmacFreq(" << l << ") | alertFreq(" << l << ") |";
      }
      md << "\n|---|---|";
      for (std::size_t i = 0; i < labels.size(); ++i) md << "---|---|";
      md << '\n';
    }

    const json& base_rows = summaries[0]["facets"][facet];
    for (std::size_t row = 0; row < base_rows.size(); ++row) {
      const std::string value = base_rows[row].at("value").get<std::string>();
      const long n = base_rows[row].at("n").get<long>();
      if (csv.is_open()) csv << value << ',' << n;
      if (md.is_open()) md << "| " << value << " | " << n << " |";
      for (const auto& s : summaries) {
        const json& rows = s["facets"][facet];
        if (row >= rows.size() || rows[row].at("value") != value) {
          throw std::runtime_error("slice keys differ across summary inputs");
        }
        const json& metrics = rows[row].at("metrics");
        double nmac = 0.0, alert = 0.0, se = 0.0;
        if (metrics.contains("nmacFreq")) {
          nmac = metrics["nmacFreq"]["value"].get<double>();
          const long rn = rows[row].at("n").get<long>();
          se = rn > 0 ? std::sqrt(nmac * (1.0 - nmac) / double(rn)) : 0.0;
        }
        if (metrics.contains("alertFreq")) {
          alert = metrics["alertFreq"]["value"].get<double>();
        }
        if (csv.is_open()) csv << ',' << nmac << ',' << se << ',' << alert;
        if (md.is_open()) md << ' ' << nmac << " +/- " << se << " | " << alert << " |";
      }
      if (csv.is_open()) csv << '\n';
      if (md.is_open()) md << '\n';
    }
  }

  Manifest manifest;
  manifest.command = "report";
  manifest.inputs = inputs;
  manifest.outputs = {out_dir.string()};
  manifest.details = {{"facets", facet_names}, {"columns", labels}};
  manifest.write(out_dir / "manifest.json", cfg, seed);
  std::printf("compared %zu summaries across %zu facets -> %s\n", summaries.size(),
              facet_names.size(), out_dir.string().c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Closed-loop detect-and-avoid simulation and evaluation toolkit"};
  app.require_subcommand(1);
  app.fallthrough();  // global --seed/--config/--workers may follow the subcommand
  app.set_version_flag("--version", kToolVersion);

  std::string config_path;
  std::uint64_t seed = 0;
  int workers = 0;
  app.add_option("--config", config_path, "JSON config file overriding defaults");
  app.add_option("--seed", seed, "master seed");
  app.add_option("--workers", workers, "worker threads (default: all cores)");

  auto* generate = app.add_subcommand("generate", "sample encounters or datasets");
  generate->require_subcommand(1);
  auto* gen_enc = generate->add_subcommand("encounters", "sample encounter files");
  long gen_n = 100;
  std::string gen_grid = "iid";
  long per_cell = 0;
  std::string gen_out;
  gen_enc->add_option("--n", gen_n, "number of encounters");
  gen_enc->add_option("--grid", gen_grid, "iid or factorial over 288 condition cells");
  gen_enc->add_option("--per-cell", per_cell, "encounters per factorial cell");
  gen_enc->add_option("--out", gen_out, "output directory")->required();

  auto* gen_data = generate->add_subcommand("dataset", "generate labels + metadata");
  long data_n = 72;
  std::string data_out;
  gen_data->add_option("--n", data_n, "number of samples");
  gen_data->add_option("--out", data_out, "output directory")->required();

  auto* solve = app.add_subcommand("solve", "solve the avoidance MDP offline");
  std::string solve_out, solve_csv, solve_simd;
  double tolerance = -1.0;
  int max_iterations = 0;
  solve->add_option("--out", solve_out, "policy file path")->required();
  solve->add_option("--tolerance", tolerance, "convergence tolerance");
  solve->add_option("--max-iterations", max_iterations, "iteration cap");
  solve->add_option("--simd", solve_simd, "kernel variant: auto|scalar|avx2");
  solve->add_option("--csv", solve_csv, "also export the Q table as CSV");

  auto* simulate = app.add_subcommand("simulate", "run a batch through the loop");
  std::string sim_enc, sim_policy, sim_perception, sim_detector, sim_facets, sim_out;
  double sim_scale = 1.0;
  bool sim_no_steps = false, sim_fail_fast = false;
  simulate->add_option("--encounters", sim_enc, "encounter directory")->required();
  simulate->add_option("--policy", sim_policy, "solved policy file")->required();
  simulate->add_option("--perception", sim_perception,
                       "blind|perfect|stochastic|boxgeom|external");
  simulate->add_option("--scale", sim_scale, "stochastic probability scale");
  simulate->add_option("--detector", sim_detector,
                       "external detector endpoint (command or tcp://host:port)");
  simulate->add_option("--facets", sim_facets, "comma-separated summary facets");
  simulate->add_flag("--no-steps", sim_no_steps, "omit per-step records");
  simulate->add_flag("--fail-fast", sim_fail_fast, "abort on first failure");
  simulate->add_option("--out", sim_out, "output directory")->required();

  auto* eval = app.add_subcommand("eval", "detection metrics over label dirs");
  std::string eval_labels, eval_preds, eval_facets, eval_out, eval_interp;
  double eval_conf = 0.25, eval_iou = 0.5;
  bool eval_strict = false, eval_coco = false;
  eval->add_option("--labels", eval_labels, "ground-truth label directory")->required();
  eval->add_option("--preds", eval_preds, "prediction directory")->required();
  eval->add_option("--facet", eval_facets, "comma-separated facets (default: all)");
  eval->add_option("--conf", eval_conf, "confidence threshold for precision/recall");
  eval->add_option("--iou", eval_iou, "IoU threshold");
  eval->add_option("--interp", eval_interp, "AP interpolation: allpoint|101");
  eval->add_flag("--coco", eval_coco, "average AP over IoU 0.50:0.05:0.95");
  eval->add_flag("--strict", eval_strict, "abort on unmatched stems");
  eval->add_option("--out", eval_out, "output directory")->required();

  auto* report = app.add_subcommand("report", "merge batch summaries side by side");
  std::vector<std::string> report_inputs;
  std::string report_labels, report_format = "both", report_out;
  report->add_option("--inputs", report_inputs, "summary.json files")->required();
  report->add_option("--labels", report_labels, "comma-separated column labels");
  report->add_option("--format", report_format, "csv|md|both");
  report->add_option("--out", report_out, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;  // usage errors are exit 1 regardless of CLI11's own codes
  }

  try {
    ToolConfig cfg = resolve_config(config_path);
    if (workers > 0) cfg.solve.workers = workers;

    if (gen_enc->parsed()) {
      return cmd_generate_encounters(cfg, seed, gen_n, gen_grid, per_cell, gen_out);
    }
    if (gen_data->parsed()) {
      return cmd_generate_dataset(cfg, seed, data_n, data_out);
    }
    if (solve->parsed()) {
      if (tolerance >= 0.0) {
        if (tolerance == 0.0) throw UsageError("--tolerance must be positive");
        cfg.solve.tolerance = tolerance;
      }
      if (max_iterations > 0) cfg.solve.max_iterations = max_iterations;
      if (!solve_simd.empty()) {
        const auto simd = kernels::parse_simd(solve_simd);
        if (!simd) throw UsageError("--simd must be auto|scalar|avx2");
        cfg.solve.simd = *simd;
      }
      return cmd_solve(cfg, seed, solve_out, solve_csv);
    }
    if (simulate->parsed()) {
      return cmd_simulate(cfg, seed, sim_enc, sim_policy, sim_perception, sim_scale,
                          sim_detector, sim_facets, sim_no_steps, sim_fail_fast,
                          workers, sim_out);
    }
    if (eval->parsed()) {
      EvalSettings settings;
      settings.conf_threshold = eval_conf;
      settings.iou_threshold = eval_iou;
      settings.ap.iou_threshold = eval_iou;
      settings.ap.coco_style = eval_coco;
      if (eval_interp == "101") {
        settings.ap.interp = ApInterp::Points101;
      } else if (!eval_interp.empty() && eval_interp != "allpoint") {
        throw UsageError("--interp must be allpoint or 101");
      }
      if (!(eval_iou > 0.0) || eval_iou > 1.0) {
        throw UsageError("--iou must lie in (0, 1]");
      }
      return cmd_eval(cfg, seed, eval_labels, eval_preds, eval_facets, settings,
                      eval_strict, eval_out);
    }
    if (report->parsed()) {
      if (report_format != "csv" && report_format != "md" && report_format != "both") {
        throw UsageError("--format must be csv, md, or both");
      }
      return cmd_report(cfg, seed, report_inputs, report_labels, report_format,
                        report_out);
    }
  } catch (const UsageError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 1;
}
