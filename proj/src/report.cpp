#include <algorithm>
#include <ostream>

#include "daa/metrics.hpp"

namespace daa {

namespace {

// Union of metric names across slices, first-seen order.
std::vector<std::string> metric_columns(std::span<const SliceReport> reports) {
  std::vector<std::string> cols;
  for (const auto& r : reports) {
    for (const auto& m : r.metrics) {
      if (std::find(cols.begin(), cols.end(), m.name) == cols.end()) {
        cols.push_back(m.name);
      }
    }
  }
  return cols;
}

const SliceMetric* find_metric(const SliceReport& r, const std::string& name) {
  for (const auto& m : r.metrics) {
    if (m.name == name) return &m;
  }
  return nullptr;
}

}  // namespace

void write_report_csv(std::span<const SliceReport> reports, std::ostream& out) {
  const auto cols = metric_columns(reports);
  out << "facet,value,n";
  for (const auto& c : cols) out << ',' << c << ',' << c << "_se";
  out << '\n';
  for (const auto& r : reports) {
    out << facet_name(r.key.facet) << ',' << r.key.label() << ',' << r.n;
    for (const auto& c : cols) {
      const SliceMetric* m = find_metric(r, c);
      out << ',';
      if (m) out << m->value;
      out << ',';
      if (m && m->se) out << *m->se;
    }
    out << '\n';
  }
}

void write_report_markdown(std::span<const SliceReport> reports, std::ostream& out) {
  const auto cols = metric_columns(reports);
  out << "| facet | value | n |";
  for (const auto& c : cols) out << ' ' << c << " |";
  out << "\n|---|---|---|";
  for (std::size_t i = 0; i < cols.size(); ++i) out << "---|";
  out << '\n';
  for (const auto& r : reports) {
    out << "| " << facet_name(r.key.facet) << " | " << r.key.label() << " | " << r.n
        << " |";
    for (const auto& c : cols) {
      const SliceMetric* m = find_metric(r, c);
      out << ' ';
      if (m) {
        out << m->value;
        if (m->se) out << " +/- " << *m->se;
      } else {
        out << '-';
      }
      out << " |";
    }
    out << '\n';
  }
}

nlohmann::json report_plot_data(Facet facet, std::span<const SliceReport> reports) {
  nlohmann::json series = nlohmann::json::array();
  for (const auto& r : reports) {
    nlohmann::json metrics = nlohmann::json::object();
    for (const auto& m : r.metrics) {
      nlohmann::json entry = {{"value", m.value}};
      if (m.se) entry["se"] = *m.se;
      metrics[m.name] = entry;
    }
    series.push_back({{"value", r.key.label()}, {"n", r.n}, {"metrics", metrics}});
  }
  return {{"facet", facet_name(facet)}, {"series", series}};
}

}  // namespace daa
