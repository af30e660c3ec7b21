/*
 * Copyright 2026 The Leakbench Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "leakbench/report.h"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "leakbench/common.h"

namespace leakbench {
namespace {

using nlohmann::json;

json metric_value(const Metric& m) { return m ? json(*m) : json(nullptr); }

Metric metric_from(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

json points_to_json(const std::vector<CurvePoint>& pts) {
  json arr = json::array();
  for (const CurvePoint& p : pts) arr.push_back({p.x, p.y});
  return arr;
}

std::vector<CurvePoint> points_from(const json& j) {
  std::vector<CurvePoint> pts;
  for (const auto& p : j) pts.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
  return pts;
}

std::string fmt(const std::optional<double>& v, const char* spec = "%.4f") {
  if (!v) return "n/a";
  char buf[48];
  std::snprintf(buf, sizeof(buf), spec, *v);
  return buf;
}

std::string fmt_csv(const std::optional<double>& v) { return fmt(v, "%.10g"); }

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open for writing: " + path.string());
  out << text;
  if (!out) throw Error("write failed: " + path.string());
}

json cell_to_json(const CellResult& c) {
  json j;
  j["key"] = c.key.str();
  j["hidden"] = c.key.hidden;
  j["protocol"] = std::string(to_string(c.key.protocol));
  j["seed"] = c.key.seed;
  j["ok"] = c.ok;
  j["error"] = c.ok ? json(nullptr) : json(c.error);
  const ConfusionMatrix& cm = c.metrics.confusion;
  j["confusion"] = {{"tp", cm.tp}, {"tn", cm.tn}, {"fp", cm.fp}, {"fn", cm.fn}};
  const ScalarMetrics& s = c.metrics.scalars;
  j["metrics"] = {{"accuracy", metric_value(s.accuracy)},
                  {"precision", metric_value(s.precision)},
                  {"recall", metric_value(s.recall)},
                  {"specificity", metric_value(s.specificity)},
                  {"f1", metric_value(s.f1)}};
  j["roc"] = c.metrics.roc ? json{{"auc", c.metrics.roc->auc},
                                  {"points", points_to_json(c.metrics.roc->points)}}
                           : json(nullptr);
  j["prc"] = c.metrics.prc
                 ? json{{"average_precision", c.metrics.prc->average_precision},
                        {"points", points_to_json(c.metrics.prc->points)}}
                 : json(nullptr);
  const ContaminationReport& k = c.contamination;
  j["contamination"] = {
      {"n_test_rows", k.n_test_rows},
      {"n_synthetic_in_test", k.n_synthetic_in_test},
      {"n_synthetic_in_test_with_parent_in_train", k.n_synthetic_in_test_with_parent_in_train},
      {"n_exact_duplicates_across_split", k.n_exact_duplicates_across_split},
      {"leak_flag", k.leak_flag}};
  j["history"] = c.history;
  j["n_train"] = c.n_train;
  j["n_synthetic"] = c.n_synthetic;
  j["n_removed"] = c.n_removed;
  j["resample_warnings"] = c.resample_warnings;
  j["findings"] = c.findings;
  j[kWallTimeKey] = c.wall_time_s;
  return j;
}

CellResult cell_from_json(const json& j) {
  CellResult c;
  c.key.hidden = j.at("hidden").get<std::size_t>();
  c.key.protocol = ordering_from_string(j.at("protocol").get<std::string>());
  c.key.seed = j.at("seed").get<std::uint64_t>();
  c.ok = j.at("ok").get<bool>();
  if (!j.at("error").is_null()) c.error = j.at("error").get<std::string>();
  const json& cm = j.at("confusion");
  c.metrics.confusion = {cm.at("tp").get<std::uint64_t>(), cm.at("tn").get<std::uint64_t>(),
                         cm.at("fp").get<std::uint64_t>(), cm.at("fn").get<std::uint64_t>()};
  const json& m = j.at("metrics");
  c.metrics.scalars = {metric_from(m.at("accuracy")), metric_from(m.at("precision")),
                       metric_from(m.at("recall")), metric_from(m.at("specificity")),
                       metric_from(m.at("f1"))};
  if (!j.at("roc").is_null()) {
    c.metrics.roc = RocCurve{points_from(j.at("roc").at("points")),
                             j.at("roc").at("auc").get<double>()};
  }
  if (!j.at("prc").is_null()) {
    c.metrics.prc = PrCurve{points_from(j.at("prc").at("points")),
                            j.at("prc").at("average_precision").get<double>()};
  }
  const json& k = j.at("contamination");
  c.contamination = {k.at("n_test_rows").get<std::size_t>(),
                     k.at("n_synthetic_in_test").get<std::size_t>(),
                     k.at("n_synthetic_in_test_with_parent_in_train").get<std::size_t>(),
                     k.at("n_exact_duplicates_across_split").get<std::size_t>(),
                     k.at("leak_flag").get<bool>()};
  c.history = j.at("history").get<std::vector<double>>();
  c.n_train = j.at("n_train").get<std::size_t>();
  c.n_synthetic = j.at("n_synthetic").get<std::size_t>();
  c.n_removed = j.at("n_removed").get<std::size_t>();
  c.resample_warnings = j.at("resample_warnings").get<std::vector<std::string>>();
  c.findings = j.at("findings").get<std::vector<std::string>>();
  c.wall_time_s = j.value(kWallTimeKey, 0.0);
  return c;
}

// Hidden widths that have both a leaky and a clean aggregate.
std::vector<std::size_t> paired_widths(const GridReport& r) {
  std::vector<std::size_t> out;
  for (const Aggregate& a : r.aggregates) {
    if (a.protocol != Ordering::kLeaky) continue;
    if (r.find(a.hidden, Ordering::kClean)) out.push_back(a.hidden);
  }
  return out;
}

std::optional<double> median_of(const GridReport& r, std::size_t n, Ordering o,
                                const std::string& metric) {
  const Aggregate* a = r.find(n, o);
  if (!a) return std::nullopt;
  return a->metrics.at(metric).median;
}

std::optional<std::vector<Deviation>> try_compare(const GridReport& r) {
  for (const Table1Row& row : table1_reference()) {
    const Aggregate* a = r.find(row.hidden, Ordering::kLeaky);
    if (!a || a->n_cells == 0) return std::nullopt;
  }
  return compare_to_table1(r);
}

json deviations_to_json(const std::vector<Deviation>& devs) {
  json arr = json::array();
  for (const Deviation& d : devs) {
    arr.push_back({{"hidden", d.hidden},
                   {"metric", d.metric},
                   {"reference", d.reference},
                   {"observed", metric_value(d.observed)},
                   {"deviation", metric_value(d.deviation)},
                   {"flagged", d.flagged}});
  }
  return arr;
}

}  // namespace

json report_to_json(const GridReport& r) {
  json j;
  j["format"] = "leakbench-report/1";
  j["config"] = r.config_echo;
  j["dataset"] = {{"description", r.dataset_description},
                  {"rows", r.dataset_rows},
                  {"positives", r.dataset_positives},
                  {"features", r.dataset_features}};
  j["test_fraction"] = r.test_fraction;
  json cells = json::array();
  for (const CellResult& c : r.cells) cells.push_back(cell_to_json(c));
  j["cells"] = cells;

  json aggs = json::array();
  for (const Aggregate& a : r.aggregates) {
    json metrics;
    for (const auto& [name, s] : a.metrics) {
      metrics[name] = {{"median", metric_value(s.median)},
                       {"min", metric_value(s.min)},
                       {"max", metric_value(s.max)},
                       {"n_defined", s.n_defined}};
    }
    aggs.push_back({{"hidden", a.hidden},
                    {"protocol", std::string(to_string(a.protocol))},
                    {"n_cells", a.n_cells},
                    {"n_failed", a.n_failed},
                    {"n_leak_flagged", a.n_leak_flagged},
                    {"metrics", metrics}});
  }
  j["aggregates"] = aggs;

  json gap = json::array();
  for (const std::size_t n : paired_widths(r)) {
    const auto leaky = median_of(r, n, Ordering::kLeaky, "f1");
    const auto clean = median_of(r, n, Ordering::kClean, "f1");
    std::optional<double> diff;
    if (leaky && clean) diff = *leaky - *clean;
    gap.push_back({{"hidden", n},
                   {"median_f1_leaky", metric_value(leaky)},
                   {"median_f1_clean", metric_value(clean)},
                   {"gap", metric_value(diff)}});
  }
  j["leakage_gap"] = gap;

  json ref = json::array();
  for (const Table1Row& row : table1_reference()) {
    ref.push_back({{"hidden", row.hidden},
                   {"accuracy", row.accuracy},
                   {"precision", row.precision},
                   {"recall", row.recall},
                   {"f1", row.f1}});
  }
  j["reference_table1"] = ref;
  const auto devs = try_compare(r);
  j["table1_deviation"] = devs ? deviations_to_json(*devs) : json(nullptr);
  j["notes"] = {
      {"average_precision",
       "step sum over descending score thresholds: sum_n (R_n - R_{n-1}) * P_n"},
      {"undefined_metrics", "null marks a metric whose denominator is zero"},
      {"median", "mean of the two middle values for even counts; undefined values skipped"}};
  return j;
}

GridReport report_from_json(const json& j) {
  try {
    GridReport r;
    r.config_echo = j.at("config");
    const json& ds = j.at("dataset");
    r.dataset_description = ds.at("description").get<std::string>();
    r.dataset_rows = ds.at("rows").get<std::size_t>();
    r.dataset_positives = ds.at("positives").get<std::size_t>();
    r.dataset_features = ds.at("features").get<std::size_t>();
    r.test_fraction = j.at("test_fraction").get<double>();
    for (const json& c : j.at("cells")) r.cells.push_back(cell_from_json(c));
    std::vector<std::size_t> widths;
    std::vector<Ordering> protocols;
    for (const json& a : j.at("aggregates")) {
      const auto n = a.at("hidden").get<std::size_t>();
      const auto o = ordering_from_string(a.at("protocol").get<std::string>());
      if (std::find(widths.begin(), widths.end(), n) == widths.end()) widths.push_back(n);
      if (std::find(protocols.begin(), protocols.end(), o) == protocols.end()) {
        protocols.push_back(o);
      }
    }
    r.aggregates = aggregate_cells(r.cells, widths, protocols);
    return r;
  } catch (const json::exception& e) {
    throw Error(std::string("report_from_json: malformed report: ") + e.what());
  }
}

json strip_wall_time(json j) {
  if (j.is_object()) {
    j.erase(kWallTimeKey);
    for (auto& [key, value] : j.items()) value = strip_wall_time(value);
  } else if (j.is_array()) {
    for (auto& value : j) value = strip_wall_time(value);
  }
  return j;
}

std::string cells_csv(const GridReport& r) {
  std::ostringstream out;
  out << "key,hidden,protocol,seed,ok,accuracy,precision,recall,specificity,f1,auc,"
         "average_precision,tp,tn,fp,fn,n_test_rows,n_synthetic_in_test,"
         "n_synthetic_in_test_with_parent_in_train,n_exact_duplicates_across_split,"
         "leak_flag,n_train,n_synthetic,n_removed,test_fraction,wall_time_s\n";
  for (const CellResult& c : r.cells) {
    const ScalarMetrics& s = c.metrics.scalars;
    const ConfusionMatrix& cm = c.metrics.confusion;
    const ContaminationReport& k = c.contamination;
    out << c.key.str() << ',' << c.key.hidden << ',' << to_string(c.key.protocol) << ','
        << c.key.seed << ',' << (c.ok ? "true" : "false") << ',' << fmt_csv(s.accuracy)
        << ',' << fmt_csv(s.precision) << ',' << fmt_csv(s.recall) << ','
        << fmt_csv(s.specificity) << ',' << fmt_csv(s.f1) << ','
        << fmt_csv(cell_metric(c, "auc")) << ',' << fmt_csv(cell_metric(c, "average_precision"))
        << ',' << cm.tp << ',' << cm.tn << ',' << cm.fp << ',' << cm.fn << ','
        << k.n_test_rows << ',' << k.n_synthetic_in_test << ','
        << k.n_synthetic_in_test_with_parent_in_train << ','
        << k.n_exact_duplicates_across_split << ',' << (k.leak_flag ? "true" : "false")
        << ',' << c.n_train << ',' << c.n_synthetic << ',' << c.n_removed << ','
        << fmt_csv(r.test_fraction) << ',' << fmt_csv(c.wall_time_s) << '\n';
  }
  return out.str();
}

std::string summary_markdown(const GridReport& r) {
  std::ostringstream md;
  md << "# Leakage benchmark summary\n\n";
  md << "- Dataset: " << r.dataset_description << " (" << r.dataset_rows << " rows, "
     << r.dataset_positives << " positive, " << r.dataset_features << " model inputs)\n";
  md << "- Test fraction: " << fmt(r.test_fraction, "%g") << "\n";
  if (r.config_echo.contains("split")) {
    md << "- Split: " << r.config_echo["split"]["strategy"].get<std::string>() << "\n";
  }
  if (r.config_echo.contains("resampler")) {
    md << "- Resampler: " << r.config_echo["resampler"]["method"].get<std::string>()
       << " (k=" << r.config_echo["resampler"]["k_neighbors"].get<std::size_t>() << ")\n";
  }
  if (r.config_echo.contains("scaler")) {
    md << "- Scaler: " << r.config_echo["scaler"]["method"].get<std::string>() << "\n";
  }
  if (r.config_echo.contains("seeds")) md << "- Seeds: " << r.config_echo["seeds"].dump() << "\n";
  md << "\nCells report medians over seeds; `n/a` marks an undefined metric.\n";

  for (const Ordering o : {Ordering::kLeaky, Ordering::kClean}) {
    std::vector<const Aggregate*> rows;
    for (const Aggregate& a : r.aggregates) {
      if (a.protocol == o) rows.push_back(&a);
    }
    if (rows.empty()) continue;
    md << "\n## Protocol: " << to_string(o) << "\n\n";
    md << "| No. | N | Accuracy | Precision | Recall | F1 | AUC | AP | Leak-flagged |\n";
    md << "|---|---|---|---|---|---|---|---|---|\n";
    std::size_t no = 1;
    for (const Aggregate* a : rows) {
      md << "| " << no++ << " | " << a->hidden << " | "
         << fmt(a->metrics.at("accuracy").median) << " | "
         << fmt(a->metrics.at("precision").median) << " | "
         << fmt(a->metrics.at("recall").median) << " | " << fmt(a->metrics.at("f1").median)
         << " | " << fmt(a->metrics.at("auc").median) << " | "
         << fmt(a->metrics.at("average_precision").median) << " | " << a->n_leak_flagged
         << "/" << a->n_cells << " |\n";
    }
  }

  const auto widths = paired_widths(r);
  if (!widths.empty()) {
    md << "\n## Leakage gap\n\nMedian F1 under the leaky ordering minus the clean "
          "ordering, same model and seeds.\n\n";
    md << "| N | F1 leaky | F1 clean | Gap |\n|---|---|---|---|\n";
    for (const std::size_t n : widths) {
      const auto leaky = median_of(r, n, Ordering::kLeaky, "f1");
      const auto clean = median_of(r, n, Ordering::kClean, "f1");
      std::optional<double> gap;
      if (leaky && clean) gap = *leaky - *clean;
      md << "| " << n << " | " << fmt(leaky) << " | " << fmt(clean) << " | "
         << fmt(gap, "%+.4f") << " |\n";
    }
  }

  if (const auto devs = try_compare(r)) {
    md << "\n## Reference comparison (leaky medians)\n\n";
    md << "| N | Metric | Reference | Observed | Deviation | Within "
       << fmt(kTable1Tolerance, "%g") << " |\n|---|---|---|---|---|---|\n";
    std::size_t within = 0;
    for (const Deviation& d : *devs) {
      if (!d.flagged) ++within;
      md << "| " << d.hidden << " | " << d.metric << " | " << fmt(d.reference, "%.3f")
         << " | " << fmt(d.observed) << " | " << fmt(d.deviation) << " | "
         << (d.flagged ? "no" : "yes") << " |\n";
    }
    md << "\n" << within << " of " << devs->size() << " cells within tolerance.\n";
  }

  md << "\n---\nAverage precision is the step sum over descending score thresholds, "
        "sum (R_n - R_{n-1}) * P_n, not a trapezoidal area.\n";
  return md.str();
}

std::string curve_csv(const std::vector<CurvePoint>& points, const std::string& x_name,
                      const std::string& y_name) {
  std::ostringstream out;
  out << x_name << ',' << y_name << '\n';
  char buf[64];
  for (const CurvePoint& p : points) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", p.x, p.y);
    out << buf;
  }
  return out.str();
}

std::string curve_svg(const std::vector<CurvePoint>& points, const std::string& title,
                      const std::string& x_label, const std::string& y_label,
                      bool diagonal) {
  constexpr double kSize = 420.0;
  constexpr double kLeft = 60.0;
  constexpr double kTop = 40.0;
  constexpr double kPlot = 320.0;
  const auto px = [&](double x) { return kLeft + x * kPlot; };
  const auto py = [&](double y) { return kTop + (1.0 - y) * kPlot; };
  char buf[160];
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kSize << "\" height=\""
      << kSize << "\" viewBox=\"0 0 " << kSize << ' ' << kSize << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << kSize / 2 << "\" y=\"24\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"14\">"
      << title << "</text>\n";
  std::snprintf(buf, sizeof(buf),
                "<rect x=\"%g\" y=\"%g\" width=\"%g\" height=\"%g\" fill=\"none\" "
                "stroke=\"black\"/>\n",
                kLeft, kTop, kPlot, kPlot);
  svg << buf;
  for (const double t : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    std::snprintf(buf, sizeof(buf),
                  "<text x=\"%g\" y=\"%g\" text-anchor=\"middle\" font-family=\"sans-serif\" "
                  "font-size=\"10\">%g</text>\n",
                  px(t), kTop + kPlot + 14.0, t);
    svg << buf;
    std::snprintf(buf, sizeof(buf),
                  "<text x=\"%g\" y=\"%g\" text-anchor=\"end\" font-family=\"sans-serif\" "
                  "font-size=\"10\">%g</text>\n",
                  kLeft - 6.0, py(t) + 3.0, t);
    svg << buf;
  }
  svg << "<text x=\"" << px(0.5) << "\" y=\"" << kTop + kPlot + 34.0
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" << x_label
      << "</text>\n";
  svg << "<text x=\"16\" y=\"" << py(0.5) << "\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"12\" transform=\"rotate(-90 16 " << py(0.5)
      << ")\">" << y_label << "</text>\n";
  if (diagonal) {
    std::snprintf(buf, sizeof(buf),
                  "<line x1=\"%g\" y1=\"%g\" x2=\"%g\" y2=\"%g\" stroke=\"gray\" "
                  "stroke-dasharray=\"4 4\"/>\n",
                  px(0), py(0), px(1), py(1));
    svg << buf;
  }
  svg << "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"2\" points=\"";
  for (const CurvePoint& p : points) {
    std::snprintf(buf, sizeof(buf), "%.3f,%.3f ", px(p.x), py(p.y));
    svg << buf;
  }
  svg << "\"/>\n</svg>\n";
  return svg.str();
}

std::vector<std::filesystem::path> write_curve_files(
    const CellResult& cell, const std::filesystem::path& out_dir,
    std::span<const std::string> formats) {
  const auto wants = [&](const char* f) {
    return std::find(formats.begin(), formats.end(), f) != formats.end();
  };
  std::vector<std::filesystem::path> written;
  if (!cell.ok || (!wants("csv") && !wants("svg"))) return written;
  const std::filesystem::path dir = out_dir / "curves";
  std::filesystem::create_directories(dir);
  const std::string key = cell.key.str();
  if (cell.metrics.prc) {
    const auto& pts = cell.metrics.prc->points;
    if (wants("csv")) {
      written.push_back(dir / (key + "_prc.csv"));
      write_file(written.back(), curve_csv(pts, "recall", "precision"));
    }
    if (wants("svg")) {
      written.push_back(dir / (key + "_prc.svg"));
      write_file(written.back(),
                 curve_svg(pts, "PRC " + key + " (AP " + fmt(cell.metrics.prc->average_precision) + ")",
                           "Recall", "Precision", false));
    }
  }
  if (cell.metrics.roc) {
    const auto& pts = cell.metrics.roc->points;
    if (wants("csv")) {
      written.push_back(dir / (key + "_roc.csv"));
      write_file(written.back(), curve_csv(pts, "fpr", "tpr"));
    }
    if (wants("svg")) {
      written.push_back(dir / (key + "_roc.svg"));
      write_file(written.back(),
                 curve_svg(pts, "ROC " + key + " (AUC " + fmt(cell.metrics.roc->auc) + ")",
                           "False positive rate", "True positive rate", true));
    }
  }
  return written;
}

std::vector<std::filesystem::path> emit_report(const GridReport& report,
                                               const std::filesystem::path& out_dir,
                                               std::span<const std::string> formats) {
  const auto wants = [&](const char* f) {
    return std::find(formats.begin(), formats.end(), f) != formats.end();
  };
  std::vector<std::filesystem::path> written;
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error("cannot create output directory " + out_dir.string() + ": " + ec.message());
  if (wants("json")) {
    written.push_back(out_dir / "report.json");
    write_file(written.back(), report_to_json(report).dump(1) + "\n");
  }
  if (wants("csv")) {
    written.push_back(out_dir / "cells.csv");
    write_file(written.back(), cells_csv(report));
  }
  if (wants("markdown")) {
    written.push_back(out_dir / "summary.md");
    write_file(written.back(), summary_markdown(report));
  }
  for (const CellResult& c : report.cells) {
    const auto files = write_curve_files(c, out_dir, formats);
    written.insert(written.end(), files.begin(), files.end());
  }
  return written;
}

}  // namespace leakbench
