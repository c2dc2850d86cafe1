// Copyright 2026 The Perio Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "perio/evaluation.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"
#include "perio/error.h"
#include "perio/random.h"

namespace perio {
namespace {

using Json = nlohmann::ordered_json;

constexpr double kStabilizationAllowance = 1e-12;

double Ratio(std::uint64_t num, std::uint64_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

std::string Fixed2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string Full(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string CsvField(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

Json PrfJson(const std::optional<Averages>& a, bool weighted) {
  if (!a) return nullptr;
  const Prf& p = weighted ? a->weighted : a->macro;
  return Json{{"p", p.precision}, {"r", p.recall}, {"f1", p.f1}};
}

std::string PadRight(std::string s, std::size_t width) {
  // Column widths count bytes; every label here is ASCII.
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

// Dimensions in canonical order that appear in any table.
std::vector<Dimension> DimensionsOf(std::span<const MetricsTable> tables) {
  std::set<Dimension> seen;
  for (const auto& t : tables) {
    for (const auto& d : t.dimensions) seen.insert(d.dimension);
  }
  return {seen.begin(), seen.end()};
}

const DimensionMetrics* Find(const MetricsTable& t, Dimension d) {
  for (const auto& dm : t.dimensions) {
    if (dm.dimension == d) return &dm;
  }
  return nullptr;
}

}  // namespace

std::array<ValuePair, 5> CompareNote(const std::optional<DiagnosisRecord>& gold,
                                     const std::optional<DiagnosisRecord>& pred) {
  std::array<ValuePair, 5> out;
  for (Dimension d : kAllDimensions) {
    auto& p = out[static_cast<std::size_t>(d)];
    if (gold) p.gold = gold->Get(d);
    if (pred) p.pred = pred->Get(d);
  }
  return out;
}

ConfusionMatrix ConfusionMatrix::ForDimension(Dimension d) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < ValueCount(d); ++i) {
    names.emplace_back(Name(LabelAt(d, i)));
  }
  ConfusionMatrix m(std::move(names));
  m.dimension_ = d;
  return m;
}

ConfusionMatrix::ConfusionMatrix(std::vector<std::string> value_classes)
    : names_(std::move(value_classes)) {
  names_.emplace_back(kNotApplicable);
  cells_.assign(names_.size() * names_.size(), 0);
}

std::size_t ConfusionMatrix::IndexOf(const std::optional<Label>& value) const {
  if (!value) return na_index();
  if (dimension_ && DimensionOf(*value) != *dimension_) {
    throw DataError("value of the wrong dimension for this matrix");
  }
  return Ordinal(*value);
}

std::uint64_t ConfusionMatrix::RowSum(std::size_t gold) const {
  std::uint64_t s = 0;
  for (std::size_t p = 0; p < size(); ++p) s += at(gold, p);
  return s;
}

std::uint64_t ConfusionMatrix::ColumnSum(std::size_t pred) const {
  std::uint64_t s = 0;
  for (std::size_t g = 0; g < size(); ++g) s += at(g, pred);
  return s;
}

std::uint64_t ConfusionMatrix::Total() const {
  std::uint64_t s = 0;
  for (std::uint64_t c : cells_) s += c;
  return s;
}

ConfusionMatrix BuildConfusion(Dimension d, std::span<const ValuePair> pairs) {
  ConfusionMatrix m = ConfusionMatrix::ForDimension(d);
  for (const ValuePair& p : pairs) m.Add(m.IndexOf(p.gold), m.IndexOf(p.pred));
  return m;
}

ClassMetrics ComputeClassMetrics(const ConfusionMatrix& matrix,
                                 std::size_t cls) {
  if (cls >= matrix.na_index()) {
    throw DataError("class metrics are not defined for N/A");
  }
  ClassMetrics m;
  m.name = matrix.class_names()[cls];
  m.tp = matrix.at(cls, cls);
  m.support = matrix.RowSum(cls);
  m.fp = matrix.ColumnSum(cls) - m.tp;
  m.fn = m.support - m.tp;
  m.precision = Ratio(m.tp, m.tp + m.fp);
  m.recall = Ratio(m.tp, m.tp + m.fn);
  const double sum = m.precision + m.recall;
  m.f1 = sum > 0.0 ? 2.0 * m.precision * m.recall / sum : 0.0;
  return m;
}

std::vector<ClassMetrics> ComputeAllClassMetrics(const ConfusionMatrix& matrix) {
  std::vector<ClassMetrics> out;
  for (std::size_t c = 0; c < matrix.na_index(); ++c) {
    out.push_back(ComputeClassMetrics(matrix, c));
  }
  return out;
}

std::optional<Averages> ComputeAverages(std::span<const ClassMetrics> classes) {
  Averages a;
  std::size_t counted = 0;
  std::uint64_t total_support = 0;
  for (const ClassMetrics& c : classes) {
    if (c.support == 0) continue;
    ++counted;
    total_support += c.support;
    a.macro.precision += c.precision;
    a.macro.recall += c.recall;
    a.macro.f1 += c.f1;
    const double w = static_cast<double>(c.support);
    a.weighted.precision += w * c.precision;
    a.weighted.recall += w * c.recall;
    a.weighted.f1 += w * c.f1;
  }
  if (counted == 0) return std::nullopt;
  const double n = static_cast<double>(counted);
  const double s = static_cast<double>(total_support);
  a.macro = {a.macro.precision / n, a.macro.recall / n, a.macro.f1 / n};
  a.weighted = {a.weighted.precision / s, a.weighted.recall / s,
                a.weighted.f1 / s};
  return a;
}

MetricsTable BuildMetricsTable(std::string site,
                               std::span<const RecordPair> notes) {
  MetricsTable table;
  table.site = std::move(site);
  for (Dimension d : kAllDimensions) {
    DimensionMetrics dm;
    dm.dimension = d;
    dm.matrix = ConfusionMatrix::ForDimension(d);
    for (const RecordPair& n : notes) {
      const ValuePair p = CompareNote(n.gold, n.pred)[static_cast<std::size_t>(d)];
      dm.matrix.Add(dm.matrix.IndexOf(p.gold), dm.matrix.IndexOf(p.pred));
    }
    dm.classes = ComputeAllClassMetrics(dm.matrix);
    dm.averages = ComputeAverages(dm.classes);
    table.dimensions.push_back(std::move(dm));
  }
  return table;
}

std::vector<AlignedNote> AlignCorpora(std::span<const AnnotatedNote> gold,
                                      std::span<const AnnotatedNote> pred) {
  std::map<std::string, const AnnotatedNote*> by_id;
  for (const auto& p : pred) by_id.emplace(p.note.note_id, &p);
  std::set<std::string> gold_ids;
  std::vector<std::string> missing_pred;
  std::vector<AlignedNote> out;
  for (const auto& g : gold) {
    gold_ids.insert(g.note.note_id);
    auto it = by_id.find(g.note.note_id);
    if (it == by_id.end()) {
      missing_pred.push_back(g.note.note_id);
      continue;
    }
    out.push_back({g.note.note_id, g.note.site_id, {g.record, it->second->record}});
  }
  std::vector<std::string> missing_gold;
  for (const auto& p : pred) {
    if (!gold_ids.count(p.note.note_id)) missing_gold.push_back(p.note.note_id);
  }
  if (missing_pred.empty() && missing_gold.empty()) return out;
  std::string msg = "gold and predicted note ids differ";
  auto list = [&](const char* what, const std::vector<std::string>& ids) {
    if (ids.empty()) return;
    msg += std::string("; ") + what + ":";
    for (std::size_t i = 0; i < ids.size() && i < 20; ++i) msg += " " + ids[i];
    if (ids.size() > 20) msg += " ... (" + std::to_string(ids.size()) + " total)";
  };
  list("missing from predictions", missing_pred);
  list("missing from gold", missing_gold);
  throw DataError(msg);
}

std::vector<MetricsTable> EvaluateBySite(std::span<const AlignedNote> notes) {
  std::map<std::string, std::vector<RecordPair>> by_site;
  std::vector<RecordPair> all;
  for (const auto& n : notes) {
    by_site[n.site_id].push_back(n.records);
    all.push_back(n.records);
  }
  std::vector<MetricsTable> out;
  for (const auto& [site, pairs] : by_site) {
    out.push_back(BuildMetricsTable(site, pairs));
  }
  if (by_site.size() > 1) out.push_back(BuildMetricsTable("All sites", all));
  return out;
}

std::optional<std::size_t> FindStabilization(std::span<const std::size_t> sizes,
                                             std::span<const double> values,
                                             double epsilon,
                                             std::size_t window) {
  if (sizes.size() != values.size()) {
    throw DataError("curve sizes and values differ in length");
  }
  for (std::size_t j = 0; j + window < values.size(); ++j) {
    bool stable = true;
    for (std::size_t k = 0; k < window && stable; ++k) {
      const double delta = std::fabs(values[j + k + 1] - values[j + k]);
      stable = delta < epsilon - kStabilizationAllowance;
    }
    if (stable) return sizes[j];
  }
  return std::nullopt;
}

LearningCurve ComputeLearningCurve(std::span<const RecordPair> pool,
                                   const CurveOptions& options) {
  if (options.step == 0) throw ConfigError("curve step must be positive");
  if (pool.size() < options.step) {
    throw DataError("learning curve needs at least " +
                    std::to_string(options.step) + " notes, got " +
                    std::to_string(pool.size()));
  }
  std::vector<RecordPair> order(pool.begin(), pool.end());
  Rng rng(options.seed);
  rng.Shuffle(&order);

  LearningCurve curve;
  curve.step = options.step;
  curve.dimension = options.dimension;
  std::vector<std::size_t> sizes;
  std::vector<double> values;
  bool complete = true;
  for (std::size_t n = options.step; n <= order.size(); n += options.step) {
    MetricsTable t = BuildMetricsTable(
        "", std::span<const RecordPair>(order.data(), n));
    CurvePoint point;
    point.size = n;
    for (const auto& dm : t.dimensions) {
      if (dm.averages) {
        point.weighted_f1[static_cast<std::size_t>(dm.dimension)] =
            dm.averages->weighted.f1;
      }
    }
    auto v = point.weighted_f1[static_cast<std::size_t>(options.dimension)];
    if (v) {
      sizes.push_back(n);
      values.push_back(*v);
    } else {
      complete = false;
    }
    curve.points.push_back(point);
  }
  // A prefix with no support for the dimension leaves a gap; deltas across
  // it are not meaningful.
  if (complete) {
    curve.stabilization_size =
        FindStabilization(sizes, values, options.epsilon, options.window);
  }
  return curve;
}

ReportFormat ParseReportFormat(std::string_view name) {
  if (name == "text") return ReportFormat::kText;
  if (name == "csv") return ReportFormat::kCsv;
  if (name == "json") return ReportFormat::kJson;
  throw ConfigError("unsupported report format \"" + std::string(name) +
                    "\" (expected text, csv or json)");
}

namespace {

std::string RenderText(std::span<const MetricsTable> tables) {
  constexpr std::size_t kDimWidth = 20;
  constexpr std::size_t kAvgWidth = 10;
  constexpr std::size_t kCell = 10;
  static constexpr std::array<const char*, 3> kMetrics = {"Precision", "Recall",
                                                          "F1-score"};
  std::ostringstream out;
  std::string line1 = PadRight("", kDimWidth + kAvgWidth);
  std::string line2 = PadRight("Dimension", kDimWidth) + PadRight("Average", kAvgWidth);
  for (const char* metric : kMetrics) {
    line1 += PadRight(metric, std::max<std::size_t>(kCell * tables.size(), 0));
    for (const auto& t : tables) line2 += PadRight(t.site, kCell);
  }
  auto rstrip = [](std::string s) {
    while (!s.empty() && s.back() == ' ') s.pop_back();
    return s;
  };
  if (!tables.empty()) out << rstrip(line1) << "\n";
  out << rstrip(line2) << "\n";
  for (Dimension d : DimensionsOf(tables)) {
    for (int weighted = 0; weighted < 2; ++weighted) {
      std::string row = PadRight(weighted ? "" : std::string(DimensionTitle(d)),
                                 kDimWidth) +
                        PadRight(weighted ? "Weighted" : "Macro", kAvgWidth);
      for (std::size_t m = 0; m < kMetrics.size(); ++m) {
        for (const auto& t : tables) {
          const DimensionMetrics* dm = Find(t, d);
          std::string cell = "-";
          if (dm && dm->averages) {
            const Prf& p = weighted ? dm->averages->weighted : dm->averages->macro;
            cell = Fixed2(m == 0 ? p.precision : m == 1 ? p.recall : p.f1);
          }
          row += PadRight(cell, kCell);
        }
      }
      while (!row.empty() && row.back() == ' ') row.pop_back();
      out << row << "\n";
    }
  }
  return out.str();
}

std::string RenderCsv(std::span<const MetricsTable> tables) {
  std::ostringstream out;
  out << "site,dimension,class,precision,recall,f1,support\r\n";
  for (const auto& t : tables) {
    for (const auto& dm : t.dimensions) {
      const std::string prefix =
          CsvField(t.site) + "," + std::string(DimensionKey(dm.dimension)) + ",";
      for (const auto& c : dm.classes) {
        out << prefix << CsvField(c.name) << "," << Full(c.precision) << ","
            << Full(c.recall) << "," << Full(c.f1) << "," << c.support << "\r\n";
      }
      for (int weighted = 0; weighted < 2; ++weighted) {
        out << prefix << (weighted ? "weighted" : "macro") << ",";
        if (dm.averages) {
          const Prf& p = weighted ? dm.averages->weighted : dm.averages->macro;
          out << Full(p.precision) << "," << Full(p.recall) << "," << Full(p.f1);
        } else {
          out << ",,";
        }
        out << ",\r\n";
      }
    }
  }
  return out.str();
}

std::string RenderJson(std::span<const MetricsTable> tables) {
  Json doc = Json::array();
  for (const auto& t : tables) {
    for (const auto& dm : t.dimensions) {
      Json classes = Json::array();
      for (const auto& c : dm.classes) {
        classes.push_back({{"class", c.name},
                           {"tp", c.tp},
                           {"fp", c.fp},
                           {"fn", c.fn},
                           {"support", c.support},
                           {"p", c.precision},
                           {"r", c.recall},
                           {"f1", c.f1}});
      }
      doc.push_back({{"site", t.site},
                     {"dimension", DimensionKey(dm.dimension)},
                     {"classes", std::move(classes)},
                     {"macro", PrfJson(dm.averages, false)},
                     {"weighted", PrfJson(dm.averages, true)}});
    }
  }
  return doc.dump(2) + "\n";
}

}  // namespace

std::string RenderReport(std::span<const MetricsTable> tables,
                         ReportFormat format) {
  switch (format) {
    case ReportFormat::kText:
      return RenderText(tables);
    case ReportFormat::kCsv:
      return RenderCsv(tables);
    case ReportFormat::kJson:
      return RenderJson(tables);
  }
  throw ConfigError("unsupported report format");
}

std::string RenderBarChartData(std::span<const MetricsTable> tables) {
  const std::vector<Dimension> dims = DimensionsOf(tables);
  Json groups = Json::array();
  for (Dimension d : dims) groups.push_back(DimensionTitle(d));
  Json series = Json::array();
  static constexpr std::array<const char*, 3> kMetrics = {"precision", "recall",
                                                          "f1"};
  for (const auto& t : tables) {
    for (std::size_t m = 0; m < kMetrics.size(); ++m) {
      Json values = Json::array();
      for (Dimension d : dims) {
        const DimensionMetrics* dm = Find(t, d);
        if (!dm || !dm->averages) {
          values.push_back(nullptr);
          continue;
        }
        const Prf& p = dm->averages->weighted;
        values.push_back(m == 0 ? p.precision : m == 1 ? p.recall : p.f1);
      }
      series.push_back({{"site", t.site},
                        {"metric", kMetrics[m]},
                        {"average", "weighted"},
                        {"values", std::move(values)}});
    }
  }
  Json doc = {{"chart", "grouped_bar"},
              {"groups", std::move(groups)},
              {"series", std::move(series)}};
  return doc.dump(2) + "\n";
}

std::string RenderConfusionData(std::span<const MetricsTable> tables) {
  Json doc = Json::array();
  for (const auto& t : tables) {
    for (const auto& dm : t.dimensions) {
      Json cells = Json::array();
      for (std::size_t g = 0; g < dm.matrix.size(); ++g) {
        Json row = Json::array();
        for (std::size_t p = 0; p < dm.matrix.size(); ++p) {
          row.push_back(dm.matrix.at(g, p));
        }
        cells.push_back(std::move(row));
      }
      doc.push_back({{"chart", "confusion_matrix"},
                     {"site", t.site},
                     {"dimension", DimensionKey(dm.dimension)},
                     {"classes", dm.matrix.class_names()},
                     {"rows", "gold"},
                     {"columns", "predicted"},
                     {"cells", std::move(cells)}});
    }
  }
  return doc.dump(2) + "\n";
}

std::string RenderCurveData(const LearningCurve& curve) {
  Json points = Json::array();
  for (const auto& p : curve.points) {
    Json f1 = Json::object();
    for (Dimension d : kAllDimensions) {
      const auto& v = p.weighted_f1[static_cast<std::size_t>(d)];
      f1[std::string(DimensionKey(d))] = v ? Json(*v) : Json(nullptr);
    }
    points.push_back({{"size", p.size}, {"weighted_f1", std::move(f1)}});
  }
  Json doc = {{"step", curve.step},
              {"dimension", DimensionKey(curve.dimension)},
              {"stabilization_size",
               curve.stabilization_size ? Json(*curve.stabilization_size)
                                        : Json(nullptr)},
              {"points", std::move(points)}};
  return doc.dump(2) + "\n";
}

}  // namespace perio
