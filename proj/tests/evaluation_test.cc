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

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

#include "gtest/gtest.h"
#include "json.hpp"
#include "perio/error.h"
#include "perio/evaluation.h"

namespace perio {
namespace {

constexpr double kTol = 1e-12;

DiagnosisRecord Perio(Stage s, Grade g, Extent e) {
  DiagnosisRecord r;
  r.status = PeriodontalStatus::kPeriodontitis;
  r.stage = s;
  r.grade = g;
  r.extent = e;
  return r;
}

TEST(CompareNoteTest, Examples) {
  const auto gold = Perio(Stage::kIII, Grade::kB, Extent::kGeneralized);
  for (const auto& p : CompareNote(gold, gold)) EXPECT_EQ(p.gold, p.pred);

  auto pred = gold;
  pred.extent = Extent::kLocalized;
  auto g2 = gold;
  g2.extent = Extent::kLocalized;
  const auto pairs = CompareNote(g2, Perio(Stage::kIII, Grade::kB, Extent::kGeneralized));
  EXPECT_EQ(pairs[static_cast<int>(Dimension::kExtent)],
            (ValuePair{Label(Extent::kLocalized), Label(Extent::kGeneralized)}));

  auto no_grade = gold;
  no_grade.grade.reset();
  EXPECT_EQ(CompareNote(no_grade, gold)[static_cast<int>(Dimension::kGrade)],
            (ValuePair{std::nullopt, Label(Grade::kB)}));
  EXPECT_EQ(CompareNote(std::nullopt, std::nullopt)[0], (ValuePair{}));
  EXPECT_EQ(CompareNote(gold, std::nullopt)[static_cast<int>(Dimension::kSubtype)],
            (ValuePair{}));
}

TEST(BuildConfusionTest, HandTally) {
  std::vector<ValuePair> pairs;
  for (int i = 0; i < 2; ++i) pairs.push_back({Extent::kLocalized, Extent::kGeneralized});
  for (int i = 0; i < 3; ++i) pairs.push_back({Extent::kGeneralized, Extent::kGeneralized});
  for (int i = 0; i < 5; ++i) pairs.push_back({});
  const auto m = BuildConfusion(Dimension::kExtent, pairs);
  ASSERT_EQ(m.class_names(), (std::vector<std::string>{"Localized", "Generalized", "N/A"}));
  EXPECT_EQ(m.at(0, 1), 2u);
  EXPECT_EQ(m.at(1, 1), 3u);
  EXPECT_EQ(m.at(2, 2), 5u);
  EXPECT_EQ(m.RowSum(0), 2u);
  EXPECT_EQ(m.RowSum(1), 3u);
  EXPECT_EQ(m.RowSum(2), 5u);
  EXPECT_EQ(m.Total(), 10u);
  EXPECT_EQ(m.at(0, 0) + m.at(1, 0) + m.at(0, 2), 0u);
}

TEST(BuildConfusionTest, DiagonalAndEmpty) {
  std::vector<ValuePair> pairs(10, ValuePair{Stage::kIII, Stage::kIII});
  const auto m = BuildConfusion(Dimension::kStage, pairs);
  for (std::size_t g = 0; g < m.size(); ++g) {
    for (std::size_t p = 0; p < m.size(); ++p) {
      EXPECT_EQ(m.at(g, p), g == 2 && p == 2 ? 10u : 0u);
    }
  }
  EXPECT_EQ(BuildConfusion(Dimension::kStage, {}).Total(), 0u);
  EXPECT_EQ(BuildConfusion(Dimension::kSubtype, {}).size(), 4u);
}

TEST(ClassMetricsTest, Arithmetic) {
  auto m = ConfusionMatrix::ForDimension(Dimension::kExtent);
  m.Add(0, 0, 8);  // TP for Localized.
  m.Add(1, 0, 2);  // FP.
  m.Add(0, 1, 1);  // FN.
  const ClassMetrics c = ComputeClassMetrics(m, 0);
  EXPECT_EQ(c.name, "Localized");
  EXPECT_EQ(c.tp, 8u);
  EXPECT_EQ(c.fp, 2u);
  EXPECT_EQ(c.fn, 1u);
  EXPECT_EQ(c.support, 9u);
  EXPECT_NEAR(c.precision, 0.8, kTol);
  EXPECT_NEAR(c.recall, 8.0 / 9.0, kTol);
  EXPECT_NEAR(c.f1, 16.0 / 19.0, kTol);
  EXPECT_NEAR(c.f1, 0.842, 5e-4);

  auto perfect = ConfusionMatrix::ForDimension(Dimension::kGrade);
  perfect.Add(1, 1, 5);
  const ClassMetrics p = ComputeClassMetrics(perfect, 1);
  EXPECT_EQ(p.precision, 1.0);
  EXPECT_EQ(p.recall, 1.0);
  EXPECT_EQ(p.f1, 1.0);

  const ClassMetrics empty = ComputeClassMetrics(perfect, 0);
  EXPECT_EQ(empty.precision, 0.0);
  EXPECT_EQ(empty.recall, 0.0);
  EXPECT_EQ(empty.f1, 0.0);
  EXPECT_EQ(empty.support, 0u);
}

ClassMetrics WithF1(double f1, std::uint64_t support) {
  ClassMetrics c;
  c.precision = c.recall = c.f1 = f1;
  c.support = support;
  return c;
}

TEST(AveragesTest, Examples) {
  std::vector<ClassMetrics> cs = {WithF1(1.0, 3), WithF1(0.5, 1)};
  auto a = ComputeAverages(cs);
  ASSERT_TRUE(a.has_value());
  EXPECT_NEAR(a->macro.f1, 0.75, kTol);
  EXPECT_NEAR(a->weighted.f1, 0.875, kTol);

  cs = {WithF1(0.3, 7)};
  a = ComputeAverages(cs);
  EXPECT_EQ(a->macro.f1, 0.3);
  EXPECT_EQ(a->weighted.f1, 0.3);

  // Zero-support classes are left out.
  cs = {WithF1(1.0, 3), WithF1(0.5, 1), WithF1(0.0, 0)};
  EXPECT_NEAR(ComputeAverages(cs)->macro.f1, 0.75, kTol);

  EXPECT_EQ(ComputeAverages({}), std::nullopt);
  cs = {WithF1(0.0, 0)};
  EXPECT_EQ(ComputeAverages(cs), std::nullopt);
}

TEST(AveragesTest, EqualSupportsGiveEqualAverages) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0, 1);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<ClassMetrics> cs;
    const int k = 1 + static_cast<int>(rng() % 5);
    for (int i = 0; i < k; ++i) {
      ClassMetrics c;
      c.precision = u(rng);
      c.recall = u(rng);
      c.f1 = u(rng);
      c.support = 4;
      cs.push_back(c);
    }
    const auto a = ComputeAverages(cs);
    EXPECT_NEAR(a->macro.precision, a->weighted.precision, kTol);
    EXPECT_NEAR(a->macro.f1, a->weighted.f1, kTol);
  }
}

// Recomputes everything from the raw pairs, never touching a matrix.
struct Oracle {
  std::vector<double> p, r, f1;
  std::vector<std::uint64_t> support;
};

Oracle BruteForce(Dimension d, const std::vector<ValuePair>& pairs) {
  Oracle o;
  const std::size_t k = ValueCount(d);
  for (std::size_t c = 0; c < k; ++c) {
    const Label cls = LabelAt(d, c);
    std::uint64_t tp = 0, fp = 0, fn = 0, sup = 0;
    for (const auto& pr : pairs) {
      const bool g = pr.gold == cls;
      const bool p = pr.pred == cls;
      tp += g && p;
      fp += !g && p;
      fn += g && !p;
      sup += g;
    }
    const double prec = tp + fp ? double(tp) / double(tp + fp) : 0.0;
    const double rec = tp + fn ? double(tp) / double(tp + fn) : 0.0;
    o.p.push_back(prec);
    o.r.push_back(rec);
    o.f1.push_back(prec + rec > 0 ? 2 * prec * rec / (prec + rec) : 0.0);
    o.support.push_back(sup);
  }
  return o;
}

std::optional<Label> RandomValue(Dimension d, std::mt19937_64& rng) {
  const std::size_t k = ValueCount(d);
  const std::size_t i = rng() % (k + 1);
  if (i == k) return std::nullopt;
  return LabelAt(d, i);
}

TEST(MetricsOracleTest, RandomMatricesMatchBruteForce) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 1000; ++trial) {
    const Dimension d = kAllDimensions[trial % 5];
    std::vector<ValuePair> pairs(rng() % 60);
    for (auto& p : pairs) {
      p.gold = RandomValue(d, rng);
      // Bias towards agreement so that every regime shows up.
      p.pred = rng() % 2 ? p.gold : RandomValue(d, rng);
    }
    const auto m = BuildConfusion(d, pairs);
    ASSERT_EQ(m.Total(), pairs.size());
    const auto classes = ComputeAllClassMetrics(m);
    const Oracle o = BruteForce(d, pairs);
    ASSERT_EQ(classes.size(), o.p.size());

    double macro = 0, weighted = 0, total = 0;
    int counted = 0;
    for (std::size_t c = 0; c < classes.size(); ++c) {
      EXPECT_NEAR(classes[c].precision, o.p[c], kTol);
      EXPECT_NEAR(classes[c].recall, o.r[c], kTol);
      EXPECT_NEAR(classes[c].f1, o.f1[c], kTol);
      EXPECT_EQ(classes[c].support, o.support[c]);
      EXPECT_EQ(m.RowSum(c), o.support[c]);
      for (double v : {classes[c].precision, classes[c].recall, classes[c].f1}) {
        EXPECT_GE(v, 0.0);
        EXPECT_LE(v, 1.0);
      }
      if (classes[c].precision > 0 && classes[c].recall > 0) {
        EXPECT_GE(classes[c].f1,
                  std::min(classes[c].precision, classes[c].recall) - kTol);
        EXPECT_LE(classes[c].f1,
                  std::max(classes[c].precision, classes[c].recall) + kTol);
      }
      if (o.support[c] > 0) {
        macro += o.f1[c];
        weighted += o.f1[c] * double(o.support[c]);
        total += double(o.support[c]);
        ++counted;
      }
    }
    const auto a = ComputeAverages(classes);
    if (counted == 0) {
      EXPECT_EQ(a, std::nullopt);
      continue;
    }
    ASSERT_TRUE(a.has_value());
    EXPECT_NEAR(a->macro.f1, macro / counted, kTol);
    EXPECT_NEAR(a->weighted.f1, weighted / total, kTol);
  }
}

std::vector<RecordPair> RandomRecordPairs(std::size_t n, std::mt19937_64& rng) {
  const auto legal = AllLegalRecords();
  std::vector<RecordPair> out(n);
  for (auto& p : out) {
    if (rng() % 8) p.gold = legal[rng() % legal.size()];
    p.pred = rng() % 3 ? p.gold : std::optional(legal[rng() % legal.size()]);
    if (rng() % 10 == 0) p.pred.reset();
  }
  return out;
}

TEST(MetricsTableTest, PermutationInvariant) {
  std::mt19937_64 rng(77);
  auto pairs = RandomRecordPairs(200, rng);
  const MetricsTable a = BuildMetricsTable("s", pairs);
  std::shuffle(pairs.begin(), pairs.end(), rng);
  const MetricsTable b = BuildMetricsTable("s", pairs);
  const std::vector<MetricsTable> ta = {a}, tb = {b};
  EXPECT_EQ(RenderReport(ta, ReportFormat::kJson), RenderReport(tb, ReportFormat::kJson));
  EXPECT_EQ(RenderConfusionData(ta), RenderConfusionData(tb));
}

TEST(MetricsTableTest, PerfectPredictions) {
  std::mt19937_64 rng(3);
  auto pairs = RandomRecordPairs(120, rng);
  for (auto& p : pairs) p.pred = p.gold;
  const MetricsTable t = BuildMetricsTable("s", pairs);
  ASSERT_EQ(t.dimensions.size(), 5u);
  for (const auto& dm : t.dimensions) {
    EXPECT_EQ(dm.matrix.Total(), pairs.size());
    for (std::size_t g = 0; g < dm.matrix.size(); ++g) {
      for (std::size_t p = 0; p < dm.matrix.size(); ++p) {
        if (g != p) EXPECT_EQ(dm.matrix.at(g, p), 0u);
      }
    }
    for (const auto& c : dm.classes) {
      if (c.support == 0) continue;
      EXPECT_EQ(c.precision, 1.0);
      EXPECT_EQ(c.recall, 1.0);
      EXPECT_EQ(c.f1, 1.0);
    }
    ASSERT_TRUE(dm.averages.has_value());
    EXPECT_EQ(dm.averages->macro.f1, 1.0);
    EXPECT_EQ(dm.averages->weighted.precision, 1.0);
  }
}

AnnotatedNote Annotated(const std::string& id, const std::string& site,
                        std::optional<DiagnosisRecord> r) {
  AnnotatedNote a;
  a.note.note_id = id;
  a.note.site_id = site;
  a.record = std::move(r);
  return a;
}

TEST(AlignCorporaTest, PairsByIdAndReportsMissing) {
  const auto r = Perio(Stage::kI, Grade::kA, Extent::kLocalized);
  std::vector<AnnotatedNote> gold = {Annotated("a", "s1", r), Annotated("b", "s2", r)};
  std::vector<AnnotatedNote> pred = {Annotated("b", "s2", std::nullopt),
                                     Annotated("a", "s1", r)};
  const auto aligned = AlignCorpora(gold, pred);
  ASSERT_EQ(aligned.size(), 2u);
  EXPECT_EQ(aligned[0].note_id, "a");
  EXPECT_EQ(aligned[0].records.pred, r);
  EXPECT_EQ(aligned[1].records.pred, std::nullopt);

  pred.pop_back();
  try {
    AlignCorpora(gold, pred);
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("a"), std::string::npos);
  }
}

TEST(EvaluateBySiteTest, OneTablePerSitePlusAll) {
  const auto r = Perio(Stage::kI, Grade::kA, Extent::kLocalized);
  std::vector<AnnotatedNote> gold = {Annotated("a", "site2", r), Annotated("b", "site1", r),
                                     Annotated("c", "site1", r)};
  const auto aligned = AlignCorpora(gold, gold);
  const auto tables = EvaluateBySite(aligned);
  ASSERT_EQ(tables.size(), 3u);
  EXPECT_EQ(tables[0].site, "site1");
  EXPECT_EQ(tables[1].site, "site2");
  EXPECT_EQ(tables[2].site, "All sites");
  EXPECT_EQ(tables[2].dimensions[0].matrix.Total(), 3u);

  gold.pop_back();
  gold.erase(gold.begin());
  EXPECT_EQ(EvaluateBySite(AlignCorpora(gold, gold)).size(), 1u);
}

// Table whose periodontal-status averages are set directly.
MetricsTable FixtureTable(const std::string& site, double macro_p, double weighted_p) {
  MetricsTable t;
  t.site = site;
  DimensionMetrics dm;
  dm.dimension = Dimension::kStatus;
  dm.averages = Averages{{macro_p, 0.9, 0.93}, {weighted_p, 0.95, 0.956}};
  t.dimensions.push_back(dm);
  return t;
}

// Splits a text-report row into its value cells.
std::vector<std::string> Cells(const std::string& row) {
  std::vector<std::string> out;
  for (std::size_t at = 30; at < row.size(); at += 10) {
    std::string cell = row.substr(at, 10);
    while (!cell.empty() && cell.back() == ' ') cell.pop_back();
    out.push_back(cell);
  }
  return out;
}

std::vector<std::string> Lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

TEST(RenderReportTest, TwoDecimalCells) {
  const std::vector<MetricsTable> tables = {FixtureTable("Site 1", 0.96, 0.97),
                                            FixtureTable("Site 2", 0.894, 0.905)};
  const auto lines = Lines(RenderReport(tables, ReportFormat::kText));
  ASSERT_EQ(lines.size(), 4u);
  EXPECT_NE(lines[0].find("Precision"), std::string::npos);
  EXPECT_NE(lines[1].find("Site 1"), std::string::npos);
  EXPECT_EQ(lines[2].rfind("Periodontal status", 0), 0u);
  const auto macro = Cells(lines[2]);
  const auto weighted = Cells(lines[3]);
  ASSERT_EQ(macro.size(), 6u);
  EXPECT_EQ(macro[0], "0.96");
  EXPECT_EQ(weighted[0], "0.97");
  EXPECT_EQ(macro[1], "0.89");
  EXPECT_EQ(weighted[1], "0.91");
  EXPECT_EQ(macro[2], "0.90");
  EXPECT_EQ(weighted[5], "0.96");
}

TEST(RenderReportTest, EmptyTablesGiveHeaderOnly) {
  EXPECT_EQ(RenderReport({}, ReportFormat::kText), "Dimension           Average\n");
  EXPECT_EQ(RenderReport({}, ReportFormat::kCsv),
            "site,dimension,class,precision,recall,f1,support\r\n");
  EXPECT_EQ(nlohmann::json::parse(RenderReport({}, ReportFormat::kJson)),
            nlohmann::json::array());
}

std::string Fixed2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

TEST(RenderReportTest, JsonAndTextAgree) {
  std::mt19937_64 rng(99);
  std::vector<MetricsTable> tables;
  for (const char* site : {"site1", "site2"}) {
    tables.push_back(BuildMetricsTable(site, RandomRecordPairs(90, rng)));
  }
  const auto json = nlohmann::json::parse(RenderReport(tables, ReportFormat::kJson));
  const auto lines = Lines(RenderReport(tables, ReportFormat::kText));
  ASSERT_EQ(json.size(), 10u);
  ASSERT_EQ(lines.size(), 2u + 10u);
  for (std::size_t i = 0; i < json.size(); ++i) {
    const auto& entry = json[i];
    const std::size_t site = entry["site"] == "site1" ? 0 : 1;
    const std::size_t dim = i % 5;
    const auto macro = Cells(lines[2 + 2 * dim]);
    const auto weighted = Cells(lines[3 + 2 * dim]);
    const char* keys[] = {"p", "r", "f1"};
    for (std::size_t m = 0; m < 3; ++m) {
      EXPECT_EQ(macro[m * 2 + site], Fixed2(entry["macro"][keys[m]].get<double>()));
      EXPECT_EQ(weighted[m * 2 + site],
                Fixed2(entry["weighted"][keys[m]].get<double>()));
    }
  }
}

TEST(RenderReportTest, CsvCarriesFullPrecision) {
  const std::vector<MetricsTable> tables = {FixtureTable("Site, 1", 1.0 / 3.0, 0.97)};
  const std::string csv = RenderReport(tables, ReportFormat::kCsv);
  EXPECT_NE(csv.find("\"Site, 1\",status,macro,0.33333333333333"), std::string::npos)
      << csv;
  EXPECT_NE(csv.find("\r\n"), std::string::npos);
}

TEST(RenderReportTest, FormatNames) {
  EXPECT_EQ(ParseReportFormat("text"), ReportFormat::kText);
  EXPECT_EQ(ParseReportFormat("csv"), ReportFormat::kCsv);
  EXPECT_EQ(ParseReportFormat("json"), ReportFormat::kJson);
  EXPECT_THROW(ParseReportFormat("xlsx"), ConfigError);
}

TEST(ChartDataTest, BarAndConfusion) {
  std::mt19937_64 rng(4);
  const std::vector<MetricsTable> tables = {
      BuildMetricsTable("site1", RandomRecordPairs(50, rng))};
  const auto bar = nlohmann::json::parse(RenderBarChartData(tables));
  EXPECT_EQ(bar["groups"].size(), 5u);
  EXPECT_EQ(bar["series"].size(), 3u);
  EXPECT_EQ(bar["series"][2]["values"][0].get<double>(),
            tables[0].dimensions[0].averages->weighted.f1);
  const auto grids = nlohmann::json::parse(RenderConfusionData(tables));
  ASSERT_EQ(grids.size(), 5u);
  EXPECT_EQ(grids[0]["classes"].back(), "N/A");
  std::uint64_t total = 0;
  for (const auto& row : grids[1]["cells"]) {
    for (const auto& v : row) total += v.get<std::uint64_t>();
  }
  EXPECT_EQ(total, 50u);
}

TEST(FindStabilizationTest, AnalyticCurve) {
  std::vector<std::size_t> sizes;
  std::vector<double> values;
  for (std::size_t n = 30; n <= 450; n += 30) {
    sizes.push_back(n);
    values.push_back(1.0 - 6.0 / static_cast<double>(n));
  }
  // Deltas: 0.1, 0.0333, 0.0167, 0.01 (not below), 0.0067, ...
  EXPECT_EQ(FindStabilization(sizes, values, 0.01, 2), 150u);
  EXPECT_EQ(FindStabilization(sizes, values, 0.02, 2), 90u);
  EXPECT_EQ(FindStabilization(sizes, values, 1e-6, 2), std::nullopt);
}

TEST(FindStabilizationTest, ConstantCurve) {
  const std::vector<std::size_t> sizes = {30, 60, 90, 120};
  const std::vector<double> values(4, 0.9);
  EXPECT_EQ(FindStabilization(sizes, values, 0.01, 2), 30u);
  EXPECT_EQ(FindStabilization(sizes, values, 0.01, 3), 30u);
  EXPECT_EQ(FindStabilization(sizes, values, 0.01, 4), std::nullopt);
}

TEST(LearningCurveTest, SizesAndStabilization) {
  std::mt19937_64 rng(8);
  auto pool = RandomRecordPairs(450, rng);
  for (auto& p : pool) p.pred = p.gold;
  CurveOptions options;
  options.seed = 1;
  const LearningCurve curve = ComputeLearningCurve(pool, options);
  ASSERT_EQ(curve.points.size(), 15u);
  for (std::size_t i = 0; i < 15; ++i) EXPECT_EQ(curve.points[i].size, 30 * (i + 1));
  EXPECT_EQ(curve.stabilization_size, 30u);
  const auto data = nlohmann::json::parse(RenderCurveData(curve));
  EXPECT_EQ(data["stabilization_size"], 30);
  EXPECT_EQ(data["points"].size(), 15u);

  pool.resize(100);
  EXPECT_EQ(ComputeLearningCurve(pool, options).points.back().size, 90u);
  pool.resize(29);
  EXPECT_THROW(ComputeLearningCurve(pool, options), DataError);
}

TEST(LearningCurveTest, SeedFixesOrder) {
  std::mt19937_64 rng(10);
  const auto pool = RandomRecordPairs(300, rng);
  CurveOptions a;
  a.seed = 5;
  CurveOptions b = a;
  b.seed = 6;
  EXPECT_EQ(RenderCurveData(ComputeLearningCurve(pool, a)),
            RenderCurveData(ComputeLearningCurve(pool, a)));
  EXPECT_NE(RenderCurveData(ComputeLearningCurve(pool, a)),
            RenderCurveData(ComputeLearningCurve(pool, b)));
}

}  // namespace
}  // namespace perio
