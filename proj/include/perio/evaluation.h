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

// Note-level scoring of predicted diagnoses against gold: confusion matrices
// with an explicit N/A class, per-class and averaged precision/recall/F1,
// learning curves over growing gold sets, and report/chart rendering.

#ifndef PERIO_EVALUATION_H_
#define PERIO_EVALUATION_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "perio/corpus.h"
#include "perio/model.h"

namespace perio {

// One dimension of one note; nullopt stands for N/A.
struct ValuePair {
  std::optional<Label> gold;
  std::optional<Label> pred;

  friend bool operator==(const ValuePair&, const ValuePair&) = default;
};

// Pairs indexed by Dimension.
std::array<ValuePair, 5> CompareNote(const std::optional<DiagnosisRecord>& gold,
                                     const std::optional<DiagnosisRecord>& pred);

inline constexpr std::string_view kNotApplicable = "N/A";

// Square count matrix indexed (gold class, predicted class). The last class
// is always N/A.
class ConfusionMatrix {
 public:
  // Classes are the dimension's values in order, then N/A.
  static ConfusionMatrix ForDimension(Dimension d);
  // Named classes followed by N/A.
  explicit ConfusionMatrix(std::vector<std::string> value_classes);

  std::size_t size() const { return names_.size(); }
  std::size_t na_index() const { return names_.size() - 1; }
  const std::vector<std::string>& class_names() const { return names_; }
  std::optional<Dimension> dimension() const { return dimension_; }

  std::uint64_t at(std::size_t gold, std::size_t pred) const {
    return cells_[gold * size() + pred];
  }
  void Add(std::size_t gold, std::size_t pred, std::uint64_t n = 1) {
    cells_[gold * size() + pred] += n;
  }
  // Class index of a value of this matrix's dimension; N/A for nullopt.
  std::size_t IndexOf(const std::optional<Label>& value) const;

  std::uint64_t RowSum(std::size_t gold) const;
  std::uint64_t ColumnSum(std::size_t pred) const;
  std::uint64_t Total() const;

  friend bool operator==(const ConfusionMatrix&,
                         const ConfusionMatrix&) = default;

 private:
  std::optional<Dimension> dimension_;
  std::vector<std::string> names_;
  std::vector<std::uint64_t> cells_;
};

ConfusionMatrix BuildConfusion(Dimension d, std::span<const ValuePair> pairs);

struct ClassMetrics {
  std::string name;
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;
  std::uint64_t support = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// `cls` must not be the N/A class. Zero denominators give 0.
ClassMetrics ComputeClassMetrics(const ConfusionMatrix& matrix,
                                 std::size_t cls);
// Every non-N/A class of the matrix.
std::vector<ClassMetrics> ComputeAllClassMetrics(const ConfusionMatrix& matrix);

struct Prf {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct Averages {
  Prf macro;
  Prf weighted;
};

// Macro and support-weighted means over classes with support > 0. Empty when
// no class has support.
std::optional<Averages> ComputeAverages(std::span<const ClassMetrics> classes);

struct DimensionMetrics {
  Dimension dimension = Dimension::kStatus;
  ConfusionMatrix matrix = ConfusionMatrix::ForDimension(Dimension::kStatus);
  std::vector<ClassMetrics> classes;
  std::optional<Averages> averages;
};

struct MetricsTable {
  std::string site;
  std::vector<DimensionMetrics> dimensions;
};

// Gold and predicted record of one note.
struct RecordPair {
  std::optional<DiagnosisRecord> gold;
  std::optional<DiagnosisRecord> pred;
};

MetricsTable BuildMetricsTable(std::string site,
                               std::span<const RecordPair> notes);

// Pairs gold and predicted notes by note_id. Throws DataError listing the ids
// present on only one side.
struct AlignedNote {
  std::string note_id;
  std::string site_id;
  RecordPair records;
};
std::vector<AlignedNote> AlignCorpora(std::span<const AnnotatedNote> gold,
                                      std::span<const AnnotatedNote> pred);

// One table per site (sorted by site id), followed by an "All sites" table
// when there is more than one site.
std::vector<MetricsTable> EvaluateBySite(std::span<const AlignedNote> notes);

struct CurveOptions {
  std::size_t step = 30;
  double epsilon = 0.01;
  std::size_t window = 2;
  // Dimension whose weighted F1 drives stabilization.
  Dimension dimension = Dimension::kStatus;
  std::uint64_t seed = 0;
};

struct CurvePoint {
  std::size_t size = 0;
  // Weighted F1 per dimension (indexed by Dimension); empty when no class
  // of that dimension has support in the prefix.
  std::array<std::optional<double>, 5> weighted_f1;
};

struct LearningCurve {
  std::size_t step = 0;
  Dimension dimension = Dimension::kStatus;
  std::vector<CurvePoint> points;
  std::optional<std::size_t> stabilization_size;
};

// Smallest sizes[j] such that the `window` deltas following it,
// |values[j+k+1] - values[j+k]| for k < window, are all below epsilon.
// Deltas are compared with a 1e-12 allowance so that a delta which is
// analytically equal to epsilon does not count as below it.
std::optional<std::size_t> FindStabilization(std::span<const std::size_t> sizes,
                                             std::span<const double> values,
                                             double epsilon,
                                             std::size_t window);

// Shuffles the pool with the seed, then scores prefixes of size step,
// 2*step, ... up to the pool size (a final partial step is dropped). Throws
// DataError when the pool is smaller than one step.
LearningCurve ComputeLearningCurve(std::span<const RecordPair> pool,
                                   const CurveOptions& options);

enum class ReportFormat { kText, kCsv, kJson };

// Accepts "text", "csv" and "json". Throws ConfigError otherwise.
ReportFormat ParseReportFormat(std::string_view name);

// Text: a grid with dimensions as rows (macro and weighted sub-rows) and
// metric x site columns, values rounded to two decimals. CSV and JSON carry
// full precision and per-class rows.
std::string RenderReport(std::span<const MetricsTable> tables,
                         ReportFormat format);

// Grouped bar chart data: one group per dimension, one series per
// (site, metric) over weighted averages.
std::string RenderBarChartData(std::span<const MetricsTable> tables);
// Confusion grids for every (site, dimension).
std::string RenderConfusionData(std::span<const MetricsTable> tables);
std::string RenderCurveData(const LearningCurve& curve);

}  // namespace perio

#endif  // PERIO_EVALUATION_H_
