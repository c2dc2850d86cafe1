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

// perio: command-line front end.
//
//   perio cohort   --corpus notes.jsonl --meta meta.jsonl --out cohort.jsonl
//   perio synth    --corpus notes.jsonl --offline --seed 7 --out synth.jsonl
//   perio split    --corpus synth.jsonl --ratios 8:1:1 --seed 7 --out split.json
//   perio extract  --corpus gold.jsonl --mode informal --out pred.jsonl
//   perio evaluate --gold gold.jsonl --pred pred.jsonl --report text \
//                  --curve step=30 --seed 7 --out-dir eval/
//
// Exit status: 0 success, 1 data or validation failure, 2 usage or
// configuration error.

#include <charconv>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "perio/corpus.h"
#include "perio/error.h"
#include "perio/evaluation.h"
#include "perio/extraction.h"
#include "perio/llm_client.h"
#include "perio/pipeline.h"
#include "perio/synth_config.h"
#include "perio/synthesis.h"

namespace perio {
namespace {

constexpr int kExitData = 1;
constexpr int kExitUsage = 2;

struct CohortArgs {
  std::string corpus;
  std::string meta;
  std::string out;
};

int RunCohort(const CohortArgs& a) {
  const auto notes = ReadCorpus(a.corpus);
  const auto meta = ReadMetaFile(a.meta);
  std::vector<AnnotatedNote> kept;
  for (const AnnotatedNote& n : notes) {
    std::optional<PatientMeta> m = n.meta;
    if (auto it = meta.find(n.note.note_id); it != meta.end()) m = it->second;
    if (!m || !CohortEligible(*m)) continue;
    AnnotatedNote copy = n;
    copy.meta = m;
    kept.push_back(std::move(copy));
  }
  WriteCorpus(kept, a.out);
  std::cout << kept.size() << "/" << notes.size() << " eligible\n";
  return 0;
}

struct SynthArgs {
  std::string corpus;
  std::string templates;
  bool online = false;
  bool offline = false;
  std::string config;
  std::uint64_t seed = 0;
  std::size_t per_category = 15;
  std::optional<std::size_t> variants;
  std::string out;
  std::string templates_out;
  bool no_autofix = false;
};

int RunSynth(const SynthArgs& a) {
  SynthConfig config;
  if (!a.config.empty()) config = LoadSynthConfig(a.config);
  if (a.variants) config.generation.variants_per_template = *a.variants;
  if (config.generation.variants_per_template < 1) {
    throw ConfigError("variants_per_template must be at least 1");
  }
  config.perturbation.rng_seed = a.seed;

  std::string api_key;
  PromptConfig prompt = PromptConfig::Default();
  if (a.online) {
    config.generation.Validate();
    api_key = ResolveApiKey(config.generation);
    if (config.prompt_file) {
      try {
        prompt = LoadPromptConfig(*config.prompt_file);
      } catch (const FormatError&) {
        throw;
      } catch (const Error& e) {
        throw ConfigError(e.what());
      }
    }
  }

  std::vector<SeedTemplate> templates;
  if (!a.templates.empty()) {
    templates = TemplatesFromCorpus(ReadCorpus(a.templates));
  } else {
    templates = SelectSeedTemplates(ReadCorpus(a.corpus), a.per_category, a.seed);
  }
  if (!a.templates_out.empty()) {
    WriteCorpus(TemplatesToCorpus(templates), a.templates_out);
  }

  std::vector<AnnotatedNote> notes;
  if (a.online) {
    HttpChatClient client(config.generation, api_key);
    notes = GenerateLlm(templates, config.generation, prompt, client);
  } else {
    notes = GenerateOffline(templates, config.generation.variants_per_template,
                            config.perturbation);
  }

  std::size_t discrepant = 0;
  for (AnnotatedNote& n : notes) {
    QaVerdict verdict = ValidateLabels(n);
    if (verdict.consistent()) {
      n.qa = std::move(verdict);
      continue;
    }
    ++discrepant;
    if (a.no_autofix) {
      n.qa = std::move(verdict);
    } else {
      ApplyCorrections(&n, std::move(verdict));
    }
  }
  WriteCorpus(notes, a.out);
  std::cout << notes.size() << " notes from " << templates.size()
            << " templates; " << discrepant << " with label discrepancies"
            << (discrepant && !a.no_autofix ? " (auto-fixed)" : "") << "\n";
  return discrepant && a.no_autofix ? kExitData : 0;
}

struct SplitArgs {
  std::string corpus;
  std::string ratios = "8:1:1";
  std::uint64_t seed = 0;
  std::string out;
};

int RunSplit(const SplitArgs& a) {
  const SplitRatios ratios = ParseRatios(a.ratios);
  const auto notes = ReadCorpus(a.corpus);
  const SplitManifest m = SplitCorpus(notes, ratios, a.seed);
  WriteFileAtomic(a.out, ManifestToJson(m));
  const auto counts = m.Counts();
  std::cout << "train " << counts[0] << ", validation " << counts[1]
            << ", test " << counts[2] << "\n";
  return 0;
}

struct ExtractArgs {
  std::string corpus;
  std::string mode = "strict";
  std::string extractor = "builtin";
  unsigned jobs = 1;
  std::string out;
};

int RunExtract(const ExtractArgs& a) {
  ExtractorConfig config;
  auto mode = ParseExtractionMode(a.mode);
  if (!mode) throw ConfigError("unknown mode \"" + a.mode + "\"");
  config.mode = *mode;

  const auto notes = ReadCorpus(a.corpus);
  std::unique_ptr<Extractor> extractor;
  constexpr std::string_view kPredictionsPrefix = "predictions=";
  if (a.extractor == "builtin") {
    extractor = std::make_unique<GrammarExtractor>(config);
  } else if (a.extractor.rfind(kPredictionsPrefix, 0) == 0) {
    const std::string path = a.extractor.substr(kPredictionsPrefix.size());
    if (path.empty()) throw ConfigError("predictions= needs a file path");
    extractor = std::make_unique<PrecomputedExtractor>(
        LoadExternalPredictions(path, notes));
  } else {
    throw ConfigError("unknown extractor \"" + a.extractor +
                      "\" (expected builtin or predictions=<path>)");
  }
  const auto predicted = PredictCorpus(notes, *extractor, a.jobs);
  WriteCorpus(predicted, a.out);
  std::size_t with_record = 0;
  for (const auto& n : predicted) with_record += n.record.has_value();
  std::cout << predicted.size() << " notes, " << with_record
            << " with a diagnosis\n";
  return 0;
}

struct EvaluateArgs {
  std::string gold;
  std::string pred;
  std::string report = "text";
  std::string curve;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
};

CurveOptions ParseCurveSpec(const std::string& spec) {
  CurveOptions o;
  std::size_t pos = 0;
  while (pos <= spec.size()) {
    std::size_t comma = spec.find(',', pos);
    if (comma == std::string::npos) comma = spec.size();
    const std::string item = spec.substr(pos, comma - pos);
    pos = comma + 1;
    const auto eq = item.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("curve option \"" + item + "\" is not key=value");
    }
    const std::string key = item.substr(0, eq);
    const std::string value = item.substr(eq + 1);
    auto number = [&](auto* out) {
      auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), *out);
      if (ec != std::errc() || p != value.data() + value.size()) {
        throw ConfigError("bad value for curve option " + key);
      }
    };
    if (key == "step") {
      number(&o.step);
      if (o.step == 0) throw ConfigError("curve step must be positive");
    } else if (key == "epsilon") {
      number(&o.epsilon);
    } else if (key == "window") {
      number(&o.window);
    } else if (key == "dimension") {
      auto d = ParseDimension(value);
      if (!d) throw ConfigError("unknown dimension \"" + value + "\"");
      o.dimension = *d;
    } else {
      throw ConfigError("unknown curve option \"" + key + "\"");
    }
  }
  return o;
}

int RunEvaluate(const EvaluateArgs& a) {
  const ReportFormat format = ParseReportFormat(a.report);
  std::optional<CurveOptions> curve_options;
  if (!a.curve.empty()) {
    curve_options = ParseCurveSpec(a.curve);
    if (!a.seed) throw ConfigError("--curve requires --seed");
    curve_options->seed = *a.seed;
  }
  const auto gold = ReadCorpus(a.gold);
  const auto pred = ReadCorpus(a.pred);
  const auto aligned = AlignCorpora(gold, pred);
  const auto tables = EvaluateBySite(aligned);

  const std::filesystem::path dir(a.out_dir);
  std::filesystem::create_directories(dir);
  const char* ext = format == ReportFormat::kText  ? "txt"
                    : format == ReportFormat::kCsv ? "csv"
                                                   : "json";
  const std::string report = RenderReport(tables, format);
  WriteFileAtomic(dir / (std::string("report.") + ext), report);
  WriteFileAtomic(dir / "chart_bar.json", RenderBarChartData(tables));
  WriteFileAtomic(dir / "confusion.json", RenderConfusionData(tables));
  if (format == ReportFormat::kText) std::cout << report;

  if (curve_options) {
    std::vector<RecordPair> pool;
    for (const auto& n : aligned) pool.push_back(n.records);
    const LearningCurve curve = ComputeLearningCurve(pool, *curve_options);
    WriteFileAtomic(dir / "curve.json", RenderCurveData(curve));
    std::cout << "learning curve: " << curve.points.size() << " points, "
              << (curve.stabilization_size
                      ? "stabilized at " +
                            std::to_string(*curve.stabilization_size)
                      : std::string("not stabilized"))
              << "\n";
  }
  return 0;
}

int Main(int argc, char** argv) {
  CLI::App app{"Periodontal diagnosis extraction toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "perio 0.1.0");

  CohortArgs cohort;
  auto* c = app.add_subcommand("cohort", "Keep notes whose patients meet the inclusion criteria");
  c->add_option("--corpus", cohort.corpus, "Input corpus (JSONL)")->required();
  c->add_option("--meta", cohort.meta, "Patient metadata (JSONL)")->required();
  c->add_option("--out", cohort.out, "Output corpus")->required();

  SynthArgs synth;
  auto* s = app.add_subcommand("synth", "Generate a synthetic corpus from seed templates");
  auto* s_corpus = s->add_option("--corpus", synth.corpus,
                                 "Corpus to draw seed templates from");
  auto* s_templates = s->add_option("--templates", synth.templates,
                                    "Seed templates (JSONL with records)");
  s_corpus->excludes(s_templates);
  auto* s_online = s->add_flag("--online", synth.online, "Use the chat endpoint");
  auto* s_offline = s->add_flag("--offline", synth.offline, "Use the offline generator");
  s_online->excludes(s_offline);
  s->add_option("--config", synth.config, "Key=value config file");
  s->add_option("--seed", synth.seed, "Seed for template selection and generation")
      ->required();
  s->add_option("--per-category", synth.per_category, "Templates per status")
      ->check(CLI::PositiveNumber);
  s->add_option("--variants", synth.variants, "Variants per template");
  s->add_option("--templates-out", synth.templates_out,
                "Also write the selected templates here");
  s->add_flag("--no-autofix", synth.no_autofix,
              "Record label discrepancies without correcting them");
  s->add_option("--out", synth.out, "Output corpus")->required();

  SplitArgs split;
  auto* sp = app.add_subcommand("split", "Partition a corpus into train/validation/test");
  sp->add_option("--corpus", split.corpus, "Input corpus")->required();
  sp->add_option("--ratios", split.ratios, "train:validation:test weights")
      ->capture_default_str();
  sp->add_option("--seed", split.seed, "Shuffle seed")->required();
  sp->add_option("--out", split.out, "Manifest (JSON)")->required();

  ExtractArgs extract;
  auto* e = app.add_subcommand("extract", "Predict spans and records for a corpus");
  e->add_option("--corpus", extract.corpus, "Input corpus")->required();
  e->add_option("--mode", extract.mode, "strict or informal")
      ->check(CLI::IsMember({"strict", "informal"}))
      ->capture_default_str();
  e->add_option("--extractor", extract.extractor,
                "builtin or predictions=<path>")
      ->capture_default_str();
  e->add_option("--jobs", extract.jobs, "Worker threads")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  e->add_option("--out", extract.out, "Output corpus")->required();

  EvaluateArgs evaluate;
  auto* ev = app.add_subcommand("evaluate", "Score predictions against gold");
  ev->add_option("--gold", evaluate.gold, "Gold corpus")->required();
  ev->add_option("--pred", evaluate.pred, "Predicted corpus")->required();
  ev->add_option("--report", evaluate.report, "text, csv or json")
      ->capture_default_str();
  ev->add_option("--curve", evaluate.curve,
                 "Learning curve options, e.g. step=30,epsilon=0.01,window=2");
  ev->add_option("--seed", evaluate.seed, "Seed for the learning-curve order");
  ev->add_option("--out-dir", evaluate.out_dir, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*c) return RunCohort(cohort);
    if (*s) {
      if (synth.corpus.empty() == synth.templates.empty()) {
        throw ConfigError("synth needs exactly one of --corpus or --templates");
      }
      if (synth.online == synth.offline) {
        throw ConfigError("synth needs exactly one of --online or --offline");
      }
      return RunSynth(synth);
    }
    if (*sp) return RunSplit(split);
    if (*e) return RunExtract(extract);
    if (*ev) return RunEvaluate(evaluate);
  } catch (const ConfigError& err) {
    std::cerr << "perio: " << err.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& err) {
    std::cerr << "perio: " << err.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace
}  // namespace perio

int main(int argc, char** argv) { return perio::Main(argc, argv); }
