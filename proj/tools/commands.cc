// Copyright 2026 The Outlier Fusion Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "commands.h"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "kernel_checks.h"
#include "ofuse/error.h"
#include "ofuse/eval/metrics.h"
#include "ofuse/metadata/csv.h"
#include "ofuse/metadata/records.h"
#include "ofuse/model/toy.h"
#include "ofuse/outlier/fusion.h"

namespace ofuse::cli {
namespace {

std::string ReadInput(const RunConfig& cfg) {
  Require(!cfg.input.empty(), ErrorKind::kConfig, cfg.command + " needs --input");
  std::ifstream in(cfg.input, std::ios::binary);
  Require(in.good(), ErrorKind::kConfig, "cannot read input " + cfg.input.string());
  std::ostringstream bytes;
  bytes << in.rdbuf();
  return bytes.str();
}

// printf into a std::string; every summary line goes through here.
template <typename... Args>
std::string Format(const char* fmt, Args... args) {
  const int n = std::snprintf(nullptr, 0, fmt, args...);
  std::string out(static_cast<std::size_t>(n), '\0');
  std::snprintf(out.data(), out.size() + 1, fmt, args...);
  return out;
}

std::string DetectorTable(const FusionResult& fusion, std::size_t samples) {
  std::string out = "detector votes\n";
  for (DetectorKind kind : kAllDetectors) {
    const std::string name(DetectorName(kind));
    out += Format("  %-10s %zu\n", name.c_str(), fusion.verdicts.empty() ? 0 : fusion.flagged(kind));
  }
  out += Format("  %-10s %zu of %zu\n", "fused", fusion.outliers(), samples);
  return out;
}

std::string MetricTable(const MetricsReport& report) {
  std::string out = "metrics (macro average)\n";
  out += Format("  accuracy     %.4f\n", report.accuracy);
  out += Format("  macro_f1     %.4f\n", report.macro_f1);
  out += Format("  specificity  %.4f\n", report.macro_specificity);
  out += Format("  sensitivity  %.4f\n", report.macro_sensitivity);
  out += "  class  f1      specificity  sensitivity\n";
  for (std::size_t c = 0; c < report.per_class.size(); ++c) {
    const ClassMetrics& m = report.per_class[c];
    out += Format("  %-5zu  %.4f  %.4f       %.4f\n", c, m.f1, m.specificity, m.sensitivity);
  }
  return out;
}

template <typename Writer>
std::string Render(Writer&& write) {
  std::ostringstream out;
  write(out);
  return out.str();
}

CommandResult Clean(const RunConfig& cfg) {
  std::istringstream in(ReadInput(cfg));
  const PipelineResult run = RunMetadataPipeline(in, cfg.detector);
  for (const std::string& w : run.fusion.warnings) std::cerr << "warning: " << w << '\n';

  CommandResult result;
  const Provenance& p = run.dataset.provenance;
  result.artifacts.Add("clean.csv", Render([&](auto& o) { WriteCleanCsv(o, run.dataset.records); }));
  result.artifacts.Add("rejects.csv", Render([&](auto& o) { WriteRejectsCsv(o, run.rejects); }));
  result.artifacts.Add("provenance.json", Render([&](auto& o) { WriteProvenanceJson(o, p); }));

  result.summary = "stage counts\n";
  result.summary += Format("  %-17s %llu\n", "raw", static_cast<unsigned long long>(p.raw));
  result.summary +=
      Format("  %-17s %llu\n", "single_factor", static_cast<unsigned long long>(p.single_factor));
  result.summary += Format("  %-17s %llu\n", "removed_outliers",
                           static_cast<unsigned long long>(p.removed_outliers));
  result.summary += Format("  %-17s %llu\n", "clean", static_cast<unsigned long long>(p.clean));
  result.summary += DetectorTable(run.fusion, p.single_factor);
  return result;
}

CommandResult Outliers(const RunConfig& cfg) {
  std::istringstream in(ReadInput(cfg));
  ParsedMetadata parsed = ParseMetadataCsv(in);
  const LabelCleaning cleaned = CleanLabels(std::move(parsed.records));
  std::vector<std::string> ids;
  for (const MetadataRecord& r : cleaned.records) ids.push_back(r.image_id);

  FusionResult fusion;
  if (!cleaned.records.empty()) fusion = RunFusion(BuildFeatures(cleaned.records), cfg.detector);
  for (const std::string& w : fusion.warnings) std::cerr << "warning: " << w << '\n';

  CommandResult result;
  result.artifacts.Add("verdicts.csv", Render([&](auto& o) {
                         WriteVerdictCsv(o, fusion.verdicts, std::span<const std::string>(ids));
                       }));
  result.summary = Format("samples %zu\n", ids.size()) + DetectorTable(fusion, ids.size());
  return result;
}

CommandResult Counts(const RunConfig& cfg) {
  std::istringstream in(ReadInput(cfg));
  const LabelTally tally = CountLabels(ReadCleanCsv(in));

  CommandResult result;
  result.artifacts.Add("label_counts.csv",
                       Render([&](auto& o) { WriteLabelCountsCsv(o, tally); }));
  result.summary = "label counts\n";
  std::uint64_t total = 0;
  const auto labels = RetainedLabels();
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const std::string name(LabelName(labels[i]));
    result.summary +=
        Format("  %-20s %llu\n", name.c_str(), static_cast<unsigned long long>(tally[i]));
    total += tally[i];
  }
  result.summary += Format("  %-20s %llu\n", "Total", static_cast<unsigned long long>(total));
  return result;
}

CommandResult CheckKernels(const RunConfig& cfg) {
  const std::vector<KernelCheck> checks = RunKernelChecks(cfg.seed);
  CommandResult result;
  result.artifacts.Add("kernel_checks.csv", Render([&](auto& o) { WriteKernelReport(o, checks); }));
  std::size_t failed = 0;
  result.summary = "kernel checks\n";
  for (const KernelCheck& c : checks) {
    result.summary += Format("  %-28s %4zu  max_error %.3e  tol %.0e  %s\n", c.name.c_str(),
                             c.instances, c.max_error, c.tolerance, c.passed() ? "pass" : "fail");
    failed += !c.passed();
  }
  result.summary += Format("%zu of %zu checks passed\n", checks.size() - failed, checks.size());
  if (failed > 0) result.status = kExitNumeric;
  return result;
}

void WritePredictionsCsv(std::ostream& out, std::span<const Prediction> predictions) {
  out << "sample_id,truth,predicted\n";
  for (const Prediction& p : predictions)
    out << p.index << ',' << p.truth << ',' << p.predicted << '\n';
}

CommandResult TrainToyCommand(const RunConfig& cfg) {
  const LabeledImages data = MakeTextureDataset(cfg.samples, cfg.model.image_size, cfg.seed);
  TrainResult run = TrainToy(data, cfg.model, cfg.train);

  CommandResult result;
  result.artifacts.Add("trace.csv", Render([&](auto& o) { WriteTraceCsv(o, run.trace); }));
  std::ostringstream blob(std::ios::binary), manifest;
  WriteParameters(run.params, blob, manifest);
  result.artifacts.Add("params.bin", blob.str());
  result.artifacts.Add("params.manifest", manifest.str());
  result.artifacts.Add("predictions.csv",
                       Render([&](auto& o) { WritePredictionsCsv(o, run.test_predictions); }));
  result.artifacts.Add("metrics.json",
                       Render([&](auto& o) { WriteMetricsJson(o, run.test_report); }));

  result.summary = Format("trained %zu steps over %zu epochs on %zu images\n", run.steps,
                          cfg.train.epochs, data.images.size());
  for (const TraceRow& row : run.trace) {
    if (row.epoch != run.trace.back().epoch) continue;
    result.summary += Format("  final %-5s loss %.6f  macro_f1 %.4f\n", row.split.c_str(), row.loss,
                             row.macro_f1);
  }
  result.summary += "test split " + MetricTable(run.test_report);
  return result;
}

CommandResult Eval(const RunConfig& cfg) {
  std::istringstream in(ReadInput(cfg));
  CsvReader reader(in);
  const auto header = reader.Next();
  Require(header.has_value(), ErrorKind::kSchema, "predictions CSV is empty");
  const auto column = [&](const char* name) {
    const auto it = std::find(header->begin(), header->end(), name);
    Require(it != header->end(), ErrorKind::kSchema,
            std::string("predictions CSV lacks column '") + name + "'");
    return static_cast<std::size_t>(it - header->begin());
  };
  const std::size_t truth_col = column("truth"), pred_col = column("predicted");

  std::vector<int> truth, predicted;
  int max_label = -1;
  while (auto row = reader.Next()) {
    const std::string where = "predictions line " + std::to_string(reader.line());
    Require(row->size() == header->size(), ErrorKind::kData, where + ": wrong field count");
    for (const std::size_t col : {truth_col, pred_col}) {
      const std::string& text = (*row)[col];
      int v = -1;
      const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
      Require(ec == std::errc() && ptr == text.data() + text.size() && v >= 0, ErrorKind::kData,
              where + ": '" + text + "' is not a class index");
      (col == truth_col ? truth : predicted).push_back(v);
      max_label = std::max(max_label, v);
    }
  }
  const std::size_t classes = cfg.classes.value_or(static_cast<std::size_t>(max_label + 1));
  Require(max_label < static_cast<int>(classes), ErrorKind::kData,
          "class index " + std::to_string(max_label) + " outside " + std::to_string(classes) +
              " classes");
  const MetricsReport report = ReportMetrics(CountConfusion(truth, predicted, classes));

  CommandResult result;
  result.artifacts.Add("metrics.json", Render([&](auto& o) { WriteMetricsJson(o, report); }));
  result.summary = Format("predictions %zu, classes %zu\n", truth.size(), classes);
  result.summary += MetricTable(report);
  return result;
}

}  // namespace

ExitStatus ExitStatusFor(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kConfig:
    case ErrorKind::kDomain:
      return kExitConfig;
    case ErrorKind::kShape:
    case ErrorKind::kSchema:
    case ErrorKind::kData:
      return kExitData;
    case ErrorKind::kNumeric:
      return kExitNumeric;
  }
  return kExitConfig;
}

void ArtifactSet::Add(std::string name, std::string bytes) {
  files_.emplace_back(std::move(name), std::move(bytes));
}

std::string ArtifactSet::Manifest(const RunConfig& cfg) const {
  std::string out = "command " + cfg.command + "\n";
  out += "config_hash " + HashString(cfg.Hash()) + "\n";
  out += "seed " + std::to_string(cfg.seed) + "\n";
  for (const auto& [key, value] : cfg.effective) out += "config " + key + "=" + value + "\n";
  if (!cfg.input.empty()) {
    std::ifstream in(cfg.input, std::ios::binary);
    std::ostringstream bytes;
    bytes << in.rdbuf();
    out += "input " + cfg.input.string() + " " + HashString(Fnv1a64(bytes.str())) + " " +
           std::to_string(bytes.str().size()) + "\n";
  }
  for (const auto& [name, bytes] : files_) {
    out += "artifact " + name + " " + HashString(Fnv1a64(bytes)) + " " +
           std::to_string(bytes.size()) + "\n";
  }
  return out;
}

void ArtifactSet::Write(const RunConfig& cfg) const {
  std::error_code ec;
  std::filesystem::create_directories(cfg.output, ec);
  Require(!ec, ErrorKind::kConfig,
          "cannot create output directory " + cfg.output.string() + ": " + ec.message());
  const auto put = [&](const std::string& name, const std::string& bytes) {
    const std::filesystem::path path = cfg.output / name;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    Require(out.good(), ErrorKind::kConfig, "cannot write " + path.string());
  };
  for (const auto& [name, bytes] : files_) put(name, bytes);
  put("manifest", Manifest(cfg));
}

CommandResult RunCommand(const RunConfig& cfg) {
  CommandResult result;
  if (cfg.command == "clean") {
    result = Clean(cfg);
  } else if (cfg.command == "outliers") {
    result = Outliers(cfg);
  } else if (cfg.command == "counts") {
    result = Counts(cfg);
  } else if (cfg.command == "check-kernels") {
    result = CheckKernels(cfg);
  } else if (cfg.command == "train-toy") {
    result = TrainToyCommand(cfg);
  } else if (cfg.command == "eval") {
    result = Eval(cfg);
  } else {
    Fail(ErrorKind::kConfig, "unknown command " + cfg.command);
  }
  result.artifacts.Add("summary.txt", result.summary);
  return result;
}

}  // namespace ofuse::cli
