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

#include "ofuse/metadata/records.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>

#include "json.hpp"
#include "ofuse/error.h"
#include "ofuse/metadata/csv.h"

namespace ofuse {
namespace {

constexpr std::string_view kImageIndex = "Image Index";
constexpr std::string_view kFindingLabels = "Finding Labels";
constexpr std::string_view kPatientAge = "Patient Age";
constexpr std::string_view kPatientGender = "Patient Gender";

std::optional<int> LeadingInteger(std::string_view text) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  int value = 0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end == text.data() || value < 0) return std::nullopt;
  return value;
}

std::vector<std::string_view> SplitOn(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos - start));
    if (pos == std::string_view::npos) return parts;
    start = pos + 1;
  }
}

// Returns the error detail, empty on success.
std::string ParseRow(const CsvRow& row, const std::vector<std::size_t>& mandatory,
                     const CsvRow& header, MetadataRecord& record) {
  // Field counts may drift from the header (the NIH file has unquoted commas
  // in two header names); only the mandatory columns must be present.
  const std::size_t needed = *std::max_element(mandatory.begin(), mandatory.end()) + 1;
  if (row.size() < needed) {
    return "expected at least " + std::to_string(needed) + " fields, found " +
           std::to_string(row.size());
  }
  record.image_id = row[mandatory[0]];
  if (record.image_id.empty()) return "empty image id";

  for (std::string_view name : SplitOn(row[mandatory[1]], '|')) {
    const auto label = ParseLabel(name);
    if (!label) return "unknown label '" + std::string(name) + "'";
    record.labels.push_back(*label);
  }
  std::sort(record.labels.begin(), record.labels.end());
  record.labels.erase(std::unique(record.labels.begin(), record.labels.end()),
                      record.labels.end());

  const auto age = LeadingInteger(row[mandatory[2]]);
  if (!age) return "unparseable age '" + row[mandatory[2]] + "'";
  record.age = *age;

  const std::string& gender = row[mandatory[3]];
  if (gender == "M") {
    record.gender = 1;
  } else if (gender == "F") {
    record.gender = 0;
  } else {
    return "unknown gender '" + gender + "'";
  }

  for (std::size_t c = 0; c < row.size(); ++c) {
    if (std::find(mandatory.begin(), mandatory.end(), c) == mandatory.end()) {
      record.dropped_raw.emplace_back(c < header.size() ? header[c] : "", row[c]);
    }
  }
  return {};
}

}  // namespace

std::string_view RejectReasonName(RejectReason reason) {
  switch (reason) {
    case RejectReason::kParseError:
      return "parse_error";
    case RejectReason::kPneumoniaOnly:
      return "pneumonia_only";
    case RejectReason::kMultiFactor:
      return "multi_factor";
    case RejectReason::kOutlier:
      return "outlier";
  }
  return "unknown";
}

ParsedMetadata ParseMetadataCsv(std::istream& in) {
  CsvReader reader(in);
  const auto header = reader.Next();
  Require(header.has_value(), ErrorKind::kSchema, "metadata CSV is empty (no header row)");

  std::vector<std::size_t> mandatory;
  for (std::string_view name : {kImageIndex, kFindingLabels, kPatientAge, kPatientGender}) {
    const auto it = std::find(header->begin(), header->end(), name);
    Require(it != header->end(), ErrorKind::kSchema,
            "metadata CSV is missing column '" + std::string(name) + "'");
    mandatory.push_back(static_cast<std::size_t>(it - header->begin()));
  }

  ParsedMetadata parsed;
  while (auto row = reader.Next()) {
    ++parsed.rows;
    MetadataRecord record;
    std::string problem = ParseRow(*row, mandatory, *header, record);
    if (problem.empty()) {
      parsed.records.push_back(std::move(record));
    } else {
      const std::string id = row->size() > mandatory[0] ? (*row)[mandatory[0]] : "";
      parsed.rejects.push_back(
          {id, RejectReason::kParseError,
           "line " + std::to_string(reader.line()) + ": " + std::move(problem)});
    }
  }
  return parsed;
}

ParsedMetadata ParseMetadataFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  Require(in.good(), ErrorKind::kData, "cannot open metadata file " + path.string());
  return ParseMetadataCsv(in);
}

LabelCleaning CleanLabels(std::vector<MetadataRecord> records) {
  LabelCleaning out;
  for (MetadataRecord& r : records) {
    std::erase(r.labels, DiseaseLabel::kPneumonia);
    if (r.labels.empty()) {
      out.rejects.push_back({r.image_id, RejectReason::kPneumoniaOnly, ""});
    } else if (r.labels.size() > 1) {
      out.rejects.push_back({r.image_id, RejectReason::kMultiFactor, ""});
    } else {
      out.records.push_back(std::move(r));
    }
  }
  return out;
}

FeatureMatrix BuildFeatures(std::span<const MetadataRecord> records) {
  Require(!records.empty(), ErrorKind::kDomain, "no records");
  const double n = double(records.size());
  double mean = 0.0;
  for (const auto& r : records) mean += r.age;
  mean /= n;
  double var = 0.0;
  for (const auto& r : records) var += (r.age - mean) * (r.age - mean);
  const double sd = std::sqrt(var / n);

  Matrix x(records.size(), 2);
  for (std::size_t i = 0; i < records.size(); ++i) {
    x(i, 0) = sd > 0.0 ? (records[i].age - mean) / sd : 0.0;
    x(i, 1) = records[i].gender;
  }
  return FeatureMatrix(std::move(x));
}

CleanDataset ApplyOutlierRemoval(std::vector<MetadataRecord> records,
                                 std::span<const OutlierVerdict> verdicts, std::size_t raw_rows,
                                 std::vector<Reject>* rejects) {
  Require(records.size() == verdicts.size(), ErrorKind::kShape,
          "verdict count " + std::to_string(verdicts.size()) + " does not match record count " +
              std::to_string(records.size()));
  Require(raw_rows >= records.size(), ErrorKind::kDomain,
          "raw row count is smaller than the single-factor count");
  CleanDataset out;
  out.provenance.raw = raw_rows;
  out.provenance.single_factor = records.size();
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (verdicts[i].is_outlier) {
      if (rejects) {
        rejects->push_back({records[i].image_id, RejectReason::kOutlier,
                            std::to_string(verdicts[i].vote_count) + " votes"});
      }
    } else {
      out.records.push_back(std::move(records[i]));
    }
  }
  out.provenance.clean = out.records.size();
  out.provenance.removed_outliers = out.provenance.single_factor - out.provenance.clean;
  return out;
}

CleanDataset ApplyOutlierRemoval(std::vector<MetadataRecord> records,
                                 std::span<const OutlierVerdict> verdicts) {
  const std::size_t n = records.size();
  return ApplyOutlierRemoval(std::move(records), verdicts, n);
}

LabelTally CountLabels(std::span<const MetadataRecord> records) {
  LabelTally tally{};
  for (const auto& r : records) {
    Require(r.labels.size() == 1 && r.labels[0] != DiseaseLabel::kPneumonia, ErrorKind::kData,
            "record " + r.image_id + " is not a clean single-label record");
    ++tally[LabelIndex(r.labels[0])];
  }
  return tally;
}

PipelineResult RunMetadataPipeline(std::istream& in, const DetectorConfig& cfg) {
  ParsedMetadata parsed = ParseMetadataCsv(in);
  LabelCleaning cleaned = CleanLabels(std::move(parsed.records));

  PipelineResult result;
  result.rejects = std::move(parsed.rejects);
  result.rejects.insert(result.rejects.end(), cleaned.rejects.begin(), cleaned.rejects.end());
  if (cleaned.records.empty()) {
    result.dataset.provenance.raw = parsed.rows;
    return result;
  }
  const FeatureMatrix features = BuildFeatures(cleaned.records);
  result.fusion = RunFusion(features, cfg);
  result.dataset = ApplyOutlierRemoval(std::move(cleaned.records), result.fusion.verdicts,
                                       parsed.rows, &result.rejects);
  return result;
}

void WriteCleanCsv(std::ostream& out, std::span<const MetadataRecord> records) {
  out << "image_id,label,age,gender\n";
  for (const auto& r : records) {
    Require(r.labels.size() == 1, ErrorKind::kData,
            "record " + r.image_id + " does not carry exactly one label");
    out << CsvEscape(r.image_id) << ',' << CsvEscape(LabelName(r.labels[0])) << ',' << r.age
        << ',' << r.gender << '\n';
  }
}

void WriteRejectsCsv(std::ostream& out, std::span<const Reject> rejects) {
  out << "image_id,reason,detail\n";
  for (const auto& r : rejects) {
    out << CsvEscape(r.image_id) << ',' << RejectReasonName(r.reason) << ','
        << CsvEscape(r.detail) << '\n';
  }
}

void WriteProvenanceJson(std::ostream& out, const Provenance& p) {
  nlohmann::ordered_json doc;
  doc["raw"] = p.raw;
  doc["single_factor"] = p.single_factor;
  doc["clean"] = p.clean;
  doc["removed_outliers"] = p.removed_outliers;
  out << doc.dump(2) << '\n';
}

void WriteLabelCountsCsv(std::ostream& out, const LabelTally& tally) {
  out << "label,count\n";
  std::uint64_t total = 0;
  for (DiseaseLabel label : RetainedLabels()) {
    out << CsvEscape(LabelName(label)) << ',' << tally[LabelIndex(label)] << '\n';
    total += tally[LabelIndex(label)];
  }
  out << "Total," << total << '\n';
}

std::vector<MetadataRecord> ReadCleanCsv(std::istream& in) {
  CsvReader reader(in);
  const auto header = reader.Next();
  if (!header) return {};
  Require(*header == CsvRow{"image_id", "label", "age", "gender"}, ErrorKind::kSchema,
          "clean CSV header must be image_id,label,age,gender");
  std::vector<MetadataRecord> records;
  while (auto row = reader.Next()) {
    const std::string where = "clean CSV line " + std::to_string(reader.line());
    Require(row->size() == 4, ErrorKind::kData, where + ": expected 4 fields");
    MetadataRecord r;
    r.image_id = (*row)[0];
    const auto label = ParseLabel((*row)[1]);
    Require(label && *label != DiseaseLabel::kPneumonia, ErrorKind::kData,
            where + ": label '" + (*row)[1] + "' is not a retained class");
    r.labels = {*label};
    const auto age = LeadingInteger((*row)[2]);
    Require(age.has_value(), ErrorKind::kData, where + ": bad age");
    r.age = *age;
    Require((*row)[3] == "0" || (*row)[3] == "1", ErrorKind::kData, where + ": bad gender");
    r.gender = (*row)[3] == "1";
    records.push_back(std::move(r));
  }
  return records;
}

}  // namespace ofuse
