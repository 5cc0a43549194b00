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

#ifndef OFUSE_METADATA_RECORDS_H_
#define OFUSE_METADATA_RECORDS_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ofuse/metadata/label.h"
#include "ofuse/numeric/matrix.h"
#include "ofuse/outlier/fusion.h"

namespace ofuse {

struct MetadataRecord {
  std::string image_id;
  std::vector<DiseaseLabel> labels;  // sorted, no repeats
  int age = 0;
  int gender = 0;  // 0 female, 1 male
  // Every non-mandatory column as (header, original text), in file order.
  std::vector<std::pair<std::string, std::string>> dropped_raw;
};

enum class RejectReason { kParseError, kPneumoniaOnly, kMultiFactor, kOutlier };

// parse_error, pneumonia_only, multi_factor, outlier.
std::string_view RejectReasonName(RejectReason reason);

struct Reject {
  std::string image_id;
  RejectReason reason = RejectReason::kParseError;
  std::string detail;
};

struct ParsedMetadata {
  std::vector<MetadataRecord> records;
  std::vector<Reject> rejects;  // parse errors only
  std::size_t rows = 0;         // data rows read, accepted or not
};

// Reads NIH-style metadata. A missing mandatory column is a kSchema error
// naming it; a bad row becomes a parse_error reject. Age is the leading
// integer of its field; gender is M or F.
ParsedMetadata ParseMetadataCsv(std::istream& in);
ParsedMetadata ParseMetadataFile(const std::filesystem::path& path);

struct LabelCleaning {
  std::vector<MetadataRecord> records;  // exactly one label each
  std::vector<Reject> rejects;
};

// Drops Pneumonia from every label set first, then discards records left
// empty (pneumonia_only) or with several labels (multi_factor).
LabelCleaning CleanLabels(std::vector<MetadataRecord> records);

// Columns (z-scored age, gender). Age uses the population standard
// deviation of the input; zero variance gives an all-zero column.
FeatureMatrix BuildFeatures(std::span<const MetadataRecord> records);

struct Provenance {
  std::uint64_t raw = 0;
  std::uint64_t single_factor = 0;
  std::uint64_t clean = 0;
  std::uint64_t removed_outliers = 0;
};

struct CleanDataset {
  std::vector<MetadataRecord> records;
  Provenance provenance;
};

// Keeps records whose verdict is not an outlier. raw_rows defaults to the
// record count. Removed records are appended to rejects when given.
CleanDataset ApplyOutlierRemoval(std::vector<MetadataRecord> records,
                                 std::span<const OutlierVerdict> verdicts,
                                 std::size_t raw_rows, std::vector<Reject>* rejects = nullptr);
CleanDataset ApplyOutlierRemoval(std::vector<MetadataRecord> records,
                                 std::span<const OutlierVerdict> verdicts);

using LabelTally = std::array<std::uint64_t, kRetainedLabelCount>;

LabelTally CountLabels(std::span<const MetadataRecord> records);

struct PipelineResult {
  CleanDataset dataset;
  std::vector<Reject> rejects;  // parse, label and outlier rejects in that order
  FusionResult fusion;          // empty when no record survived cleaning
};

// parse -> clean labels -> features -> fusion -> removal.
PipelineResult RunMetadataPipeline(std::istream& in, const DetectorConfig& cfg);

// Output formats.
void WriteCleanCsv(std::ostream& out, std::span<const MetadataRecord> records);
void WriteRejectsCsv(std::ostream& out, std::span<const Reject> rejects);
void WriteProvenanceJson(std::ostream& out, const Provenance& provenance);
void WriteLabelCountsCsv(std::ostream& out, const LabelTally& tally);

// Reads the clean CSV back (single label per row).
std::vector<MetadataRecord> ReadCleanCsv(std::istream& in);

}  // namespace ofuse

#endif  // OFUSE_METADATA_RECORDS_H_
