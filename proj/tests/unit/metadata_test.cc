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

#include <algorithm>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "json.hpp"
#include "ofuse/error.h"
#include "ofuse/metadata/csv.h"
#include "ofuse/metadata/image.h"
#include "ofuse/metadata/label.h"
#include "ofuse/metadata/records.h"
#include "ofuse/numeric/rng.h"
#include "ofuse/outlier/fusion.h"

namespace ofuse {
namespace {

const char* const kHeader =
    "Image Index,Finding Labels,Follow-up #,Patient ID,Patient Age,Patient Gender,"
    "View Position\n";

std::string FixturePath() { return std::string(OFUSE_TEST_DATA_DIR) + "/metadata_sample.csv"; }

MetadataRecord Record(std::string id, std::vector<DiseaseLabel> labels, int age = 40,
                      int gender = 0) {
  MetadataRecord r;
  r.image_id = std::move(id);
  r.labels = std::move(labels);
  r.age = age;
  r.gender = gender;
  return r;
}

// --- CSV -------------------------------------------------------------------

TEST(CsvTest, QuotedFieldsAndLineEndings) {
  std::istringstream in(
      "\xEF\xBB\xBF"
      "a,\"b,c\",\"say \"\"hi\"\"\"\r\n"
      "\n"
      "\"multi\nline\",,x\n"
      "last,row");
  CsvReader reader(in);
  EXPECT_EQ(*reader.Next(), (CsvRow{"a", "b,c", "say \"hi\""}));
  EXPECT_EQ(*reader.Next(), (CsvRow{"multi\nline", "", "x"}));
  EXPECT_EQ(reader.line(), 3u);
  EXPECT_EQ(*reader.Next(), (CsvRow{"last", "row"}));
  EXPECT_EQ(reader.line(), 5u);
  EXPECT_FALSE(reader.Next().has_value());
}

TEST(CsvTest, UnterminatedQuoteIsSchemaError) {
  std::istringstream in("a,\"open\n");
  CsvReader reader(in);
  try {
    reader.Next();
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kSchema);
  }
}

TEST(CsvTest, EscapeRoundTrips) {
  for (std::string field : {"plain", "a,b", "q\"uote", "line\nbreak", ""}) {
    std::istringstream in(CsvEscape(field) + ",end\n");
    CsvReader reader(in);
    EXPECT_EQ(*reader.Next(), (CsvRow{field, "end"}));
  }
}

// --- parsing ---------------------------------------------------------------

TEST(ParseTest, SchemaExamples) {
  std::istringstream in(std::string(kHeader) +
                        "x.png,Cardiomegaly|Emphysema,0,1,58,M,PA\n"
                        "y.png,No Finding,3,2,063Y,F,AP\n");
  const ParsedMetadata p = ParseMetadataCsv(in);
  ASSERT_EQ(p.records.size(), 2u);
  EXPECT_TRUE(p.rejects.empty());
  EXPECT_EQ(p.records[0].labels,
            (std::vector<DiseaseLabel>{DiseaseLabel::kCardiomegaly, DiseaseLabel::kEmphysema}));
  EXPECT_EQ(p.records[0].gender, 1);
  EXPECT_EQ(p.records[0].age, 58);
  EXPECT_EQ(p.records[1].age, 63);
  EXPECT_EQ(p.records[1].gender, 0);
  EXPECT_EQ(p.records[1].labels, (std::vector<DiseaseLabel>{DiseaseLabel::kNoFinding}));
  using Field = std::pair<std::string, std::string>;
  EXPECT_EQ(p.records[1].dropped_raw,
            (std::vector<Field>{{"Follow-up #", "3"}, {"Patient ID", "2"}, {"View Position", "AP"}}));
}

TEST(ParseTest, MissingColumnIsNamed) {
  std::istringstream in("Image Index,Finding Labels,Patient Gender\nx.png,Mass,M\n");
  try {
    ParseMetadataCsv(in);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kSchema);
    EXPECT_NE(std::string(e.what()).find("Patient Age"), std::string::npos);
  }
}

TEST(ParseTest, BadRowsBecomeRejects) {
  std::istringstream in(std::string(kHeader) +
                        "a.png,Mass,0,1,unknown,M,PA\n"
                        "b.png,Mass,0,1,40,X,PA\n"
                        "c.png,Flu,0,1,40,M,PA\n"
                        "d.png,Mass,0,1,412,M,PA\n");
  const ParsedMetadata p = ParseMetadataCsv(in);
  EXPECT_EQ(p.rows, 4u);
  ASSERT_EQ(p.records.size(), 1u);
  EXPECT_EQ(p.records[0].age, 412);  // implausible but numeric
  ASSERT_EQ(p.rejects.size(), 3u);
  for (const Reject& r : p.rejects) EXPECT_EQ(r.reason, RejectReason::kParseError);
  EXPECT_EQ(p.rejects[0].image_id, "a.png");
  EXPECT_NE(p.rejects[0].detail.find("line 2"), std::string::npos);
}

// --- label cleaning --------------------------------------------------------

TEST(CleanLabelsTest, PneumoniaRemovedBeforeSingleFactorFilter) {
  std::vector<MetadataRecord> in = {
      Record("a", {DiseaseLabel::kConsolidation}),
      Record("b", {DiseaseLabel::kEffusion, DiseaseLabel::kMass}),
      Record("c", {DiseaseLabel::kPneumonia}),
      Record("d", {DiseaseLabel::kEffusion, DiseaseLabel::kPneumonia}),
  };
  const LabelCleaning out = CleanLabels(in);
  ASSERT_EQ(out.records.size(), 2u);
  EXPECT_EQ(out.records[0].image_id, "a");
  EXPECT_EQ(out.records[1].image_id, "d");
  EXPECT_EQ(out.records[1].labels, (std::vector<DiseaseLabel>{DiseaseLabel::kEffusion}));
  ASSERT_EQ(out.rejects.size(), 2u);
  EXPECT_EQ(out.rejects[0].reason, RejectReason::kMultiFactor);
  EXPECT_EQ(out.rejects[1].reason, RejectReason::kPneumoniaOnly);
}

// --- features --------------------------------------------------------------

TEST(FeaturesTest, PopulationZScore) {
  // Mean 46, population standard deviation 17.
  std::vector<MetadataRecord> records;
  for (int age : {58, 9, 46, 52, 54, 57}) {
    records.push_back(Record("r", {DiseaseLabel::kMass}, age, age % 2));
  }
  const FeatureMatrix x = BuildFeatures(records);
  ASSERT_EQ(x.features(), 2u);
  EXPECT_NEAR(x(0, 0), 12.0 / 17.0, 1e-15);
  EXPECT_NEAR(x(0, 0), 0.70588, 1e-5);
  EXPECT_EQ(x(0, 1), 0.0);
  EXPECT_EQ(x(1, 1), 1.0);
}

TEST(FeaturesTest, ConstantAgesAndEmptyInput) {
  const std::vector<MetadataRecord> same(5, Record("r", {DiseaseLabel::kMass}, 33, 1));
  const FeatureMatrix x = BuildFeatures(same);
  for (std::size_t i = 0; i < 5; ++i) EXPECT_EQ(x(i, 0), 0.0);
  try {
    BuildFeatures(std::vector<MetadataRecord>{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_STREQ(e.what(), "no records");
  }
}

// --- removal and counts ----------------------------------------------------

TEST(RemovalTest, ContaminationArithmetic) {
  RngStream rng(5);
  std::vector<MetadataRecord> records;
  std::vector<double> scores;
  for (int i = 0; i < 100; ++i) {
    records.push_back(Record(std::to_string(i), {DiseaseLabel(i % 14)}));
    scores.push_back(rng.Uniform());
  }
  std::array<FlagVector, kDetectorCount> votes;
  for (auto& v : votes) v = ThresholdByContamination(scores, 0.10);
  const auto verdicts = FuseVotes(votes);
  std::vector<Reject> rejects;
  const CleanDataset ds = ApplyOutlierRemoval(records, verdicts, 120, &rejects);
  EXPECT_EQ(ds.records.size(), 90u);
  EXPECT_EQ(ds.provenance.raw, 120u);
  EXPECT_EQ(ds.provenance.single_factor, 100u);
  EXPECT_EQ(ds.provenance.clean, 90u);
  EXPECT_EQ(ds.provenance.removed_outliers, 10u);
  EXPECT_EQ(rejects.size(), 10u);
  for (const Reject& r : rejects) EXPECT_EQ(r.reason, RejectReason::kOutlier);

  const LabelTally tally = CountLabels(ds.records);
  EXPECT_EQ(std::accumulate(tally.begin(), tally.end(), std::uint64_t{0}), 90u);
}

TEST(RemovalTest, EmptyAndMisaligned) {
  const CleanDataset empty = ApplyOutlierRemoval({}, std::span<const OutlierVerdict>{});
  EXPECT_TRUE(empty.records.empty());
  const LabelTally zeros = CountLabels(empty.records);
  EXPECT_TRUE(std::all_of(zeros.begin(), zeros.end(), [](auto c) { return c == 0; }));
  try {
    ApplyOutlierRemoval({Record("a", {DiseaseLabel::kMass})}, std::span<const OutlierVerdict>{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kShape);
  }
}

// --- full pipeline on the fixture ------------------------------------------

struct FixtureRun {
  PipelineResult result;
  std::string clean_csv, rejects_csv, provenance;
};

FixtureRun RunFixture() {
  std::ifstream in(FixturePath(), std::ios::binary);
  FixtureRun run{RunMetadataPipeline(in, DetectorConfig{}), {}, {}, {}};
  std::ostringstream a, b, c;
  WriteCleanCsv(a, run.result.dataset.records);
  WriteRejectsCsv(b, run.result.rejects);
  WriteProvenanceJson(c, run.result.dataset.provenance);
  run.clean_csv = a.str();
  run.rejects_csv = b.str();
  run.provenance = c.str();
  return run;
}

TEST(PipelineTest, FixtureStageCounts) {
  const FixtureRun run = RunFixture();
  const Provenance& p = run.result.dataset.provenance;
  // Tallies from the fixture generator: 1 parse error, 10 Pneumonia-only and
  // 20 multi-label rows out of 200.
  EXPECT_EQ(p.raw, 200u);
  EXPECT_EQ(p.single_factor, 169u);
  EXPECT_GE(p.single_factor, p.clean);
  EXPECT_EQ(p.clean + p.removed_outliers, p.single_factor);
  std::map<RejectReason, std::size_t> by_reason;
  for (const Reject& r : run.result.rejects) ++by_reason[r.reason];
  EXPECT_EQ(by_reason[RejectReason::kParseError], 1u);
  EXPECT_EQ(by_reason[RejectReason::kPneumoniaOnly], 10u);
  EXPECT_EQ(by_reason[RejectReason::kMultiFactor], 20u);
  EXPECT_EQ(by_reason[RejectReason::kOutlier], p.removed_outliers);

  const LabelTally tally = CountLabels(run.result.dataset.records);
  EXPECT_EQ(std::accumulate(tally.begin(), tally.end(), std::uint64_t{0}), p.clean);

  // The age-412 row is caught by the detectors.
  const auto it = std::find_if(run.result.rejects.begin(), run.result.rejects.end(),
                               [](const Reject& r) { return r.image_id == "00000020_000.png"; });
  ASSERT_NE(it, run.result.rejects.end());
  EXPECT_EQ(it->reason, RejectReason::kOutlier);
}

TEST(PipelineTest, OutputsAreByteStable) {
  const FixtureRun a = RunFixture(), b = RunFixture();
  EXPECT_EQ(a.clean_csv, b.clean_csv);
  EXPECT_EQ(a.rejects_csv, b.rejects_csv);
  EXPECT_EQ(a.provenance, b.provenance);
  EXPECT_EQ(a.clean_csv.substr(0, 26), "image_id,label,age,gender\n");
  const auto doc = nlohmann::ordered_json::parse(a.provenance);
  std::vector<std::string> keys;
  for (const auto& [key, value] : doc.items()) keys.push_back(key);
  EXPECT_EQ(keys, (std::vector<std::string>{"raw", "single_factor", "clean", "removed_outliers"}));
}

TEST(PipelineTest, CleanCsvRoundTrips) {
  const FixtureRun run = RunFixture();
  std::istringstream in(run.clean_csv);
  const auto records = ReadCleanCsv(in);
  ASSERT_EQ(records.size(), run.result.dataset.records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    EXPECT_EQ(records[i].image_id, run.result.dataset.records[i].image_id);
    EXPECT_EQ(records[i].labels, run.result.dataset.records[i].labels);
    EXPECT_EQ(records[i].age, run.result.dataset.records[i].age);
  }
  std::istringstream empty("");
  EXPECT_TRUE(ReadCleanCsv(empty).empty());
}

TEST(LabelTest, NamesRoundTrip) {
  for (std::size_t i = 0; i <= kRetainedLabelCount; ++i) {
    EXPECT_EQ(ParseLabel(LabelName(DiseaseLabel(i))), DiseaseLabel(i));
  }
  EXPECT_EQ(ParseLabel("Pleural_Thickening"), DiseaseLabel::kPleuralThickening);
  EXPECT_FALSE(ParseLabel("Flu").has_value());
}

// --- image transforms ------------------------------------------------------

ImageArray RandomImage(RngStream& rng, std::size_t h, std::size_t w) {
  std::vector<double> px(h * w);
  for (double& v : px) v = rng.Uniform();
  return ImageArray(h, w, std::move(px));
}

TEST(AugmentTest, IdentityConfigIsExact) {
  RngStream rng(1);
  const ImageArray image = RandomImage(rng, 12, 9);
  AugmentConfig cfg;
  cfg.max_rotation_degrees = 0.0;
  cfg.min_scale = cfg.max_scale = 1.0;
  cfg.target_height = 12;
  cfg.target_width = 9;
  cfg.normalize = false;
  RngStream draws(2);
  EXPECT_EQ(Augment(image, cfg, draws), image);
}

TEST(AugmentTest, ConstantImageStaysConstant) {
  const ImageArray image(40, 40, 0.3);
  AugmentConfig cfg;
  cfg.target_height = cfg.target_width = 32;
  cfg.normalize = false;
  RngStream rng(3);
  for (int i = 0; i < 10; ++i) {
    const ImageArray out = Augment(image, cfg, rng);
    for (double v : out.pixels()) EXPECT_NEAR(v, 0.3, 1e-15);
  }
}

TEST(AugmentTest, ResizesToTarget) {
  const ImageArray big(1024, 1024, 0.5);
  AugmentConfig cfg;
  RngStream rng(4);
  const ImageArray out = Augment(big, cfg, rng);
  EXPECT_EQ(out.height(), 224u);
  EXPECT_EQ(out.width(), 224u);
  cfg.target_width = 0;
  try {
    Augment(big, cfg, rng);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kDomain);
  }
}

TEST(AugmentTest, DeterministicGivenStream) {
  RngStream gen(5);
  const ImageArray image = RandomImage(gen, 30, 30);
  AugmentConfig cfg;
  cfg.target_height = cfg.target_width = 24;
  cfg.normalization = FitNormalization(std::vector<ImageArray>{image});
  RngStream a(9), b(9);
  EXPECT_EQ(Augment(image, cfg, a), Augment(image, cfg, b));
}

TEST(AugmentTest, BilinearResizeOnRamp) {
  // A linear ramp is reproduced exactly away from the clamped border.
  std::vector<double> px(8 * 8);
  for (std::size_t y = 0; y < 8; ++y)
    for (std::size_t x = 0; x < 8; ++x) px[y * 8 + x] = double(x) / 7.0;
  const ImageArray out = ResizeBilinear(ImageArray(8, 8, px), 4, 4);
  for (std::size_t x = 0; x < 4; ++x) EXPECT_NEAR(out.at(2, x), (2.0 * x + 0.5) / 7.0, 1e-15);
}

TEST(AugmentTest, NormalizationUsesPopulationMoments) {
  const std::vector<ImageArray> images = {ImageArray(1, 2, {0.0, 1.0}),
                                          ImageArray(1, 2, {0.0, 1.0})};
  const Normalization n = FitNormalization(images);
  EXPECT_DOUBLE_EQ(n.mean, 0.5);
  EXPECT_DOUBLE_EQ(n.stddev, 0.5);
}

}  // namespace
}  // namespace ofuse
