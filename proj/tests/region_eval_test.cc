// Copyright 2026 The Regionkit Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include "regionkit/region_eval.h"

#include <gtest/gtest.h>

#include "test_support.h"

namespace regionkit {
namespace {

ObjectRegionPair P(std::string object, std::vector<BBox> regions) {
  return ObjectRegionPair{std::move(object), std::move(regions), std::nullopt};
}

void ExpectAllRatios(const SampleMetrics& m, double p, double r, double f1) {
  for (const PrecisionRecall* pr : {&m.object, &m.region, &m.alignment}) {
    EXPECT_DOUBLE_EQ(pr->precision, p);
    EXPECT_DOUBLE_EQ(pr->recall, r);
    EXPECT_DOUBLE_EQ(pr->f1, f1);
  }
}

const BBox kA(0, 0, 10, 10);
const BBox kB(100, 100, 200, 300);
const BBox kC(500, 500, 600, 600);

TEST(ClassifyTaskTest, FourKinds) {
  const std::vector<ObjectRegionPair> sosr = {P("liver", {kA})};
  const std::vector<ObjectRegionPair> somr = {P("lung", {kA, kB})};
  const std::vector<ObjectRegionPair> mosr = {P("liver", {kA}), P("spleen", {kB})};
  const std::vector<ObjectRegionPair> momr = {P("liver", {kA, kC}), P("spleen", {kB})};
  EXPECT_EQ(ClassifyTask(sosr), TaskKind::kSingleObjectSingleRegion);
  EXPECT_EQ(ClassifyTask(somr), TaskKind::kSingleObjectMultiRegion);
  EXPECT_EQ(ClassifyTask(mosr), TaskKind::kMultiObjectSingleRegion);
  EXPECT_EQ(ClassifyTask(momr), TaskKind::kMultiObjectMultiRegion);
}

TEST(ClassifyTaskTest, RepeatedNameCountsAsOneObject) {
  const std::vector<ObjectRegionPair> ref = {P("Lung", {kA}), P(" lung ", {kB})};
  EXPECT_EQ(ClassifyTask(ref), TaskKind::kSingleObjectMultiRegion);
}

TEST(ClassifyTaskTest, EmptyReferenceIsAnError) {
  try {
    ClassifyTask({});
    FAIL();
  } catch (const EvalError& e) {
    EXPECT_EQ(e.kind(), EvalError::Kind::kEmptyReference);
  }
  EXPECT_THROW(EvalSample({}, {}), EvalError);
}

TEST(EvalSampleTest, PerfectPrediction) {
  const std::vector<ObjectRegionPair> ref = {P("liver", {kA}), P("spleen", {kB})};
  const SampleMetrics m = EvalSample(ref, ref);
  ExpectAllRatios(m, 1.0, 1.0, 1.0);
  EXPECT_EQ(m.mean_iou, 1.0);
  EXPECT_EQ(m.region_accuracy, std::nullopt);
}

TEST(EvalSampleTest, RightNameWrongPlace) {
  const std::vector<ObjectRegionPair> ref = {P("liver", {BBox(0, 0, 10, 10)})};
  const std::vector<ObjectRegionPair> pred = {P("liver", {BBox(5, 5, 15, 15)})};
  const SampleMetrics m = EvalSample(pred, ref);
  const double iou = 25.0 / 175.0;  // intersection 5x5, union 100 + 100 - 25
  EXPECT_DOUBLE_EQ(m.object.f1, 1.0);
  EXPECT_DOUBLE_EQ(m.region.f1, 0.0);
  EXPECT_DOUBLE_EQ(m.alignment.f1, 0.0);
  EXPECT_EQ(m.region_accuracy, 0.0);
  EXPECT_NEAR(m.mean_iou, iou, 1e-15);
}

TEST(EvalSampleTest, OneOfTwoFound) {
  const std::vector<ObjectRegionPair> ref = {P("liver", {kA}), P("spleen", {kB})};
  const std::vector<ObjectRegionPair> pred = {P("spleen", {kB})};
  const SampleMetrics m = EvalSample(pred, ref);
  ExpectAllRatios(m, 1.0, 0.5, 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(m.mean_iou, 0.5);
  EXPECT_EQ(m.predicted, 1u);
  EXPECT_EQ(m.expected, 2u);
}

TEST(EvalSampleTest, ExtraPredictionLowersPrecision) {
  const std::vector<ObjectRegionPair> ref = {P("liver", {kA})};
  const std::vector<ObjectRegionPair> pred = {P("liver", {kA}), P("tumor", {kC})};
  const SampleMetrics m = EvalSample(pred, ref);
  ExpectAllRatios(m, 0.5, 1.0, 2.0 / 3.0);
  EXPECT_EQ(m.region_accuracy, 1.0);
  EXPECT_DOUBLE_EQ(m.mean_iou, 0.5);
}

TEST(EvalSampleTest, SwappedNamesHitRegionsOnly) {
  const std::vector<ObjectRegionPair> ref = {P("liver", {kA}), P("spleen", {kB})};
  const std::vector<ObjectRegionPair> pred = {P("spleen", {kA}), P("liver", {kB})};
  const SampleMetrics m = EvalSample(pred, ref);
  EXPECT_DOUBLE_EQ(m.region.f1, 1.0);
  EXPECT_DOUBLE_EQ(m.object.f1, 0.0);
  EXPECT_DOUBLE_EQ(m.alignment.f1, 0.0);
}

TEST(EvalSampleTest, EmptyPrediction) {
  const std::vector<ObjectRegionPair> ref = {P("liver", {kA})};
  const SampleMetrics m = EvalSample({}, ref);
  ExpectAllRatios(m, 0.0, 0.0, 0.0);
  EXPECT_EQ(m.mean_iou, 0.0);
  EXPECT_EQ(m.region_accuracy, 0.0);
}

TEST(EvalSampleTest, ThresholdIsInclusive) {
  // IoU exactly 0.5: [0,0,10,10] vs [0,0,10,20] -> 100 / 200.
  const std::vector<ObjectRegionPair> ref = {P("a", {BBox(0, 0, 10, 20)})};
  const std::vector<ObjectRegionPair> pred = {P("a", {BBox(0, 0, 10, 10)})};
  EXPECT_DOUBLE_EQ(EvalSample(pred, ref).region.f1, 1.0);
  EvalOptions strict;
  strict.iou_threshold = 0.51;
  EXPECT_DOUBLE_EQ(EvalSample(pred, ref, strict).region.f1, 0.0);
}

TEST(EvalSampleTest, SynonymsAndCaseNormalize) {
  const std::vector<ObjectRegionPair> ref = {P("cardiac silhouette", {kA})};
  const std::vector<ObjectRegionPair> pred = {P("  The   HEART ", {kA})};
  EXPECT_DOUBLE_EQ(EvalSample(pred, ref).object.f1, 0.0);
  EvalOptions options;
  options.normalizer = ObjectNormalizer(
      std::unordered_map<std::string, std::string>{{"the heart", "Cardiac Silhouette"}});
  EXPECT_DOUBLE_EQ(EvalSample(pred, ref, options).alignment.f1, 1.0);
}

TEST(AggregateTest, MacroMeanAndCounts) {
  const std::vector<ObjectRegionPair> ref = {P("liver", {kA})};
  const std::vector<ObjectRegionPair> miss = {P("liver", {kC})};
  const std::vector<SampleMetrics> samples = {EvalSample(miss, ref), EvalSample(ref, ref)};
  const CorpusMetrics c = Aggregate(samples);
  EXPECT_DOUBLE_EQ(c.overall.region.f1, 0.5);
  EXPECT_DOUBLE_EQ(c.overall.object.f1, 1.0);
  EXPECT_EQ(c.overall.samples, 2u);
  EXPECT_EQ(c.overall.detected_regions, 1u);
  EXPECT_EQ(c.overall.region_accuracy, 0.5);
  ASSERT_EQ(c.by_kind.size(), 1u);
  EXPECT_EQ(c.by_kind.begin()->first, TaskKind::kSingleObjectSingleRegion);
}

TEST(AggregateTest, SingleSampleIsIdentity) {
  const std::vector<ObjectRegionPair> ref = {P("liver", {kA}), P("spleen", {kB})};
  const std::vector<ObjectRegionPair> pred = {P("spleen", {kB})};
  const SampleMetrics s = EvalSample(pred, ref);
  const CorpusMetrics c = Aggregate(std::vector<SampleMetrics>{s});
  EXPECT_EQ(c.overall.alignment.f1, s.alignment.f1);
  EXPECT_EQ(c.overall.mean_iou, s.mean_iou);
  EXPECT_EQ(c.overall.region_accuracy, std::nullopt);
  EXPECT_THROW(Aggregate({}), EvalError);
}

TEST(EvalSampleTest, RandomPerfectPredictionsScoreOne) {
  testing::Rng rng(8);
  for (int i = 0; i < 300; ++i) {
    std::vector<ObjectRegionPair> ref;
    const int objects = testing::Uniform(rng, 1, 3);
    for (int o = 0; o < objects; ++o) {
      std::vector<BBox> boxes;
      const int n = testing::Uniform(rng, 1, 3);
      for (int k = 0; k < n; ++k) boxes.push_back(testing::RandomBox(rng));
      ref.push_back(P("obj" + std::to_string(o), boxes));
    }
    const SampleMetrics m = EvalSample(ref, ref);
    ExpectAllRatios(m, 1.0, 1.0, 1.0);
    ASSERT_EQ(m.mean_iou, 1.0);
  }
}

}  // namespace
}  // namespace regionkit
