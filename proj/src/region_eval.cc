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

#include <algorithm>

#include "regionkit/assignment.h"
#include "regionkit/utf8.h"

namespace regionkit {

namespace {

struct UnitPair {
  std::string object;  // normalized
  BBox box;
};

std::vector<UnitPair> Flatten(std::span<const ObjectRegionPair> pairs,
                              const ObjectNormalizer& normalizer) {
  std::vector<UnitPair> units;
  for (const ObjectRegionPair& p : pairs) {
    const std::string key = normalizer.Normalize(p.object);
    for (const BBox& b : p.regions) units.push_back(UnitPair{key, b});
  }
  return units;
}

// Running sums for one MetricsSummary.
struct Accumulator {
  std::size_t n = 0;
  double sums[10] = {};
  double accuracy_sum = 0.0;
  std::size_t accuracy_n = 0;
  MetricsSummary counts;

  void Add(const SampleMetrics& s) {
    const double values[10] = {
        s.object.precision,    s.object.recall,    s.object.f1,
        s.region.precision,    s.region.recall,    s.region.f1,
        s.alignment.precision, s.alignment.recall, s.alignment.f1,
        s.mean_iou};
    for (int i = 0; i < 10; ++i) sums[i] += values[i];
    if (s.region_accuracy) {
      accuracy_sum += *s.region_accuracy;
      ++accuracy_n;
    }
    counts.predicted += s.predicted;
    counts.expected += s.expected;
    counts.detected_objects += s.detected_objects;
    counts.detected_regions += s.detected_regions;
    counts.aligned_pairs += s.aligned_pairs;
    ++n;
  }

  MetricsSummary Finish() const {
    MetricsSummary out = counts;
    out.samples = n;
    const double d = static_cast<double>(n);
    out.object = {sums[0] / d, sums[1] / d, sums[2] / d};
    out.region = {sums[3] / d, sums[4] / d, sums[5] / d};
    out.alignment = {sums[6] / d, sums[7] / d, sums[8] / d};
    out.mean_iou = sums[9] / d;
    if (accuracy_n > 0) {
      out.region_accuracy = accuracy_sum / static_cast<double>(accuracy_n);
    }
    return out;
  }
};

}  // namespace

std::string_view TaskKindName(TaskKind kind) {
  switch (kind) {
    case TaskKind::kSingleObjectSingleRegion:
      return "single-object single-region";
    case TaskKind::kSingleObjectMultiRegion:
      return "single-object multi-region";
    case TaskKind::kMultiObjectSingleRegion:
      return "multi-object single-region";
    case TaskKind::kMultiObjectMultiRegion:
      return "multi-object multi-region";
  }
  return "unknown";
}

ObjectNormalizer::ObjectNormalizer(
    const std::unordered_map<std::string, std::string>& synonyms) {
  for (const auto& [surface, canonical] : synonyms) {
    synonyms_[utf8::NormalizeWhitespace(surface)] =
        utf8::NormalizeWhitespace(canonical);
  }
}

std::string ObjectNormalizer::Normalize(std::string_view text) const {
  std::string key = utf8::NormalizeWhitespace(text);
  if (auto it = synonyms_.find(key); it != synonyms_.end()) return it->second;
  return key;
}

PrecisionRecall PrecisionRecall::FromCounts(std::size_t hits,
                                            std::size_t predicted,
                                            std::size_t expected) {
  PrecisionRecall pr;
  if (predicted > 0) pr.precision = static_cast<double>(hits) / predicted;
  if (expected > 0) pr.recall = static_cast<double>(hits) / expected;
  if (pr.precision + pr.recall > 0.0) {
    pr.f1 = 2.0 * pr.precision * pr.recall / (pr.precision + pr.recall);
  }
  return pr;
}

TaskKind ClassifyTask(std::span<const ObjectRegionPair> reference,
                      const ObjectNormalizer& normalizer) {
  if (reference.empty()) {
    throw EvalError(EvalError::Kind::kEmptyReference, "reference is empty");
  }
  std::unordered_map<std::string, std::size_t> regions_per_object;
  for (const ObjectRegionPair& p : reference) {
    regions_per_object[normalizer.Normalize(p.object)] += p.regions.size();
  }
  const bool single_object = regions_per_object.size() == 1;
  const bool single_region =
      std::all_of(regions_per_object.begin(), regions_per_object.end(),
                  [](const auto& kv) { return kv.second == 1; });
  if (single_object) {
    return single_region ? TaskKind::kSingleObjectSingleRegion
                         : TaskKind::kSingleObjectMultiRegion;
  }
  return single_region ? TaskKind::kMultiObjectSingleRegion
                       : TaskKind::kMultiObjectMultiRegion;
}

SampleMetrics EvalSample(std::span<const ObjectRegionPair> prediction,
                         std::span<const ObjectRegionPair> reference,
                         const EvalOptions& options) {
  SampleMetrics m;
  m.kind = ClassifyTask(reference, options.normalizer);
  const std::vector<UnitPair> pred = Flatten(prediction, options.normalizer);
  const std::vector<UnitPair> ref = Flatten(reference, options.normalizer);
  m.predicted = pred.size();
  m.expected = ref.size();

  ScoreMatrix scores(pred.size(), ref.size());
  for (std::size_t i = 0; i < pred.size(); ++i) {
    for (std::size_t j = 0; j < ref.size(); ++j) {
      scores.set(i, j, Iou(pred[i].box, ref[j].box));
    }
  }
  const Assignment assignment = HungarianMatch(scores);

  double iou_sum = 0.0;
  for (const Match& match : assignment.matches) {
    const bool object_ok =
        pred[match.prediction].object == ref[match.ground_truth].object;
    const bool region_ok = match.score >= options.iou_threshold;
    m.detected_objects += object_ok;
    m.detected_regions += region_ok;
    m.aligned_pairs += object_ok && region_ok;
    iou_sum += match.score;
  }

  m.object = PrecisionRecall::FromCounts(m.detected_objects, m.predicted,
                                         m.expected);
  m.region = PrecisionRecall::FromCounts(m.detected_regions, m.predicted,
                                         m.expected);
  m.alignment =
      PrecisionRecall::FromCounts(m.aligned_pairs, m.predicted, m.expected);
  const std::size_t denom = std::max(m.predicted, m.expected);
  m.mean_iou = denom > 0 ? iou_sum / static_cast<double>(denom) : 0.0;
  if (m.kind == TaskKind::kSingleObjectSingleRegion) {
    const bool hit = !assignment.matches.empty() &&
                     assignment.matches.front().score >= options.iou_threshold;
    m.region_accuracy = hit ? 1.0 : 0.0;
  }
  return m;
}

CorpusMetrics Aggregate(std::span<const SampleMetrics> samples) {
  if (samples.empty()) {
    throw EvalError(EvalError::Kind::kEmptyCorpus, "no samples to aggregate");
  }
  Accumulator overall;
  std::map<TaskKind, Accumulator> per_kind;
  for (const SampleMetrics& s : samples) {
    overall.Add(s);
    per_kind[s.kind].Add(s);
  }
  CorpusMetrics out;
  out.overall = overall.Finish();
  for (const auto& [kind, acc] : per_kind) out.by_kind[kind] = acc.Finish();
  return out;
}

}  // namespace regionkit
