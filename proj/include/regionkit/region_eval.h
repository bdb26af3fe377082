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
//
// Region-aligned evaluation of object-region predictions.
//
// Both sides are flattened into unit pairs (one per box) and matched
// one-to-one by maximum total IoU. Each matched pair is then scored on three
// levels:
//   object     the normalized object texts agree
//   region     IoU >= threshold
//   alignment  both of the above
// Precision divides by the number of predicted units N, recall by the number
// of reference units M.
#ifndef REGIONKIT_REGION_EVAL_H_
#define REGIONKIT_REGION_EVAL_H_

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "regionkit/markup.h"

namespace regionkit {

enum class TaskKind {
  kSingleObjectSingleRegion,
  kSingleObjectMultiRegion,
  kMultiObjectSingleRegion,
  kMultiObjectMultiRegion,
};

inline constexpr std::array<TaskKind, 4> kAllTaskKinds = {
    TaskKind::kSingleObjectSingleRegion, TaskKind::kSingleObjectMultiRegion,
    TaskKind::kMultiObjectSingleRegion, TaskKind::kMultiObjectMultiRegion};

std::string_view TaskKindName(TaskKind kind);

class EvalError : public std::invalid_argument {
 public:
  enum class Kind { kEmptyReference, kEmptyCorpus };

  EvalError(Kind kind, const std::string& what)
      : std::invalid_argument(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

// Object-text normalization: lowercase, trim, collapse whitespace, then an
// optional synonym lookup keyed on the normalized surface form.
class ObjectNormalizer {
 public:
  ObjectNormalizer() = default;
  explicit ObjectNormalizer(
      const std::unordered_map<std::string, std::string>& synonyms);

  std::string Normalize(std::string_view text) const;

 private:
  std::unordered_map<std::string, std::string> synonyms_;
};

struct PrecisionRecall {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;

  static PrecisionRecall FromCounts(std::size_t hits, std::size_t predicted,
                                    std::size_t expected);
};

struct SampleMetrics {
  TaskKind kind = TaskKind::kSingleObjectSingleRegion;
  PrecisionRecall object;
  PrecisionRecall region;
  PrecisionRecall alignment;
  double mean_iou = 0.0;
  // Present for single-object single-region references only.
  std::optional<double> region_accuracy;

  std::size_t predicted = 0;  // N, predicted unit pairs
  std::size_t expected = 0;   // M, reference unit pairs
  std::size_t detected_objects = 0;
  std::size_t detected_regions = 0;
  std::size_t aligned_pairs = 0;
};

struct EvalOptions {
  double iou_threshold = 0.5;
  ObjectNormalizer normalizer;
};

TaskKind ClassifyTask(std::span<const ObjectRegionPair> reference,
                      const ObjectNormalizer& normalizer = {});

SampleMetrics EvalSample(std::span<const ObjectRegionPair> prediction,
                         std::span<const ObjectRegionPair> reference,
                         const EvalOptions& options = {});

// Macro means of SampleMetrics fields. Counts are summed.
struct MetricsSummary {
  std::size_t samples = 0;
  PrecisionRecall object;
  PrecisionRecall region;
  PrecisionRecall alignment;
  double mean_iou = 0.0;
  std::optional<double> region_accuracy;  // over samples that define it
  std::size_t predicted = 0;
  std::size_t expected = 0;
  std::size_t detected_objects = 0;
  std::size_t detected_regions = 0;
  std::size_t aligned_pairs = 0;
};

struct CorpusMetrics {
  MetricsSummary overall;
  std::map<TaskKind, MetricsSummary> by_kind;  // only kinds that occur
};

// Sums run in input order, so the result depends only on the sequence of
// samples.
CorpusMetrics Aggregate(std::span<const SampleMetrics> samples);

}  // namespace regionkit

#endif  // REGIONKIT_REGION_EVAL_H_
