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
// Dataset forging: masks and names become region-to-text / text-to-region
// instruction samples, and free-text reports plus per-organ boxes become
// grounded reports.
#ifndef REGIONKIT_FORGE_H_
#define REGIONKIT_FORGE_H_

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "regionkit/geometry.h"
#include "regionkit/markup.h"

namespace regionkit {

class ForgeError : public std::runtime_error {
 public:
  enum class Kind {
    kMissingPlaceholderValue,
    kTemplateDirectionMismatch,
    kUnknownPlaceholder,
    kInvalidAnswer,
    kEmptyMask,
    kMissingTemplates,
    kBadTemplateFile,
    kBadLexiconFile,
  };

  ForgeError(Kind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

enum class Direction { kRegionToText, kTextToRegion };

std::string_view DirectionName(Direction direction);  // "r2t" / "t2r"
std::optional<Direction> ParseDirection(std::string_view name);

// Patterns may contain the placeholders {object} and {box}. A text-to-region
// answer must carry {box}; a region-to-text question must carry {box}.
struct Template {
  std::string id;
  Direction direction = Direction::kRegionToText;
  std::string question_pattern;
  std::string answer_pattern;
};

// Throws ForgeError (kTemplateDirectionMismatch or kUnknownPlaceholder).
void ValidateTemplate(const Template& t);

struct FilledTemplate {
  std::string question;
  std::string answer;
};

// {object} is substituted verbatim and {box} by the canonical serialization
// of every box. An answer that carries boxes must parse in strict mode.
FilledTemplate FillTemplate(const Template& t, std::string_view object_text,
                            std::span<const BBox> boxes);

// Loads every *.jsonl file in `dir` (sorted by name), or a single file.
// Records: {"id", "direction": "r2t"|"t2r", "question", "answer"}.
std::vector<Template> LoadTemplates(const std::filesystem::path& path);

struct ForgedSample {
  std::string id;
  std::string image;
  std::string question;
  std::string answer;
  Direction direction = Direction::kRegionToText;
  std::string template_id;
  std::string label;
  std::vector<BBox> boxes;
};

struct RegionSampleSpec {
  std::string id;     // prefix for sample ids, mixed into the template choice
  std::string image;  // copied into the samples
  std::string label;
  int image_width = 0;   // defaults to the mask width when 0
  int image_height = 0;  // defaults to the mask height when 0
  int min_area = kDefaultMinComponentArea;
};

// One region-to-text and one text-to-region sample covering every component
// of the mask. Template choice is a pure function of (seed, spec.id).
std::vector<ForgedSample> ForgeRegionSamples(const MaskGrid& mask,
                                             const RegionSampleSpec& spec,
                                             std::span<const Template> templates,
                                             std::uint64_t seed);

// Canonical organ name -> surface forms, in canonical anatomical order.
struct OrganLexicon {
  struct Entry {
    std::string organ;
    std::vector<std::string> forms;
  };
  std::vector<Entry> entries;

  std::vector<std::string> Organs() const;
};

// The twelve standardized chest structures, with English and Chinese forms.
OrganLexicon DefaultChestLexicon();

// JSON array of {"organ": ..., "forms": [...]}.
OrganLexicon LoadLexicon(const std::filesystem::path& path);

inline constexpr std::string_view kOtherOrgan = "other";

// Organ -> description, in order of first mention.
using OrganDescriptions = std::vector<std::pair<std::string, std::string>>;

// Splits on '.' and '。' and files every sentence under each organ whose
// surface form it contains; unmatched sentences go under "other".
OrganDescriptions SegmentReport(std::string_view report,
                                const OrganLexicon& lexicon);

std::vector<std::string> SplitSentences(std::string_view report);

using OrganRegions = std::vector<std::pair<std::string, std::vector<BBox>>>;

struct AssembledReport {
  GroundedDocument document;
  std::vector<std::string> warnings;
};

// Emits <ref>organ</ref><box>..</box> followed by the description for every
// organ with both, and the bare description for organs without boxes. Organs
// named in `canonical_order` come first in that order, the rest keep their
// description order. Organs with boxes but no description only warn.
AssembledReport AssembleGroundedReport(
    const OrganDescriptions& descriptions, const OrganRegions& regions,
    std::span<const std::string> canonical_order = {});

// External report segmenter. Implementations throw on failure.
class SegmenterClient {
 public:
  virtual ~SegmenterClient() = default;
  virtual OrganDescriptions Segment(std::string_view report,
                                    std::span<const std::string> organs) = 0;
};

// POSTs {"report", "organ_list"} as JSON and expects an object mapping organ
// to description.
class HttpSegmenterClient : public SegmenterClient {
 public:
  HttpSegmenterClient(std::string url, std::chrono::milliseconds timeout);
  OrganDescriptions Segment(std::string_view report,
                            std::span<const std::string> organs) override;

 private:
  std::string url_;
  std::chrono::milliseconds timeout_;
};

struct SegmentOutcome {
  OrganDescriptions descriptions;
  bool used_fallback = false;
  int attempts = 0;
  std::string error;  // last client error, if any
};

// Tries `client` up to 1 + retries times and falls back to SegmentReport.
SegmentOutcome SegmentWithFallback(std::string_view report,
                                   const OrganLexicon& lexicon,
                                   SegmenterClient* client, int retries);

}  // namespace regionkit

#endif  // REGIONKIT_FORGE_H_
