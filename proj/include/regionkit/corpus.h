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
// One-record-per-line corpus format:
//
//   {"id": "s1", "task": "t2r", "language": "en", "image": "x.png",
//    "prediction": "...", "reference": "...", "closed": true}
//
// task is one of r2t, t2r, grounded_report, vqa, report. language is en or
// zh. image, closed (vqa only) and question are optional; unknown fields are
// ignored.
#ifndef REGIONKIT_CORPUS_H_
#define REGIONKIT_CORPUS_H_

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "json.hpp"
#include "regionkit/text_metrics.h"

namespace regionkit {

enum class RecordTask { kRegionToText, kTextToRegion, kGroundedReport, kVqa, kReport };

std::string_view RecordTaskName(RecordTask task);
std::optional<RecordTask> ParseRecordTask(std::string_view name);

struct CorpusRecord {
  std::string id;
  RecordTask task = RecordTask::kReport;
  Language language = Language::kEnglish;
  std::optional<std::string> image;
  std::optional<std::string> question;
  std::string prediction;
  std::string reference;
  std::optional<bool> closed;
};

class CorpusError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Throws CorpusError on malformed lines or missing/invalid fields.
// `default_language` applies when the record has no language field.
CorpusRecord ParseCorpusRecord(std::string_view line,
                               Language default_language = Language::kEnglish);

nlohmann::ordered_json CorpusRecordToJson(const CorpusRecord& record);

}  // namespace regionkit

#endif  // REGIONKIT_CORPUS_H_
