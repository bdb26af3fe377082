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
#include "regionkit/corpus.h"

namespace regionkit {

std::string_view RecordTaskName(RecordTask task) {
  switch (task) {
    case RecordTask::kRegionToText:
      return "r2t";
    case RecordTask::kTextToRegion:
      return "t2r";
    case RecordTask::kGroundedReport:
      return "grounded_report";
    case RecordTask::kVqa:
      return "vqa";
    case RecordTask::kReport:
      return "report";
  }
  return "report";
}

std::optional<RecordTask> ParseRecordTask(std::string_view name) {
  if (name == "r2t") return RecordTask::kRegionToText;
  if (name == "t2r") return RecordTask::kTextToRegion;
  if (name == "grounded_report") return RecordTask::kGroundedReport;
  if (name == "vqa") return RecordTask::kVqa;
  if (name == "report") return RecordTask::kReport;
  return std::nullopt;
}

namespace {

std::string RequireString(const nlohmann::json& rec, const char* field) {
  if (!rec.contains(field)) {
    throw CorpusError(std::string("missing field \"") + field + "\"");
  }
  if (!rec.at(field).is_string()) {
    throw CorpusError(std::string("field \"") + field + "\" must be a string");
  }
  return rec.at(field).get<std::string>();
}

std::optional<std::string> OptionalString(const nlohmann::json& rec,
                                          const char* field) {
  if (!rec.contains(field) || rec.at(field).is_null()) return std::nullopt;
  if (!rec.at(field).is_string()) {
    throw CorpusError(std::string("field \"") + field + "\" must be a string");
  }
  return rec.at(field).get<std::string>();
}

}  // namespace

CorpusRecord ParseCorpusRecord(std::string_view line, Language default_language) {
  nlohmann::json rec;
  try {
    rec = nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    throw CorpusError(std::string("not valid JSON: ") + e.what());
  }
  if (!rec.is_object()) throw CorpusError("record is not a JSON object");

  CorpusRecord out;
  out.id = RequireString(rec, "id");
  const std::string task = RequireString(rec, "task");
  const auto parsed_task = ParseRecordTask(task);
  if (!parsed_task) throw CorpusError("unknown task \"" + task + "\"");
  out.task = *parsed_task;
  out.language = default_language;
  if (auto lang = OptionalString(rec, "language")) {
    const auto parsed = ParseLanguage(*lang);
    if (!parsed) throw CorpusError("unknown language \"" + *lang + "\"");
    out.language = *parsed;
  }
  out.image = OptionalString(rec, "image");
  out.question = OptionalString(rec, "question");
  out.prediction = RequireString(rec, "prediction");
  out.reference = RequireString(rec, "reference");
  if (rec.contains("closed") && !rec.at("closed").is_null()) {
    if (!rec.at("closed").is_boolean()) {
      throw CorpusError("field \"closed\" must be a boolean");
    }
    out.closed = rec.at("closed").get<bool>();
  }
  return out;
}

nlohmann::ordered_json CorpusRecordToJson(const CorpusRecord& record) {
  nlohmann::ordered_json j;
  j["id"] = record.id;
  j["task"] = RecordTaskName(record.task);
  j["language"] = record.language == Language::kChinese ? "zh" : "en";
  if (record.image) j["image"] = *record.image;
  if (record.question) j["question"] = *record.question;
  j["prediction"] = record.prediction;
  j["reference"] = record.reference;
  if (record.closed) j["closed"] = *record.closed;
  return j;
}

}  // namespace regionkit
