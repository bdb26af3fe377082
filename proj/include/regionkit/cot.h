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
// Two-stage regional chain-of-thought: ask the model for the critical
// regions first, then ask the actual question with those regions written
// into the prompt.
#ifndef REGIONKIT_COT_H_
#define REGIONKIT_COT_H_

#include <chrono>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "regionkit/markup.h"
#include "regionkit/text_metrics.h"
#include "regionkit/transport.h"

namespace regionkit {

// Prompt wording. {question} and {regions} are substituted.
struct CotPrompts {
  std::string detect;
  std::string answer;
};

CotPrompts DefaultCotPrompts(Language language);

// JSON object {"en": {"detect": ..., "answer": ...}, "zh": {...}}; languages
// missing from the file keep their defaults.
CotPrompts LoadCotPrompts(const std::filesystem::path& path, Language language);

std::string ComposeDetectPrompt(std::string_view question,
                                const CotPrompts& prompts);

// Region preamble followed by the question. `regions` must be non-empty.
std::string ComposeAnswerPrompt(std::string_view question,
                                const std::vector<ObjectRegionPair>& regions,
                                const CotPrompts& prompts);

struct CotOptions {
  CotPrompts prompts = DefaultCotPrompts(Language::kEnglish);
  int retries = 1;
};

struct CotTrace {
  std::string question;
  std::string image;
  std::string detect_prompt;
  std::string detect_response;
  std::vector<ObjectRegionPair> parsed_regions;
  std::vector<ParseDiagnostic> detect_diagnostics;
  std::string final_prompt;
  std::string final_response;
  bool fallback = false;  // stage 1 found no valid region
  bool failed = false;
  std::optional<TransportError::Kind> error_kind;
  std::string error;
  int detect_attempts = 0;
  int answer_attempts = 0;
  std::chrono::milliseconds detect_time{0};
  std::chrono::milliseconds answer_time{0};
};

// Runs both stages. Transport failures after retries are recorded in the
// returned trace (failed = true, error set) with everything gathered so far.
CotTrace RunRegionalCot(std::string_view question, std::string_view image,
                        ModelTransport& transport, const CotOptions& options);

nlohmann::ordered_json CotTraceToJson(const CotTrace& trace);

}  // namespace regionkit

#endif  // REGIONKIT_COT_H_
