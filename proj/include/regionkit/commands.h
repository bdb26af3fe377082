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
// Batch workflows behind the regionkit command line. Each Run* function
// returns the process exit code: 0 on success, 1 when some records failed
// (details go to the error file), 2 when the run could not start.
#ifndef REGIONKIT_COMMANDS_H_
#define REGIONKIT_COMMANDS_H_

#include <cstdint>
#include <filesystem>
#include <ostream>
#include <string>

#include "regionkit/markup.h"

namespace regionkit {

struct RunConfig {
  std::string input;
  std::string output;  // empty: stdout
  std::string errors;  // empty: <output>.errors.jsonl, or stderr
  std::string task = "auto";
  double iou_threshold = 0.5;
  ParseMode mode = ParseMode::kLenient;
  std::string language = "en";
  std::string synonyms;
  int jobs = 1;
  std::uint64_t seed = 0;
  std::string templates;  // empty: shipped templates
  std::string lexicon;    // empty: built-in chest lexicon
  std::string prompts;    // empty: built-in prompts
  std::string endpoint;
  std::string mock;
  int timeout_ms = 30000;
  int retries = 1;
  int min_area = 4;
};

// Throws std::invalid_argument when a value is out of range.
void ValidateRunConfig(const RunConfig& config);

// Directory holding the shipped templates, lexicon, prompts and mock script.
std::filesystem::path DataDir();

int RunEval(const RunConfig& config, std::ostream& out, std::ostream& err);
int RunParse(const RunConfig& config, std::ostream& out, std::ostream& err);
int RunForge(const RunConfig& config, std::ostream& out, std::ostream& err);
int RunCot(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace regionkit

#endif  // REGIONKIT_COMMANDS_H_
