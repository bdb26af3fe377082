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
// regionkit command line: eval, parse, forge, cot.
//
// Options resolve as flag > --config file > REGIONKIT_* environment > default.
#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "regionkit/commands.h"

int main(int argc, char** argv) {
  regionkit::RunConfig config;
  std::string mode = "lenient";

  CLI::App app{"Region-grounded evaluation and data tools"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Read options from a key=value file");
  app.option_defaults()->always_capture_default();

  app.add_option("-i,--input", config.input, "Input file (JSONL, or manifest for forge)")
      ->envname("REGIONKIT_INPUT");
  app.add_option("-o,--output", config.output, "Output file (default stdout)")
      ->envname("REGIONKIT_OUTPUT");
  app.add_option("--errors", config.errors, "Per-record error file (JSONL)")
      ->envname("REGIONKIT_ERRORS");
  app.add_option("--task", config.task, "Task override for eval")
      ->envname("REGIONKIT_TASK");
  app.add_option("--iou-threshold", config.iou_threshold, "IoU needed for a region hit")
      ->envname("REGIONKIT_IOU_THRESHOLD");
  app.add_option("--mode", mode, "Markup parsing mode")
      ->check(CLI::IsMember({"strict", "lenient"}))
      ->envname("REGIONKIT_MODE");
  app.add_option("--lang", config.language, "Default language: en, zh or mixed")
      ->envname("REGIONKIT_LANG");
  app.add_option("--synonyms", config.synonyms, "JSON object mapping object names")
      ->envname("REGIONKIT_SYNONYMS");
  app.add_option("-j,--jobs", config.jobs, "Worker threads / in-flight requests")
      ->envname("REGIONKIT_JOBS");
  app.add_option("--seed", config.seed, "Template selection seed")
      ->envname("REGIONKIT_SEED");
  app.add_option("--templates", config.templates, "Template file or directory")
      ->envname("REGIONKIT_TEMPLATES");
  app.add_option("--lexicon", config.lexicon, "Organ lexicon JSON")
      ->envname("REGIONKIT_LEXICON");
  app.add_option("--prompts", config.prompts, "Prompt JSON for cot")
      ->envname("REGIONKIT_PROMPTS");
  app.add_option("--endpoint", config.endpoint, "Model or segmenter service URL")
      ->envname("REGIONKIT_ENDPOINT");
  app.add_option("--mock", config.mock, "Scripted model responses (JSON)")
      ->envname("REGIONKIT_MOCK");
  app.add_option("--timeout-ms", config.timeout_ms, "Per-request timeout")
      ->envname("REGIONKIT_TIMEOUT_MS");
  app.add_option("--retries", config.retries, "Retries per request")
      ->envname("REGIONKIT_RETRIES");
  app.add_option("--min-area", config.min_area, "Smallest mask component kept")
      ->envname("REGIONKIT_MIN_AREA");

  using Runner = int (*)(const regionkit::RunConfig&, std::ostream&, std::ostream&);
  const std::map<std::string, std::pair<std::string, Runner>> commands = {
      {"eval", {"Score predictions against references", regionkit::RunEval}},
      {"parse", {"Dump the object-region pairs of each line", regionkit::RunParse}},
      {"forge", {"Build instruction data from masks and reports", regionkit::RunForge}},
      {"cot", {"Run two-stage regional reasoning", regionkit::RunCot}},
  };
  for (const auto& [name, entry] : commands) {
    app.add_subcommand(name, entry.first)->fallthrough();
  }

  CLI11_PARSE(app, argc, argv);
  config.mode = mode == "strict" ? regionkit::ParseMode::kStrict
                                 : regionkit::ParseMode::kLenient;
  try {
    regionkit::ValidateRunConfig(config);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  for (const auto& [name, entry] : commands) {
    if (app.got_subcommand(name)) return entry.second(config, std::cout, std::cerr);
  }
  return 2;
}
