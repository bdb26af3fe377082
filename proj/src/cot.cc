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
#include "regionkit/cot.h"

#include <fstream>

namespace regionkit {

namespace {

constexpr std::string_view kQuestionSlot = "{question}";
constexpr std::string_view kRegionsSlot = "{regions}";

std::string Fill(std::string_view pattern, std::string_view question,
                 std::string_view regions) {
  std::string out;
  std::size_t pos = 0;
  while (pos < pattern.size()) {
    if (pattern.compare(pos, kQuestionSlot.size(), kQuestionSlot) == 0) {
      out.append(question);
      pos += kQuestionSlot.size();
    } else if (pattern.compare(pos, kRegionsSlot.size(), kRegionsSlot) == 0) {
      out.append(regions);
      pos += kRegionsSlot.size();
    } else {
      out.push_back(pattern[pos++]);
    }
  }
  return out;
}

std::string_view ErrorKindName(TransportError::Kind kind) {
  switch (kind) {
    case TransportError::Kind::kTimeout:
      return "TransportTimeout";
    case TransportError::Kind::kUnavailable:
      return "TransportUnavailable";
    case TransportError::Kind::kProtocol:
      return "TransportProtocol";
  }
  return "TransportError";
}

}  // namespace

CotPrompts DefaultCotPrompts(Language language) {
  if (language == Language::kChinese) {
    return CotPrompts{
        "请先检测图像中与下列问题相关的关键区域或异常区域。每个区域按"
        "<ref>名称</ref><box>[x1, y1, x2, y2]</box>的格式输出，坐标为归一化到"
        "[0, 1000)的整数，不要输出其他内容。\n问题：{question}",
        "检测到的区域：{regions}\n{question}"};
  }
  return CotPrompts{
      "First detect the critical or abnormal regions in this image that "
      "matter for the question below. Output each region as "
      "<ref>name</ref><box>[x1, y1, x2, y2]</box> with coordinates normalized "
      "to integers in [0, 1000), and output nothing else.\nQuestion: "
      "{question}",
      "Detected regions: {regions}\n{question}"};
}

CotPrompts LoadCotPrompts(const std::filesystem::path& path, Language language) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read prompt file " + path.string());
  const auto doc = nlohmann::json::parse(in);
  CotPrompts prompts = DefaultCotPrompts(language);
  const char* code = language == Language::kChinese ? "zh" : "en";
  if (doc.contains(code)) {
    const auto& entry = doc.at(code);
    prompts.detect = entry.value("detect", prompts.detect);
    prompts.answer = entry.value("answer", prompts.answer);
  }
  return prompts;
}

std::string ComposeDetectPrompt(std::string_view question,
                                const CotPrompts& prompts) {
  return Fill(prompts.detect, question, "");
}

std::string ComposeAnswerPrompt(std::string_view question,
                                const std::vector<ObjectRegionPair>& regions,
                                const CotPrompts& prompts) {
  std::string rendered;
  for (std::size_t i = 0; i < regions.size(); ++i) {
    if (i > 0) rendered.push_back(' ');
    rendered.append(SerializePair(regions[i]));
  }
  return Fill(prompts.answer, question, rendered);
}

CotTrace RunRegionalCot(std::string_view question, std::string_view image,
                        ModelTransport& transport, const CotOptions& options) {
  CotTrace trace;
  trace.question = std::string(question);
  trace.image = std::string(image);
  trace.detect_prompt = ComposeDetectPrompt(question, options.prompts);

  const auto fail = [&trace](const TransportError& e) {
    trace.failed = true;
    trace.error_kind = e.kind();
    trace.error = std::string(ErrorKindName(e.kind())) + ": " + e.what();
  };

  RetryLog detect_log;
  try {
    trace.detect_response =
        SendWithRetries(transport, {trace.detect_prompt, trace.image},
                        options.retries, &detect_log)
            .text;
  } catch (const TransportError& e) {
    fail(e);
  }
  trace.detect_attempts = detect_log.attempts;
  trace.detect_time = detect_log.elapsed;
  if (trace.failed) return trace;

  ParseResult parsed = ParseGroundedText(trace.detect_response, ParseMode::kLenient);
  trace.parsed_regions = ExtractPairs(parsed.document);
  trace.detect_diagnostics = std::move(parsed.diagnostics);
  if (trace.parsed_regions.empty()) {
    trace.fallback = true;
    trace.final_prompt = trace.question;
  } else {
    trace.final_prompt =
        ComposeAnswerPrompt(question, trace.parsed_regions, options.prompts);
  }

  RetryLog answer_log;
  try {
    trace.final_response =
        SendWithRetries(transport, {trace.final_prompt, trace.image},
                        options.retries, &answer_log)
            .text;
  } catch (const TransportError& e) {
    fail(e);
  }
  trace.answer_attempts = answer_log.attempts;
  trace.answer_time = answer_log.elapsed;
  return trace;
}

nlohmann::ordered_json CotTraceToJson(const CotTrace& trace) {
  nlohmann::ordered_json regions = nlohmann::ordered_json::array();
  for (const ObjectRegionPair& p : trace.parsed_regions) {
    nlohmann::ordered_json boxes = nlohmann::ordered_json::array();
    for (const BBox& b : p.regions) boxes.push_back({b.x1(), b.y1(), b.x2(), b.y2()});
    regions.push_back({{"object", p.object}, {"boxes", boxes}});
  }
  nlohmann::ordered_json diagnostics = nlohmann::ordered_json::array();
  for (const ParseDiagnostic& d : trace.detect_diagnostics) {
    diagnostics.push_back({{"kind", MarkupErrorKindName(d.kind)},
                           {"offset", d.offset},
                           {"message", d.message}});
  }
  nlohmann::ordered_json j;
  j["question"] = trace.question;
  j["image"] = trace.image;
  j["detect_prompt"] = trace.detect_prompt;
  j["detect_response"] = trace.detect_response;
  j["regions"] = std::move(regions);
  j["detect_diagnostics"] = std::move(diagnostics);
  j["final_prompt"] = trace.final_prompt;
  j["final_response"] = trace.final_response;
  j["fallback"] = trace.fallback;
  j["status"] = trace.failed ? "failed" : "ok";
  if (trace.failed) j["error"] = trace.error;
  j["attempts"] = {{"detect", trace.detect_attempts},
                   {"answer", trace.answer_attempts}};
  j["timing_ms"] = {{"detect", trace.detect_time.count()},
                    {"answer", trace.answer_time.count()}};
  return j;
}

}  // namespace regionkit
