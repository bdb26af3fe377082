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
#include "regionkit/forge.h"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <random>

#include "json.hpp"
#include "regionkit/transport.h"
#include "regionkit/utf8.h"

namespace regionkit {

namespace {

constexpr std::string_view kObjectSlot = "{object}";
constexpr std::string_view kBoxSlot = "{box}";

bool Contains(std::string_view haystack, std::string_view needle) {
  return haystack.find(needle) != std::string_view::npos;
}

// Returns the placeholder names appearing as {name} in `pattern`.
std::vector<std::string> Placeholders(std::string_view pattern) {
  std::vector<std::string> names;
  std::size_t pos = 0;
  while ((pos = pattern.find('{', pos)) != std::string_view::npos) {
    const std::size_t close = pattern.find('}', pos + 1);
    if (close == std::string_view::npos) break;
    names.emplace_back(pattern.substr(pos + 1, close - pos - 1));
    pos = close + 1;
  }
  return names;
}

std::string Substitute(std::string_view pattern, std::string_view object,
                       std::string_view boxes) {
  std::string out;
  std::size_t pos = 0;
  while (pos < pattern.size()) {
    if (pattern.compare(pos, kObjectSlot.size(), kObjectSlot) == 0) {
      out.append(object);
      pos += kObjectSlot.size();
    } else if (pattern.compare(pos, kBoxSlot.size(), kBoxSlot) == 0) {
      out.append(boxes);
      pos += kBoxSlot.size();
    } else {
      out.push_back(pattern[pos++]);
    }
  }
  return out;
}

std::uint64_t Fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

bool EndsWithAsciiByte(std::string_view s) {
  return !s.empty() && static_cast<unsigned char>(s.back()) < 0x80;
}

std::string StripReservedTags(std::string text) {
  for (std::string_view tag : {kRefOpen, kRefClose, kBoxOpen, kBoxClose}) {
    std::size_t pos;
    while ((pos = text.find(tag)) != std::string::npos) text.erase(pos, tag.size());
  }
  return text;
}

bool IsUsableObjectName(std::string_view name) {
  return !utf8::TrimAscii(name).empty() && !Contains(name, kRefOpen) &&
         !Contains(name, kBoxOpen) && !Contains(name, kRefClose);
}

}  // namespace

std::string_view DirectionName(Direction direction) {
  return direction == Direction::kRegionToText ? "r2t" : "t2r";
}

std::optional<Direction> ParseDirection(std::string_view name) {
  if (name == "r2t" || name == "region_to_text") return Direction::kRegionToText;
  if (name == "t2r" || name == "text_to_region") return Direction::kTextToRegion;
  return std::nullopt;
}

void ValidateTemplate(const Template& t) {
  for (const std::string* pattern : {&t.question_pattern, &t.answer_pattern}) {
    for (const std::string& name : Placeholders(*pattern)) {
      if (name != "object" && name != "box") {
        throw ForgeError(ForgeError::Kind::kUnknownPlaceholder,
                         "template " + t.id + ": unknown placeholder {" + name + "}");
      }
    }
  }
  if (t.direction == Direction::kTextToRegion &&
      !Contains(t.answer_pattern, kBoxSlot)) {
    throw ForgeError(ForgeError::Kind::kTemplateDirectionMismatch,
                     "template " + t.id + ": text-to-region answer lacks {box}");
  }
  if (t.direction == Direction::kRegionToText &&
      !Contains(t.question_pattern, kBoxSlot)) {
    throw ForgeError(ForgeError::Kind::kTemplateDirectionMismatch,
                     "template " + t.id + ": region-to-text question lacks {box}");
  }
}

FilledTemplate FillTemplate(const Template& t, std::string_view object_text,
                            std::span<const BBox> boxes) {
  ValidateTemplate(t);
  const bool wants_box =
      Contains(t.question_pattern, kBoxSlot) || Contains(t.answer_pattern, kBoxSlot);
  const bool wants_object = Contains(t.question_pattern, kObjectSlot) ||
                            Contains(t.answer_pattern, kObjectSlot);
  if (wants_box && boxes.empty()) {
    throw ForgeError(ForgeError::Kind::kMissingPlaceholderValue,
                     "template " + t.id + " needs at least one box");
  }
  if (wants_object && utf8::TrimAscii(object_text).empty()) {
    throw ForgeError(ForgeError::Kind::kMissingPlaceholderValue,
                     "template " + t.id + " needs an object name");
  }
  const std::string serialized = SerializeBoxes(boxes);
  FilledTemplate out{Substitute(t.question_pattern, object_text, serialized),
                     Substitute(t.answer_pattern, object_text, serialized)};
  if (Contains(out.answer, kBoxOpen)) {
    try {
      ParseGroundedText(out.answer, ParseMode::kStrict);
    } catch (const MarkupError& e) {
      throw ForgeError(ForgeError::Kind::kInvalidAnswer,
                       "template " + t.id + " produced invalid markup: " + e.what());
    }
  }
  return out;
}

std::vector<Template> LoadTemplates(const std::filesystem::path& path) {
  std::vector<std::filesystem::path> files;
  if (std::filesystem::is_directory(path)) {
    for (const auto& entry : std::filesystem::directory_iterator(path)) {
      if (entry.is_regular_file() && entry.path().extension() == ".jsonl") {
        files.push_back(entry.path());
      }
    }
    std::sort(files.begin(), files.end());
  } else {
    files.push_back(path);
  }
  std::vector<Template> templates;
  for (const auto& file : files) {
    std::ifstream in(file);
    if (!in) {
      throw ForgeError(ForgeError::Kind::kBadTemplateFile,
                       "cannot read template file " + file.string());
    }
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (utf8::TrimAscii(line).empty()) continue;
      const std::string where = file.string() + ":" + std::to_string(line_no);
      Template t;
      try {
        const auto rec = nlohmann::json::parse(line);
        t.id = rec.at("id").get<std::string>();
        const auto dir = ParseDirection(rec.at("direction").get<std::string>());
        if (!dir) {
          throw ForgeError(ForgeError::Kind::kBadTemplateFile,
                           where + ": unknown direction");
        }
        t.direction = *dir;
        t.question_pattern = rec.at("question").get<std::string>();
        t.answer_pattern = rec.at("answer").get<std::string>();
      } catch (const nlohmann::json::exception& e) {
        throw ForgeError(ForgeError::Kind::kBadTemplateFile,
                         where + ": " + e.what());
      }
      try {
        ValidateTemplate(t);
      } catch (const ForgeError& e) {
        throw ForgeError(e.kind(), where + ": " + e.what());
      }
      templates.push_back(std::move(t));
    }
  }
  if (templates.empty()) {
    throw ForgeError(ForgeError::Kind::kMissingTemplates,
                     "no templates found in " + path.string());
  }
  return templates;
}

std::vector<ForgedSample> ForgeRegionSamples(const MaskGrid& mask,
                                             const RegionSampleSpec& spec,
                                             std::span<const Template> templates,
                                             std::uint64_t seed) {
  std::vector<const Template*> by_direction[2];
  for (const Template& t : templates) {
    by_direction[t.direction == Direction::kTextToRegion].push_back(&t);
  }
  if (by_direction[0].empty() || by_direction[1].empty()) {
    throw ForgeError(ForgeError::Kind::kMissingTemplates,
                     "need at least one template per direction");
  }

  const int width = spec.image_width > 0 ? spec.image_width : mask.width();
  const int height = spec.image_height > 0 ? spec.image_height : mask.height();
  if (width != mask.width() || height != mask.height()) {
    throw GeometryError(GeometryError::Kind::kInvalidMask,
                        "mask size does not match the image size");
  }
  std::vector<BBox> boxes;
  for (const PixelBox& p : MaskToBoxes(mask, spec.min_area)) {
    boxes.push_back(NormalizeBox(p, width, height));
  }
  if (boxes.empty()) {
    throw ForgeError(ForgeError::Kind::kEmptyMask,
                     "mask " + spec.id + " has no component of at least " +
                         std::to_string(spec.min_area) + " pixels");
  }

  std::mt19937_64 rng(SplitMix64(seed ^ Fnv1a(spec.id)));
  std::vector<ForgedSample> samples;
  for (Direction d : {Direction::kRegionToText, Direction::kTextToRegion}) {
    const auto& pool = by_direction[d == Direction::kTextToRegion];
    const Template& t = *pool[rng() % pool.size()];
    FilledTemplate filled = FillTemplate(t, spec.label, boxes);
    ForgedSample s;
    s.id = spec.id + "-" + std::string(DirectionName(d));
    s.image = spec.image;
    s.question = std::move(filled.question);
    s.answer = std::move(filled.answer);
    s.direction = d;
    s.template_id = t.id;
    s.label = spec.label;
    s.boxes = boxes;
    samples.push_back(std::move(s));
  }
  return samples;
}

std::vector<std::string> OrganLexicon::Organs() const {
  std::vector<std::string> out;
  for (const Entry& e : entries) out.push_back(e.organ);
  return out;
}

OrganLexicon DefaultChestLexicon() {
  return OrganLexicon{{
      {"left lung", {"left lung", "lungs", "左肺", "双肺"}},
      {"right lung", {"right lung", "lungs", "右肺", "双肺"}},
      {"mediastinum", {"mediastinum", "mediastinal", "纵隔"}},
      {"cardiac silhouette",
       {"cardiac silhouette", "cardiac", "heart", "心影", "心脏"}},
      {"left hilar structures", {"left hilar", "left hilum", "左肺门"}},
      {"right hilar structures", {"right hilar", "right hilum", "右肺门"}},
      {"left clavicle", {"left clavicle", "左锁骨"}},
      {"right clavicle", {"right clavicle", "右锁骨"}},
      {"left hemidiaphragm", {"left hemidiaphragm", "左膈", "左侧膈"}},
      {"right hemidiaphragm", {"right hemidiaphragm", "右膈", "右侧膈"}},
      {"right atrium", {"right atrium", "右心房"}},
      {"abdomen", {"abdomen", "abdominal", "腹部"}},
  }};
}

OrganLexicon LoadLexicon(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ForgeError(ForgeError::Kind::kBadLexiconFile,
                     "cannot read lexicon " + path.string());
  }
  OrganLexicon lexicon;
  try {
    const auto doc = nlohmann::json::parse(in);
    for (const auto& e : doc) {
      OrganLexicon::Entry entry;
      entry.organ = e.at("organ").get<std::string>();
      for (const auto& f : e.at("forms")) {
        std::string form = utf8::AsciiLower(utf8::TrimAscii(f.get<std::string>()));
        if (form.empty()) {
          throw ForgeError(ForgeError::Kind::kBadLexiconFile,
                           path.string() + ": empty surface form for " + entry.organ);
        }
        entry.forms.push_back(std::move(form));
      }
      lexicon.entries.push_back(std::move(entry));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ForgeError(ForgeError::Kind::kBadLexiconFile,
                     path.string() + ": " + e.what());
  }
  return lexicon;
}

std::vector<std::string> SplitSentences(std::string_view report) {
  static constexpr std::string_view kIdeographicStop = "。";
  std::vector<std::string> sentences;
  std::size_t start = 0;
  const auto emit = [&](std::size_t end) {
    const std::string_view s = utf8::TrimAscii(report.substr(start, end - start));
    if (!s.empty()) sentences.emplace_back(s);
    start = end;
  };
  std::size_t pos = 0;
  while (pos < report.size()) {
    if (report.compare(pos, kIdeographicStop.size(), kIdeographicStop) == 0) {
      pos += kIdeographicStop.size();
      emit(pos);
      continue;
    }
    if (report[pos] == '.') {
      const bool decimal = pos > 0 && pos + 1 < report.size() &&
                           std::isdigit(static_cast<unsigned char>(report[pos - 1])) &&
                           std::isdigit(static_cast<unsigned char>(report[pos + 1]));
      ++pos;
      if (!decimal) emit(pos);
      continue;
    }
    ++pos;
  }
  emit(report.size());
  return sentences;
}

OrganDescriptions SegmentReport(std::string_view report,
                                const OrganLexicon& lexicon) {
  OrganDescriptions out;
  const auto append = [&out](const std::string& organ, const std::string& sentence) {
    auto it = std::find_if(out.begin(), out.end(),
                           [&](const auto& kv) { return kv.first == organ; });
    if (it == out.end()) {
      out.emplace_back(organ, sentence);
      return;
    }
    if (EndsWithAsciiByte(it->second)) it->second.push_back(' ');
    it->second.append(sentence);
  };
  for (const std::string& sentence : SplitSentences(report)) {
    const std::string lowered = utf8::AsciiLower(sentence);
    bool matched = false;
    for (const OrganLexicon::Entry& entry : lexicon.entries) {
      const bool hit = std::any_of(
          entry.forms.begin(), entry.forms.end(), [&](const std::string& form) {
            return !form.empty() && Contains(lowered, utf8::AsciiLower(form));
          });
      if (hit) {
        append(entry.organ, sentence);
        matched = true;
      }
    }
    if (!matched) append(std::string(kOtherOrgan), sentence);
  }
  return out;
}

AssembledReport AssembleGroundedReport(const OrganDescriptions& descriptions,
                                       const OrganRegions& regions,
                                       std::span<const std::string> canonical_order) {
  const auto key = [](std::string_view s) { return utf8::NormalizeWhitespace(s); };

  std::vector<std::size_t> order;
  std::vector<char> placed(descriptions.size(), 0);
  for (const std::string& organ : canonical_order) {
    for (std::size_t i = 0; i < descriptions.size(); ++i) {
      if (!placed[i] && key(descriptions[i].first) == key(organ)) {
        order.push_back(i);
        placed[i] = 1;
      }
    }
  }
  for (std::size_t i = 0; i < descriptions.size(); ++i) {
    if (!placed[i]) order.push_back(i);
  }

  AssembledReport out;
  std::vector<char> region_used(regions.size(), 0);
  bool first = true;
  for (std::size_t idx : order) {
    const auto& [organ, raw_description] = descriptions[idx];
    std::string description = raw_description;
    if (!IsSafePlainText(description)) {
      description = StripReservedTags(std::move(description));
      out.warnings.push_back("removed markup tags from the description of " + organ);
    }
    description = std::string(utf8::TrimAscii(description));

    const std::vector<BBox>* boxes = nullptr;
    for (std::size_t r = 0; r < regions.size(); ++r) {
      if (!region_used[r] && key(regions[r].first) == key(organ)) {
        region_used[r] = 1;
        if (!regions[r].second.empty()) boxes = &regions[r].second;
        break;
      }
    }
    if (boxes != nullptr && !IsUsableObjectName(organ)) {
      out.warnings.push_back("organ name cannot be used as a <ref>: " + organ);
      boxes = nullptr;
    }

    if (boxes == nullptr && description.empty()) continue;
    if (!first) out.document.AppendText(" ");
    first = false;
    if (boxes != nullptr) {
      out.document.AppendAnnotation(Annotation{organ, *boxes});
      if (!description.empty()) out.document.AppendText(" " + description);
    } else {
      out.document.AppendText(description);
    }
  }
  for (std::size_t r = 0; r < regions.size(); ++r) {
    if (!region_used[r]) {
      out.warnings.push_back("region without description: " + regions[r].first);
    }
  }
  return out;
}

HttpSegmenterClient::HttpSegmenterClient(std::string url,
                                         std::chrono::milliseconds timeout)
    : url_(std::move(url)), timeout_(timeout) {}

OrganDescriptions HttpSegmenterClient::Segment(std::string_view report,
                                               std::span<const std::string> organs) {
  nlohmann::json body;
  body["report"] = std::string(report);
  body["organ_list"] = std::vector<std::string>(organs.begin(), organs.end());
  const nlohmann::ordered_json reply = PostJson(url_, body, timeout_);
  if (!reply.is_object()) {
    throw TransportError(TransportError::Kind::kProtocol,
                         url_ + ": segmenter reply is not an object");
  }
  OrganDescriptions out;
  for (const auto& [organ, text] : reply.items()) {
    if (!text.is_string()) {
      throw TransportError(TransportError::Kind::kProtocol,
                           url_ + ": description for " + organ + " is not a string");
    }
    out.emplace_back(organ, text.get<std::string>());
  }
  return out;
}

SegmentOutcome SegmentWithFallback(std::string_view report,
                                   const OrganLexicon& lexicon,
                                   SegmenterClient* client, int retries) {
  SegmentOutcome outcome;
  if (client != nullptr) {
    const std::vector<std::string> organs = lexicon.Organs();
    for (int attempt = 0; attempt <= retries; ++attempt) {
      ++outcome.attempts;
      try {
        outcome.descriptions = client->Segment(report, organs);
        return outcome;
      } catch (const std::exception& e) {
        outcome.error = e.what();
      }
    }
  }
  outcome.used_fallback = client != nullptr;
  outcome.descriptions = SegmentReport(report, lexicon);
  return outcome;
}

}  // namespace regionkit
