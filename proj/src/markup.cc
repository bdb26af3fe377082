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
#include "regionkit/markup.h"

#include <algorithm>
#include <array>

#include "regionkit/utf8.h"

namespace regionkit {

namespace {

bool IsBlank(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

bool StartsAt(std::string_view text, std::size_t pos, std::string_view tag) {
  return text.compare(pos, tag.size(), tag) == 0;
}

std::size_t SkipBlanks(std::string_view text, std::size_t pos) {
  while (pos < text.size() && IsBlank(text[pos])) ++pos;
  return pos;
}

// Parses "[x1, y1, x2, y2]" with optional blanks around every token.
std::optional<BBox> ParseBoxBody(std::string_view body, std::string* why) {
  std::size_t i = SkipBlanks(body, 0);
  if (i >= body.size() || body[i] != '[') {
    *why = "expected '['";
    return std::nullopt;
  }
  ++i;
  std::array<long long, 4> v{};
  for (int k = 0; k < 4; ++k) {
    i = SkipBlanks(body, i);
    const std::size_t digits_begin = i;
    while (i < body.size() && body[i] >= '0' && body[i] <= '9') ++i;
    const std::size_t ndigits = i - digits_begin;
    if (ndigits == 0) {
      *why = "expected an unsigned integer";
      return std::nullopt;
    }
    if (ndigits > 1 && body[digits_begin] == '0') {
      *why = "leading zero in coordinate";
      return std::nullopt;
    }
    if (ndigits > 4) {
      *why = "coordinate out of range";
      return std::nullopt;
    }
    v[k] = std::stoll(std::string(body.substr(digits_begin, ndigits)));
    i = SkipBlanks(body, i);
    const char expected = k < 3 ? ',' : ']';
    if (i >= body.size() || body[i] != expected) {
      *why = k < 3 ? "expected ',' (a box has exactly four coordinates)"
                   : "expected ']' (a box has exactly four coordinates)";
      return std::nullopt;
    }
    ++i;
  }
  if (SkipBlanks(body, i) != body.size()) {
    *why = "trailing characters after ']'";
    return std::nullopt;
  }
  for (long long c : v) {
    if (c > kMaxCoord) {
      *why = "coordinate out of range [0, 999]";
      return std::nullopt;
    }
  }
  if (!BBox::IsValid(v[0], v[1], v[2], v[3])) {
    *why = "box requires x1 < x2 and y1 < y2";
    return std::nullopt;
  }
  return BBox(static_cast<int>(v[0]), static_cast<int>(v[1]),
              static_cast<int>(v[2]), static_cast<int>(v[3]));
}

class Parser {
 public:
  Parser(std::string_view text, ParseMode mode) : text_(text), mode_(mode) {}

  ParseResult Run() {
    std::size_t pos = 0;
    while (pos < text_.size()) {
      const std::size_t lt = text_.find('<', pos);
      if (lt == std::string_view::npos) break;
      if (StartsAt(text_, lt, kRefOpen)) {
        pos = ParseAnnotation(lt);
      } else if (StartsAt(text_, lt, kBoxOpen)) {
        Report(MarkupErrorKind::kDanglingBox, lt,
               "<box> without a preceding <ref>");
        const std::size_t close = text_.find(kBoxClose, lt + kBoxOpen.size());
        pos = close == std::string_view::npos ? text_.size()
                                              : close + kBoxClose.size();
      } else {
        pos = lt + 1;
      }
    }
    FlushText(text_.size());
    return std::move(result_);
  }

 private:
  // Offset of the next <ref> or <box> at or after `from`.
  std::size_t NextOpenTag(std::size_t from) const {
    return std::min(text_.find(kRefOpen, from), text_.find(kBoxOpen, from));
  }

  // Handles the <ref> at `start`; returns where scanning resumes.
  std::size_t ParseAnnotation(std::size_t start) {
    const std::size_t name_begin = start + kRefOpen.size();
    const std::size_t close = text_.find(kRefClose, name_begin);
    const std::size_t inner = NextOpenTag(name_begin);
    if (close == std::string_view::npos || inner < close) {
      Report(MarkupErrorKind::kUnclosedTag, start, "<ref> is never closed");
      return inner == std::string_view::npos ? text_.size() : inner;
    }
    const std::string_view name = text_.substr(name_begin, close - name_begin);
    const std::size_t after_ref = close + kRefClose.size();
    if (utf8::TrimAscii(name).empty()) {
      Report(MarkupErrorKind::kEmptyRef, start, "<ref> has an empty name");
      return after_ref;
    }

    std::vector<BBox> boxes;
    std::size_t group_end = after_ref;
    std::size_t resume = std::string_view::npos;
    bool box_error = false;
    for (;;) {
      const std::size_t q = SkipBlanks(text_, group_end);
      if (!StartsAt(text_, q, kBoxOpen)) break;
      const std::size_t body_begin = q + kBoxOpen.size();
      const std::size_t box_close = text_.find(kBoxClose, body_begin);
      const std::size_t box_inner = text_.find('<', body_begin);
      if (box_close == std::string_view::npos || box_inner < box_close) {
        Report(MarkupErrorKind::kUnclosedTag, q, "<box> is never closed");
        const std::size_t next = NextOpenTag(body_begin);
        resume = next == std::string_view::npos ? text_.size() : next;
        box_error = true;
        break;
      }
      std::string why;
      auto box = ParseBoxBody(text_.substr(body_begin, box_close - body_begin),
                              &why);
      if (!box) {
        Report(MarkupErrorKind::kMalformedBox, q, "malformed box: " + why);
        resume = box_close + kBoxClose.size();
        box_error = true;
        break;
      }
      boxes.push_back(*box);
      group_end = box_close + kBoxClose.size();
    }

    if (boxes.empty()) {
      if (!box_error) {
        Report(MarkupErrorKind::kMissingBox, start,
               "<ref> is not followed by any <box>");
        return after_ref;
      }
      return resume;
    }
    FlushText(start);
    result_.document.AppendAnnotation(
        Annotation{std::string(name), std::move(boxes)});
    text_start_ = group_end;
    return box_error ? resume : group_end;
  }

  void FlushText(std::size_t end) {
    if (end > text_start_) {
      result_.document.AppendText(text_.substr(text_start_, end - text_start_));
    }
    text_start_ = end;
  }

  void Report(MarkupErrorKind kind, std::size_t offset, std::string message) {
    ParseDiagnostic diag{kind, offset, std::move(message)};
    if (mode_ == ParseMode::kStrict) throw MarkupError(std::move(diag));
    result_.diagnostics.push_back(std::move(diag));
  }

  std::string_view text_;
  ParseMode mode_;
  std::size_t text_start_ = 0;
  ParseResult result_;
};

}  // namespace

void GroundedDocument::AppendText(std::string_view text) {
  if (text.empty()) return;
  if (!segments_.empty()) {
    if (auto* last = std::get_if<PlainText>(&segments_.back())) {
      last->text.append(text);
      return;
    }
  }
  segments_.emplace_back(PlainText{std::string(text)});
}

void GroundedDocument::AppendAnnotation(Annotation annotation) {
  segments_.emplace_back(std::move(annotation));
}

std::size_t GroundedDocument::AnnotationCount() const {
  return static_cast<std::size_t>(
      std::count_if(segments_.begin(), segments_.end(), [](const Segment& s) {
        return std::holds_alternative<Annotation>(s);
      }));
}

std::string_view MarkupErrorKindName(MarkupErrorKind kind) {
  switch (kind) {
    case MarkupErrorKind::kMalformedBox:
      return "MalformedBox";
    case MarkupErrorKind::kDanglingBox:
      return "DanglingBox";
    case MarkupErrorKind::kUnclosedTag:
      return "UnclosedTag";
    case MarkupErrorKind::kMissingBox:
      return "MissingBox";
    case MarkupErrorKind::kEmptyRef:
      return "EmptyRef";
  }
  return "Unknown";
}

MarkupError::MarkupError(ParseDiagnostic diagnostic)
    : std::runtime_error(std::string(MarkupErrorKindName(diagnostic.kind)) +
                         " at byte " + std::to_string(diagnostic.offset) +
                         ": " + diagnostic.message),
      diagnostic_(std::move(diagnostic)) {}

ParseResult ParseGroundedText(std::string_view text, ParseMode mode) {
  return Parser(text, mode).Run();
}

std::string SerializeBoxes(std::span<const BBox> boxes) {
  std::string out;
  for (const BBox& b : boxes) {
    out.append(kBoxOpen);
    out.append(b.ToString());
    out.append(kBoxClose);
  }
  return out;
}

std::string SerializeAnnotation(const Annotation& annotation) {
  std::string out;
  out.append(kRefOpen);
  out.append(annotation.object);
  out.append(kRefClose);
  out.append(SerializeBoxes(annotation.regions));
  return out;
}

std::string SerializePair(const ObjectRegionPair& pair) {
  return SerializeAnnotation(Annotation{pair.object, pair.regions});
}

std::string SerializeGroundedText(const GroundedDocument& document) {
  std::string out;
  for (const Segment& seg : document.segments()) {
    if (const auto* t = std::get_if<PlainText>(&seg)) {
      out.append(t->text);
    } else {
      out.append(SerializeAnnotation(std::get<Annotation>(seg)));
    }
  }
  return out;
}

namespace {

std::optional<std::string> CleanDescription(std::string_view text) {
  std::size_t pos = 0;
  std::size_t begin = text.size();
  while (pos < text.size()) {
    const std::size_t here = pos;
    const char32_t cp = utf8::Next(text, pos);
    if (!utf8::IsSpace(cp) && !utf8::IsPunctuation(cp)) {
      begin = here;
      break;
    }
  }
  const std::string_view rest = utf8::TrimAscii(text.substr(begin));
  if (rest.empty()) return std::nullopt;
  return std::string(rest);
}

}  // namespace

std::vector<ObjectRegionPair> ExtractPairs(const GroundedDocument& document) {
  std::vector<ObjectRegionPair> pairs;
  const auto& segs = document.segments();
  for (std::size_t i = 0; i < segs.size(); ++i) {
    const auto* ann = std::get_if<Annotation>(&segs[i]);
    if (ann == nullptr) continue;
    ObjectRegionPair pair{ann->object, ann->regions, std::nullopt};
    if (i + 1 < segs.size()) {
      if (const auto* t = std::get_if<PlainText>(&segs[i + 1])) {
        pair.description = CleanDescription(t->text);
      }
    }
    pairs.push_back(std::move(pair));
  }
  return pairs;
}

bool IsSafePlainText(std::string_view text) {
  return text.find(kRefOpen) == std::string_view::npos &&
         text.find(kBoxOpen) == std::string_view::npos;
}

}  // namespace regionkit
