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
// Grounded-text markup. An annotation is
//
//   <ref>NAME</ref><box>[x1, y1, x2, y2]</box>[<box>[...]</box>...]
//
// where every consecutive <box> element binds to the preceding <ref>.
// Whitespace is allowed between tags and around the integers. Everything
// outside annotations is plain text and is preserved byte for byte.
#ifndef REGIONKIT_MARKUP_H_
#define REGIONKIT_MARKUP_H_

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "regionkit/geometry.h"

namespace regionkit {

inline constexpr std::string_view kRefOpen = "<ref>";
inline constexpr std::string_view kRefClose = "</ref>";
inline constexpr std::string_view kBoxOpen = "<box>";
inline constexpr std::string_view kBoxClose = "</box>";

// An object name bound to one or more boxes, with an optional description
// taken from the prose that follows it in a grounded report.
struct ObjectRegionPair {
  std::string object;
  std::vector<BBox> regions;
  std::optional<std::string> description;

  friend bool operator==(const ObjectRegionPair&,
                         const ObjectRegionPair&) = default;
};

struct Annotation {
  std::string object;
  std::vector<BBox> regions;

  friend bool operator==(const Annotation&, const Annotation&) = default;
};

struct PlainText {
  std::string text;

  friend bool operator==(const PlainText&, const PlainText&) = default;
};

using Segment = std::variant<PlainText, Annotation>;

// Alternating plain-text and annotation segments. Adjacent plain-text runs are
// always merged and empty runs are never stored.
class GroundedDocument {
 public:
  GroundedDocument() = default;

  void AppendText(std::string_view text);
  void AppendAnnotation(Annotation annotation);

  const std::vector<Segment>& segments() const { return segments_; }
  bool empty() const { return segments_.empty(); }
  std::size_t AnnotationCount() const;

  friend bool operator==(const GroundedDocument&,
                         const GroundedDocument&) = default;

 private:
  std::vector<Segment> segments_;
};

enum class ParseMode { kStrict, kLenient };

enum class MarkupErrorKind {
  kMalformedBox,  // non-integer, wrong arity, out of range, or x1 >= x2
  kDanglingBox,   // <box> with no <ref> opening its annotation group
  kUnclosedTag,   // <ref> or <box> without its closing tag
  kMissingBox,    // <ref>...</ref> not followed by any <box>
  kEmptyRef,      // <ref> whose name is blank
};

std::string_view MarkupErrorKindName(MarkupErrorKind kind);

struct ParseDiagnostic {
  MarkupErrorKind kind;
  std::size_t offset;  // byte offset of the offending tag
  std::string message;

  friend bool operator==(const ParseDiagnostic&,
                         const ParseDiagnostic&) = default;
};

class MarkupError : public std::runtime_error {
 public:
  explicit MarkupError(ParseDiagnostic diagnostic);

  const ParseDiagnostic& diagnostic() const { return diagnostic_; }
  MarkupErrorKind kind() const { return diagnostic_.kind; }

 private:
  ParseDiagnostic diagnostic_;
};

struct ParseResult {
  GroundedDocument document;
  // Empty in strict mode, which throws on the first problem instead. In
  // lenient mode every rejected fragment is kept as plain text.
  std::vector<ParseDiagnostic> diagnostics;
};

ParseResult ParseGroundedText(std::string_view text,
                              ParseMode mode = ParseMode::kLenient);

// "<box>[x1, y1, x2, y2]</box>" for each box, concatenated.
std::string SerializeBoxes(std::span<const BBox> boxes);
std::string SerializeAnnotation(const Annotation& annotation);
std::string SerializeGroundedText(const GroundedDocument& document);

// Annotations in document order. The plain-text run right after an
// annotation becomes its description, minus leading punctuation and
// surrounding whitespace.
std::vector<ObjectRegionPair> ExtractPairs(const GroundedDocument& document);

// Canonical rendering of a pair's object and boxes; the description is not
// part of the markup.
std::string SerializePair(const ObjectRegionPair& pair);

// True if `text` can be stored as plain text without being read back as
// markup.
bool IsSafePlainText(std::string_view text);

}  // namespace regionkit

#endif  // REGIONKIT_MARKUP_H_
