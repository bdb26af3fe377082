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
// Sentence-level text similarity metrics. Every score is a percentage in
// [0, 100].
#ifndef REGIONKIT_TEXT_METRICS_H_
#define REGIONKIT_TEXT_METRICS_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace regionkit {

enum class Language { kEnglish, kChinese, kMixed };

std::optional<Language> ParseLanguage(std::string_view code);

class TokenSequence {
 public:
  TokenSequence() = default;

  const std::vector<std::string>& tokens() const { return tokens_; }
  Language language() const { return language_; }
  std::size_t size() const { return tokens_.size(); }
  bool empty() const { return tokens_.empty(); }

  // Space-joined tokens.
  std::string Joined() const;

  friend TokenSequence Tokenize(std::string_view text, Language language);

 private:
  TokenSequence(std::vector<std::string> tokens, Language language)
      : tokens_(std::move(tokens)), language_(language) {}

  std::vector<std::string> tokens_;
  Language language_ = Language::kEnglish;
};

// Lowercases (ASCII) and drops punctuation. English splits on whitespace
// only. Chinese and Mixed additionally make every CJK code point its own
// token while Latin and digit runs stay whole.
TokenSequence Tokenize(std::string_view text, Language language);

// Uniform weights 1/max_n; n-gram precisions for n >= 2 use add-one
// smoothing; brevity penalty exp(1 - |ref|/|cand|) for short candidates.
double Bleu(const TokenSequence& candidate, const TokenSequence& reference,
            int max_n);

// LCS-based F1.
double RougeL(const TokenSequence& candidate, const TokenSequence& reference);

struct MeteorParams {
  double alpha = 0.9;
  double beta = 3.0;
  double gamma = 0.5;
};

// Exact-match METEOR without stemming or synonyms.
double MeteorLite(const TokenSequence& candidate,
                  const TokenSequence& reference,
                  const MeteorParams& params = {});

struct VqaScores {
  double token_f1 = 0.0;
  double token_recall = 0.0;
  std::optional<double> close_accuracy;  // closed questions only
};

VqaScores ScoreVqa(const TokenSequence& candidate,
                   const TokenSequence& reference, bool closed);

struct TextScores {
  double bleu1 = 0.0;
  double bleu4 = 0.0;
  double rouge_l = 0.0;
  double meteor = 0.0;
  double token_f1 = 0.0;
  double token_recall = 0.0;
  std::optional<double> close_accuracy;
};

// All metrics for one candidate/reference pair. `closed` requests exact-match
// accuracy.
TextScores ScoreText(std::string_view candidate, std::string_view reference,
                     Language language, bool closed);

// Exact-match unigram alignment used by MeteorLite, exposed for testing.
// Always reaches the maximum number of matches. Chunks are kept low by
// aligning the longest common run of free tokens first (leftmost on ties),
// then the remaining single tokens left to right.
struct MeteorAlignment {
  std::size_t matches = 0;
  std::size_t chunks = 0;
};
MeteorAlignment AlignUnigrams(const std::vector<std::string>& candidate,
                              const std::vector<std::string>& reference);

}  // namespace regionkit

#endif  // REGIONKIT_TEXT_METRICS_H_
