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
#include "regionkit/text_metrics.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

#include "regionkit/utf8.h"

namespace regionkit {

namespace {

using NgramCounts = std::unordered_map<std::string, int>;

NgramCounts CountNgrams(const std::vector<std::string>& tokens, int n) {
  NgramCounts counts;
  if (tokens.size() < static_cast<std::size_t>(n)) return counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    std::string key = tokens[i];
    for (int k = 1; k < n; ++k) {
      key.push_back('\x1f');
      key.append(tokens[i + k]);
    }
    ++counts[key];
  }
  return counts;
}

double F1(double p, double r) {
  return p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0;
}

std::size_t LcsLength(const std::vector<std::string>& a,
                      const std::vector<std::string>& b) {
  std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1
                                    : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

}  // namespace

std::optional<Language> ParseLanguage(std::string_view code) {
  if (code == "en") return Language::kEnglish;
  if (code == "zh") return Language::kChinese;
  if (code == "mixed") return Language::kMixed;
  return std::nullopt;
}

std::string TokenSequence::Joined() const {
  std::string out;
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    if (i > 0) out.push_back(' ');
    out.append(tokens_[i]);
  }
  return out;
}

TokenSequence Tokenize(std::string_view text, Language language) {
  std::vector<std::string> tokens;
  std::string current;
  const auto flush = [&] {
    if (!current.empty()) tokens.push_back(std::move(current));
    current.clear();
  };
  const bool split_cjk = language != Language::kEnglish;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const char32_t cp = utf8::Next(text, pos);
    if (utf8::IsSpace(cp) || utf8::IsPunctuation(cp)) {
      flush();
    } else if (split_cjk && utf8::IsCjk(cp)) {
      flush();
      utf8::Append(current, cp);
      flush();
    } else if (cp >= 'A' && cp <= 'Z') {
      current.push_back(static_cast<char>(cp - 'A' + 'a'));
    } else {
      utf8::Append(current, cp);
    }
  }
  flush();
  return TokenSequence(std::move(tokens), language);
}

double Bleu(const TokenSequence& candidate, const TokenSequence& reference,
            int max_n) {
  if (max_n < 1) throw std::invalid_argument("BLEU order must be >= 1");
  if (candidate.empty()) return 0.0;
  double log_sum = 0.0;
  for (int n = 1; n <= max_n; ++n) {
    const NgramCounts cand = CountNgrams(candidate.tokens(), n);
    const NgramCounts ref = CountNgrams(reference.tokens(), n);
    long long total = 0;
    long long matched = 0;
    for (const auto& [gram, count] : cand) {
      total += count;
      if (auto it = ref.find(gram); it != ref.end()) {
        matched += std::min(count, it->second);
      }
    }
    double precision;
    if (n == 1) {
      if (matched == 0) return 0.0;
      precision = static_cast<double>(matched) / static_cast<double>(total);
    } else {
      precision = static_cast<double>(matched + 1) / static_cast<double>(total + 1);
    }
    log_sum += std::log(precision);
  }
  const double c = static_cast<double>(candidate.size());
  const double r = static_cast<double>(reference.size());
  const double brevity = c < r ? std::exp(1.0 - r / c) : 1.0;
  return 100.0 * brevity * std::exp(log_sum / max_n);
}

double RougeL(const TokenSequence& candidate, const TokenSequence& reference) {
  if (candidate.empty() || reference.empty()) return 0.0;
  const std::size_t lcs = LcsLength(candidate.tokens(), reference.tokens());
  if (lcs == 0) return 0.0;
  const double p = static_cast<double>(lcs) / candidate.size();
  const double r = static_cast<double>(lcs) / reference.size();
  return 100.0 * F1(p, r);
}

MeteorAlignment AlignUnigrams(const std::vector<std::string>& candidate,
                              const std::vector<std::string>& reference) {
  const std::size_t n = candidate.size();
  const std::size_t m = reference.size();
  std::vector<char> used(m, 0);
  std::vector<long> aligned_to(n, -1);
  std::vector<std::size_t> prev(m + 1), cur(m + 1);
  for (;;) {
    // Longest run of free, equal tokens; run[i][j] ends at (i - 1, j - 1).
    std::size_t best_len = 0, best_i = 0, best_j = 0;
    std::fill(prev.begin(), prev.end(), 0);
    for (std::size_t i = 1; i <= n; ++i) {
      cur[0] = 0;
      for (std::size_t j = 1; j <= m; ++j) {
        const bool free = aligned_to[i - 1] < 0 && !used[j - 1];
        cur[j] = free && candidate[i - 1] == reference[j - 1] ? prev[j - 1] + 1 : 0;
        const std::size_t len = cur[j];
        if (len == 0) continue;
        if (len > best_len ||
            (len == best_len && std::pair(i - len, j - len) < std::pair(best_i, best_j))) {
          best_len = len;
          best_i = i - len;
          best_j = j - len;
        }
      }
      std::swap(prev, cur);
    }
    if (best_len < 2) break;
    for (std::size_t k = 0; k < best_len; ++k) {
      aligned_to[best_i + k] = static_cast<long>(best_j + k);
      used[best_j + k] = 1;
    }
  }
  // What is left can only form one-token chunks.
  for (std::size_t i = 0; i < n; ++i) {
    if (aligned_to[i] >= 0) continue;
    for (std::size_t j = 0; j < m; ++j) {
      if (!used[j] && reference[j] == candidate[i]) {
        used[j] = 1;
        aligned_to[i] = static_cast<long>(j);
        break;
      }
    }
  }
  MeteorAlignment out;
  for (std::size_t i = 0; i < candidate.size(); ++i) {
    if (aligned_to[i] < 0) continue;
    ++out.matches;
    const bool continues =
        i > 0 && aligned_to[i - 1] >= 0 && aligned_to[i - 1] + 1 == aligned_to[i];
    if (!continues) ++out.chunks;
  }
  return out;
}

double MeteorLite(const TokenSequence& candidate,
                  const TokenSequence& reference, const MeteorParams& params) {
  if (candidate.empty() || reference.empty()) return 0.0;
  const MeteorAlignment a = AlignUnigrams(candidate.tokens(), reference.tokens());
  if (a.matches == 0) return 0.0;
  const double m = static_cast<double>(a.matches);
  const double p = m / candidate.size();
  const double r = m / reference.size();
  const double f_mean = p * r / (params.alpha * p + (1.0 - params.alpha) * r);
  const double penalty =
      params.gamma * std::pow(static_cast<double>(a.chunks) / m, params.beta);
  return 100.0 * f_mean * (1.0 - penalty);
}

VqaScores ScoreVqa(const TokenSequence& candidate,
                   const TokenSequence& reference, bool closed) {
  VqaScores out;
  if (closed) out.close_accuracy = 0.0;
  if (reference.empty()) return out;
  if (closed && candidate.Joined() == reference.Joined()) {
    out.close_accuracy = 100.0;
  }
  std::unordered_map<std::string, int> ref_counts;
  for (const std::string& t : reference.tokens()) ++ref_counts[t];
  std::size_t overlap = 0;
  for (const std::string& t : candidate.tokens()) {
    auto it = ref_counts.find(t);
    if (it != ref_counts.end() && it->second > 0) {
      --it->second;
      ++overlap;
    }
  }
  const double r = static_cast<double>(overlap) / reference.size();
  const double p =
      candidate.empty() ? 0.0 : static_cast<double>(overlap) / candidate.size();
  out.token_recall = 100.0 * r;
  out.token_f1 = 100.0 * F1(p, r);
  return out;
}

TextScores ScoreText(std::string_view candidate, std::string_view reference,
                     Language language, bool closed) {
  const TokenSequence cand = Tokenize(candidate, language);
  const TokenSequence ref = Tokenize(reference, language);
  TextScores s;
  s.bleu1 = Bleu(cand, ref, 1);
  s.bleu4 = Bleu(cand, ref, 4);
  s.rouge_l = RougeL(cand, ref);
  s.meteor = MeteorLite(cand, ref);
  const VqaScores v = ScoreVqa(cand, ref, closed);
  s.token_f1 = v.token_f1;
  s.token_recall = v.token_recall;
  s.close_accuracy = v.close_accuracy;
  return s;
}

}  // namespace regionkit
