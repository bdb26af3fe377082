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
#ifndef REGIONKIT_ASSIGNMENT_H_
#define REGIONKIT_ASSIGNMENT_H_

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace regionkit {

// Dense rows x cols matrix of scores in [0, 1], row-major. Rows are
// predictions, columns are ground truths.
class ScoreMatrix {
 public:
  ScoreMatrix(std::size_t rows, std::size_t cols);
  ScoreMatrix(std::size_t rows, std::size_t cols, std::vector<double> scores);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double at(std::size_t r, std::size_t c) const { return scores_[r * cols_ + c]; }
  // Throws std::invalid_argument for values outside [0, 1].
  void set(std::size_t r, std::size_t c, double score);

  const std::vector<double>& scores() const { return scores_; }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> scores_;
};

struct Match {
  std::size_t prediction;
  std::size_t ground_truth;
  double score;

  friend bool operator==(const Match&, const Match&) = default;
};

struct Assignment {
  // Sorted by prediction index.
  std::vector<Match> matches;
  std::vector<std::size_t> unmatched_predictions;
  std::vector<std::size_t> unmatched_ground_truths;

  double TotalScore() const;
};

// Maximum-total-score one-to-one assignment of cardinality min(rows, cols).
// Solved as a min-cost problem on (1 - score) over the matrix padded to a
// square with zero scores, in O(max(rows, cols)^3).
//
// Among all optimal assignments the one returned has the lexicographically
// smallest ground-truth index sequence when read in prediction order, with
// "unmatched" ordered after every real ground truth. Edges whose reduced cost
// is below 1e-10 are treated as tight when comparing optima.
Assignment HungarianMatch(const ScoreMatrix& scores);

}  // namespace regionkit

#endif  // REGIONKIT_ASSIGNMENT_H_
