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
#include "regionkit/assignment.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace regionkit {

namespace {

constexpr double kTightEps = 1e-10;
constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

void CheckScore(double score) {
  if (!(score >= 0.0 && score <= 1.0)) {
    throw std::invalid_argument("score " + std::to_string(score) +
                                " outside [0, 1]");
  }
}

// Square min-cost problem over costs 1 - score with padding cost 1.
class Solver {
 public:
  explicit Solver(const ScoreMatrix& s)
      : s_(s), n_(std::max(s.rows(), s.cols())) {}

  // Returns col_of[row] over the padded square.
  std::vector<std::size_t> Solve() {
    SolvePotentials();
    PreferLexicographicallySmallest();
    return col_of_;
  }

 private:
  double Cost(std::size_t r, std::size_t c) const {
    if (r < s_.rows() && c < s_.cols()) return 1.0 - s_.at(r, c);
    return 1.0;
  }

  bool Tight(std::size_t r, std::size_t c) const {
    return Cost(r, c) - u_[r + 1] - v_[c + 1] <= kTightEps;
  }

  // Shortest augmenting path Hungarian algorithm with potentials, 1-indexed
  // internally with column 0 as the virtual source.
  void SolvePotentials() {
    const double inf = std::numeric_limits<double>::infinity();
    u_.assign(n_ + 1, 0.0);
    v_.assign(n_ + 1, 0.0);
    std::vector<std::size_t> owner(n_ + 1, 0);
    std::vector<std::size_t> way(n_ + 1, 0);
    std::vector<double> minv(n_ + 1);
    std::vector<char> used(n_ + 1);
    for (std::size_t i = 1; i <= n_; ++i) {
      owner[0] = i;
      std::size_t j0 = 0;
      std::fill(minv.begin(), minv.end(), inf);
      std::fill(used.begin(), used.end(), 0);
      do {
        used[j0] = 1;
        const std::size_t i0 = owner[j0];
        double delta = inf;
        std::size_t j1 = 0;
        for (std::size_t j = 1; j <= n_; ++j) {
          if (used[j]) continue;
          const double cur = Cost(i0 - 1, j - 1) - u_[i0] - v_[j];
          if (cur < minv[j]) {
            minv[j] = cur;
            way[j] = j0;
          }
          if (minv[j] < delta) {
            delta = minv[j];
            j1 = j;
          }
        }
        for (std::size_t j = 0; j <= n_; ++j) {
          if (used[j]) {
            u_[owner[j]] += delta;
            v_[j] -= delta;
          } else {
            minv[j] -= delta;
          }
        }
        j0 = j1;
      } while (owner[j0] != 0);
      do {
        const std::size_t j1 = way[j0];
        owner[j0] = owner[j1];
        j0 = j1;
      } while (j0 != 0);
    }
    col_of_.assign(n_, kNone);
    row_of_.assign(n_, kNone);
    for (std::size_t j = 1; j <= n_; ++j) {
      col_of_[owner[j] - 1] = j - 1;
      row_of_[j - 1] = owner[j] - 1;
    }
  }

  // Every optimal assignment is a perfect matching on tight edges under the
  // final potentials. Walk rows in order and move each one to the smallest
  // tight column that still admits a perfect matching of the rows after it,
  // found by rotating an alternating cycle through the current matching.
  void PreferLexicographicallySmallest() {
    std::vector<std::size_t> take(n_);
    std::vector<char> reach(n_);
    std::vector<std::size_t> queue;
    queue.reserve(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      const std::size_t c0 = col_of_[i];
      if (c0 == 0) continue;
      // Rows after i that can hand their column on along tight edges so that
      // somebody ends up holding c0.
      std::fill(reach.begin(), reach.end(), 0);
      queue.clear();
      queue.push_back(c0);
      for (std::size_t qi = 0; qi < queue.size(); ++qi) {
        const std::size_t c = queue[qi];
        for (std::size_t r = i + 1; r < n_; ++r) {
          if (reach[r] || !Tight(r, c)) continue;
          reach[r] = 1;
          take[r] = c;
          queue.push_back(col_of_[r]);
        }
      }
      std::size_t target = kNone;
      for (std::size_t j = 0; j < c0; ++j) {
        const std::size_t r = row_of_[j];
        if (r > i && reach[r] && Tight(i, j)) {
          target = j;
          break;
        }
      }
      if (target == kNone) continue;
      std::size_t cur = row_of_[target];
      Assign(i, target);
      for (;;) {
        const std::size_t c = take[cur];
        const std::size_t next = row_of_[c];
        Assign(cur, c);
        if (c == c0) break;
        cur = next;
      }
    }
  }

  void Assign(std::size_t r, std::size_t c) {
    col_of_[r] = c;
    row_of_[c] = r;
  }

  const ScoreMatrix& s_;
  std::size_t n_;
  std::vector<double> u_, v_;
  std::vector<std::size_t> col_of_, row_of_;
};

}  // namespace

ScoreMatrix::ScoreMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), scores_(rows * cols, 0.0) {}

ScoreMatrix::ScoreMatrix(std::size_t rows, std::size_t cols,
                         std::vector<double> scores)
    : rows_(rows), cols_(cols), scores_(std::move(scores)) {
  if (scores_.size() != rows * cols) {
    throw std::invalid_argument("score count does not match matrix shape");
  }
  for (double s : scores_) CheckScore(s);
}

void ScoreMatrix::set(std::size_t r, std::size_t c, double score) {
  CheckScore(score);
  scores_[r * cols_ + c] = score;
}

double Assignment::TotalScore() const {
  double total = 0.0;
  for (const Match& m : matches) total += m.score;
  return total;
}

Assignment HungarianMatch(const ScoreMatrix& scores) {
  Assignment out;
  const std::size_t rows = scores.rows();
  const std::size_t cols = scores.cols();
  if (rows == 0 || cols == 0) {
    for (std::size_t r = 0; r < rows; ++r) out.unmatched_predictions.push_back(r);
    for (std::size_t c = 0; c < cols; ++c) out.unmatched_ground_truths.push_back(c);
    return out;
  }
  const std::vector<std::size_t> col_of = Solver(scores).Solve();
  std::vector<char> gt_used(cols, 0);
  for (std::size_t r = 0; r < rows; ++r) {
    const std::size_t c = col_of[r];
    if (c < cols) {
      out.matches.push_back(Match{r, c, scores.at(r, c)});
      gt_used[c] = 1;
    } else {
      out.unmatched_predictions.push_back(r);
    }
  }
  for (std::size_t c = 0; c < cols; ++c) {
    if (!gt_used[c]) out.unmatched_ground_truths.push_back(c);
  }
  return out;
}

}  // namespace regionkit
