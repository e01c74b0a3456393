// Copyright 2026 The qstance Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Embedding-based answer search. Consecutive question sentences form a
// group; the group's mean vector is compared with the mean vector of every
// short window of following sentences, and the best window above a cosine
// threshold is taken as the group's answer.
//
// Sentence indices are sent_ids (0-based, contiguous within an article).

#ifndef QSTANCE_ANSWERS_SEARCH_H_
#define QSTANCE_ANSWERS_SEARCH_H_

#include <optional>
#include <string>
#include <vector>

#include "qstance/stance/labels.h"

namespace qstance::answers {

using Vector = std::vector<double>;

struct SearchConfig {
  // Windows must lie within this many sentences after the last question.
  int horizon = 15;
  // Candidate window lengths, ascending.
  std::vector<int> window_lengths = {1, 2, 3, 4, 5};
  // Inclusive: a window scoring exactly the threshold is an answer.
  double similarity_threshold = 0.40;
  // Minimum stance confidence for a sentence to count as a question.
  double stance_gate = 0.7;

  // Throws ConfigError.
  void Validate() const;
};

struct QuestionGroup {
  std::string article_id;
  int group_id = 0;
  std::vector<int> sent_ids;  // contiguous, ascending
  Vector group_vector;        // unit norm unless degenerate
  // The member vectors cancel out; no direction to search with.
  bool degenerate = false;

  int last() const { return sent_ids.back(); }
};

struct AnswerSpan {
  int group_id = 0;
  bool found = false;
  // Best window, whether or not it clears the threshold. Absent when the
  // group has no candidate window at all (e.g. it ends the article).
  std::optional<int> best_start;
  std::optional<int> best_length;
  std::optional<double> similarity;

  std::optional<int> start() const { return found ? best_start : std::nullopt; }
  std::optional<int> length() const { return found ? best_length : std::nullopt; }
};

// Maximal runs of consecutive sent_ids among `question_ids` (ascending,
// unique). Group vectors are the renormalized mean of member vectors.
std::vector<QuestionGroup> GroupQuestions(const std::string &article_id,
                                          const std::vector<int> &question_ids,
                                          const std::vector<Vector> &vectors);

// Sentences that count as questions: stance present with stance_conf at or
// above the gate. Predictions must belong to one article.
std::vector<int> QuestionIds(const std::vector<stance::Prediction> &predictions,
                             double stance_gate);

// Running sums of sentence vectors; window sums in O(dim).
class PrefixSums {
 public:
  explicit PrefixSums(const std::vector<Vector> &vectors);

  size_t size() const { return n_; }
  size_t dim() const { return dim_; }
  // Sum of vectors[start, start + length).
  void WindowSum(size_t start, size_t length, Vector &out) const;

 private:
  size_t n_ = 0;
  size_t dim_ = 0;
  std::vector<double> sums_;  // (n + 1) x dim, row-major
};

// Scores every window of every configured length fully inside
// [last + 1, min(last + horizon, n - 1)] by cosine with the renormalized
// window mean; keeps the maximum, ties going to the earliest start and then
// the shortest length. Windows whose vectors sum to zero are skipped.
AnswerSpan FindAnswerSpan(const QuestionGroup &group, const PrefixSums &sums,
                          const SearchConfig &config);

}  // namespace qstance::answers

#endif  // QSTANCE_ANSWERS_SEARCH_H_
