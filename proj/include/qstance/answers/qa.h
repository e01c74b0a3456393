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

// Per-question answer records: the answers stage joins predictions,
// sentence vectors and the span search, and propagates each group's result
// to every member sentence.

#ifndef QSTANCE_ANSWERS_QA_H_
#define QSTANCE_ANSWERS_QA_H_

#include <optional>
#include <string>
#include <vector>

#include "qstance/answers/embedding.h"
#include "qstance/answers/quotes.h"
#include "qstance/answers/search.h"
#include "qstance/corpus/types.h"
#include "qstance/stance/labels.h"

namespace qstance::answers {

struct QaRecord {
  std::string article_id;
  int sent_id = 0;
  stance::StanceLabel stance = stance::StanceLabel::kFramingProcedural;
  double stance_conf = 0.0;
  int group_id = 0;
  bool has_answer = false;
  // Best window score, kept for unanswered groups too; absent when the
  // group had no candidate window or a degenerate group vector.
  std::optional<double> answer_sim;
  std::optional<int> answer_start;
  std::optional<int> answer_len;
  std::optional<std::string> answer_text;
  bool question_has_quotes = false;
  bool answer_has_quotes = false;
  // Quote flag of the best window even when it is below the threshold, so
  // threshold sweeps can re-derive dialogicity without searching again.
  bool best_has_quotes = false;

  corpus::SentenceKey key() const { return {article_id, sent_id}; }
  Json ToJson() const;
  static QaRecord FromJson(const Json &j);
};

// Answer search over one article. `predictions` and `sentences` belong to
// the same article; `vectors` holds one unit vector per sentence.
std::vector<QaRecord> AnswerArticle(const std::vector<corpus::SentenceRecord> &sentences,
                                    const std::vector<stance::Prediction> &predictions,
                                    const std::vector<Vector> &vectors,
                                    const SearchConfig &config, const QuoteMarkers &markers,
                                    size_t *degenerate_groups = nullptr);

struct AnswersOutput {
  std::vector<QaRecord> records;  // sorted by (article_id, sent_id)
  size_t articles_with_questions = 0;
  size_t groups = 0;
  size_t degenerate_groups = 0;
  size_t renormalized_vectors = 0;
  // Vectors used for the search, for caching.
  VectorTable vectors;
};

// Runs the stage over all articles. Vectors come from `table` when given
// (every sentence of every question-containing article must be present),
// otherwise from `client`. Only articles with at least one question are
// embedded.
AnswersOutput RunAnswers(const std::vector<std::vector<corpus::SentenceRecord>> &articles,
                         const std::vector<stance::Prediction> &predictions,
                         const EmbeddingClient *client, const VectorTable *table,
                         const SearchConfig &config, const QuoteMarkers &markers, int threads);

}  // namespace qstance::answers

#endif  // QSTANCE_ANSWERS_QA_H_
