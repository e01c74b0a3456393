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

// Article-level indices: interrogative index ID_a = Q_a / S_a,
// answerability Ans_a = A_a / Q_a, dialogicity shares (unanswered,
// answered internally, answered via quoted speech) and addressivity shares.

#ifndef QSTANCE_METRICS_INDICES_H_
#define QSTANCE_METRICS_INDICES_H_

#include <optional>
#include <string>
#include <vector>

#include "qstance/answers/qa.h"
#include "qstance/corpus/types.h"
#include "qstance/semantics/entities.h"
#include "qstance/stance/labels.h"
#include "qstance/util/io.h"

namespace qstance::metrics {

inline constexpr double kDefaultStanceGate = 0.7;
inline constexpr std::string_view kUnknownGroup = "unknown";

struct ArticleIndexRecord {
  std::string article_id;
  // Grouping keys; "unknown" for sources missing from the ontology.
  std::string source;
  std::string country_region{kUnknownGroup};
  std::string scale{kUnknownGroup};
  std::string meta_topic = "unassigned";

  int S_a = 0;  // sentences
  int Q_a = 0;  // interrogative sentences (gated stance)
  int A_a = 0;  // answered interrogatives
  double ID_a = 0.0;
  std::optional<double> Ans_a;  // null when Q_a = 0

  // Dialogicity shares over Q_a; null when Q_a = 0.
  std::optional<double> share_unanswered;
  std::optional<double> share_internal;
  std::optional<double> share_external;
  int unanswered_count = 0;
  int internal_count = 0;
  int external_count = 0;

  // Addressivity shares over Q_a; null when Q_a = 0 or entities were not
  // provided.
  std::optional<double> addr_actor;
  std::optional<double> addr_group;
  std::optional<double> addr_issue;
  int actor_count = 0;
  int group_count = 0;
  int issue_count = 0;
  bool has_entities = false;

  // Questions whose context mentions at least one entity of each kind.
  int pers_flag_count = 0;
  int org_flag_count = 0;
  int loc_flag_count = 0;
  int event_flag_count = 0;
  int collective_flag_count = 0;  // any of the three group labels
  // Questions containing quotation markers themselves.
  int q_quote_count = 0;

  Json ToJson() const;
};

// Indices for one article. `predictions`, `qa` and `entities` belong to
// this article; every gated question must have a QA record (DataError
// otherwise). Entities may be null, leaving addressivity unset; a question
// without an entity record then counts as mentioning nothing.
ArticleIndexRecord ComputeArticleIndices(const std::string &article_id, int sentence_count,
                                         const std::vector<stance::Prediction> &predictions,
                                         const std::vector<answers::QaRecord> &qa,
                                         const std::vector<semantics::EntityRecord> *entities,
                                         double stance_gate = kDefaultStanceGate);

// Fills the grouping keys from the ontology-joined article record.
void SetGroupingKeys(const corpus::ArticleRecord &article, ArticleIndexRecord &record);

// Indices for every article, in article_id order. `sentence_counts` is
// indexed like `articles`.
std::vector<ArticleIndexRecord> ComputeAllIndices(
    const std::vector<corpus::ArticleRecord> &articles, const std::vector<int> &sentence_counts,
    const std::vector<stance::Prediction> &predictions,
    const std::vector<answers::QaRecord> &qa,
    const std::vector<semantics::EntityRecord> *entities,
    double stance_gate = kDefaultStanceGate, int threads = 1);

// Per-article CSV (one row per article, empty cells for null values).
CsvTable IndexTable(const std::vector<ArticleIndexRecord> &records);

}  // namespace qstance::metrics

#endif  // QSTANCE_METRICS_INDICES_H_
