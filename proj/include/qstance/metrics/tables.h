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

// Report tables over the stage outputs. Headers and row keys are fixed:
// closed vocabularies (stances, meta-topics, dialogicity categories) always
// produce every row, with zero counts and empty cells where a value is
// undefined.

#ifndef QSTANCE_METRICS_TABLES_H_
#define QSTANCE_METRICS_TABLES_H_

#include <vector>

#include "qstance/answers/qa.h"
#include "qstance/corpus/types.h"
#include "qstance/metrics/indices.h"
#include "qstance/stance/labels.h"
#include "qstance/util/io.h"

namespace qstance::metrics {

// Stance,N,% of interrogatives — gated questions per stance, rows in
// alphabetical order.
CsvTable StanceGlobalTable(const std::vector<stance::Prediction> &predictions,
                           double stance_gate = kDefaultStanceGate);

// Meta-topic,Articles,Mean interrogative index,% questions with ORG,
// % with LOC / EVENT — one row per meta-topic label, plus "unassigned"
// when any article is unassigned. Mean ID_a is article-weighted, entity
// shares are pooled over questions.
CsvTable MetaTopicTable(const std::vector<ArticleIndexRecord> &records);

// Source,Articles,Country/region,Scale,Type — one row per source present
// in the corpus; unlisted sources show "unknown".
CsvTable OutletTable(const std::vector<corpus::ArticleRecord> &articles);

// Stance,N questions,% answered — one row per stance plus "All stances".
CsvTable AnswerabilityByStanceTable(const std::vector<answers::QaRecord> &records);

// Category,N,% of interrogatives — Unanswered, Answered (internal),
// Answered (via quotes).
CsvTable DialogicityTable(const std::vector<answers::QaRecord> &records);

// Percentage with one decimal, or empty when the denominator is zero.
std::string Percent(double numerator, double denominator);

}  // namespace qstance::metrics

#endif  // QSTANCE_METRICS_TABLES_H_
