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

// Evaluation of the two-step classifier against human gold units. Gold
// sentence labels are derived from unit spans: a sentence is a gold
// interrogative when any unit overlaps it, and takes the function of the
// unit that overlaps it most.

#ifndef QSTANCE_TRIANGULATE_EVALUATE_H_
#define QSTANCE_TRIANGULATE_EVALUATE_H_

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "qstance/corpus/types.h"
#include "qstance/stance/labels.h"
#include "qstance/triangulate/agreement.h"
#include "qstance/triangulate/gold.h"
#include "qstance/util/io.h"

namespace qstance::triangulate {

struct GoldSentence {
  std::string article_id;
  int sent_id = 0;
  bool positive = false;
  std::optional<stance::StanceLabel> stance;  // set for positives
};

// Labels every sentence of the given articles (grouped per article, in
// sent_id order) from the units of those articles. Overlap ties go to the
// earlier unit.
std::vector<GoldSentence> GoldSentenceLabels(
    const std::vector<std::vector<corpus::SentenceRecord>> &articles,
    const std::vector<GoldUnit> &units);

struct BinaryMetrics {
  int n = 0;
  int tp = 0;
  int fp = 0;
  int fn = 0;
  int tn = 0;
  std::optional<double> accuracy;
  std::optional<double> precision;
  std::optional<double> recall;
  std::optional<double> f1;
  // Names of metrics left null by a zero denominator.
  std::vector<std::string> flags;

  Json ToJson() const;
};

// Harmonic mean; nullopt when either input is missing or both are 0.
std::optional<double> F1Score(std::optional<double> precision, std::optional<double> recall);

// A sentence is predicted interrogative when its binary label is positive
// with confidence at or above `binary_gate`. Every gold sentence needs a
// prediction (DataError otherwise).
BinaryMetrics EvaluateBinary(const std::vector<stance::Prediction> &predictions,
                             const std::vector<GoldSentence> &gold, double binary_gate);

struct ClassMetrics {
  stance::StanceLabel label = stance::StanceLabel::kFramingProcedural;
  int support = 0;
  int predicted = 0;
  int correct = 0;
  std::optional<double> precision;
  std::optional<double> recall;
  std::optional<double> f1;
};

struct StanceEvaluation {
  bool conditional = false;
  // Gold positives considered (all of them, or the routed ones).
  int n_gold = 0;
  // Per class, in typology order.
  std::vector<ClassMetrics> classes;
  std::optional<double> macro_f1;
  std::optional<double> micro_f1;
  // Counts, rows gold and columns predicted, typology order. Gold
  // positives without a predicted stance are not in the matrix.
  LabelMatrix confusion{};
  std::vector<std::string> flags;

  // Row-normalized matrix; rows without any count are omitted.
  std::vector<std::pair<stance::StanceLabel, std::array<double, 6>>> NormalizedRows() const;
  Json ToJson() const;
};

// Scores the six-way stance over gold positives. Unconditional mode keeps
// every gold positive; one that was not routed to the stance stage counts
// as a miss for its class. Conditional mode keeps only gold positives that
// passed the binary gate and received a stance.
StanceEvaluation EvaluateStance(const std::vector<stance::Prediction> &predictions,
                                const std::vector<GoldSentence> &gold, bool conditional,
                                double binary_gate);

// Summary table `Metric,Value`.
CsvTable ModelAgreementTable(const BinaryMetrics &binary, const StanceEvaluation &stance,
                             const AgreementReport &agreement);
// Per-class table `Stance,Precision,Recall,F1,Support`.
CsvTable PerClassTable(const StanceEvaluation &evaluation);
// Row-normalized confusion matrix, header `Gold` plus the six labels.
CsvTable ConfusionTable(const StanceEvaluation &evaluation);

}  // namespace qstance::triangulate

#endif  // QSTANCE_TRIANGULATE_EVALUATE_H_
