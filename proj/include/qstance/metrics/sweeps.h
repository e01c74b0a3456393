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

// Threshold sensitivity sweeps over stored stage outputs. Neither sweep
// calls a provider again: the confidence sweep re-gates stored prediction
// confidences, the similarity sweep re-thresholds the stored best-window
// scores of the answer search.

#ifndef QSTANCE_METRICS_SWEEPS_H_
#define QSTANCE_METRICS_SWEEPS_H_

#include <map>
#include <string>
#include <vector>

#include "qstance/answers/qa.h"
#include "qstance/stance/labels.h"
#include "qstance/util/io.h"

namespace qstance::metrics {

inline const std::vector<double> kConfidenceThresholds = {0.6, 0.7, 0.8};
inline const std::vector<double> kSimilarityThresholds = {0.05, 0.40, 0.80, 0.95, 0.975};

struct ConfidenceSweepRow {
  double threshold = 0.0;
  long n_questions = 0;
  double pct_sentences = 0.0;  // 100 * questions / sentences
  double mean_id = 0.0;        // article-weighted mean of Q_a(t) / S_a
};

// A prediction counts as a question at threshold t when it is labeled
// interrogative with binary confidence >= t and carries a stance with
// confidence >= t. `sentence_counts` lists every article (S_a), including
// those without predictions. Predictions for articles missing from it are
// a DataError.
std::vector<ConfidenceSweepRow> SweepConfidence(
    const std::vector<stance::Prediction> &predictions,
    const std::map<std::string, int> &sentence_counts,
    const std::vector<double> &thresholds = kConfidenceThresholds);

struct SimilaritySweepRow {
  double threshold = 0.0;
  long n_questions = 0;
  // Percentages of all questions; answered = internal + via quotes.
  double answered = 0.0;
  double unanswered = 0.0;
  double internal = 0.0;
  double via_quotes = 0.0;
};

// A question is answered at threshold t when its stored best-window score
// is >= t; it is answered via quotes when the best window also carries
// quotation markers. Questions without any candidate window (no stored
// score) stay unanswered at every threshold. Throws DataError for an
// answered record without a stored score.
std::vector<SimilaritySweepRow> SweepSimilarity(
    const std::vector<answers::QaRecord> &records,
    const std::vector<double> &thresholds = kSimilarityThresholds);

// Shortest decimal rendering of a threshold ("0.6", "0.975").
std::string FormatThreshold(double t);

// Confidence,N questions,% of sentences,Mean ID_a
CsvTable ConfidenceSweepTable(const std::vector<ConfidenceSweepRow> &rows);
// Similarity,answered,unanswered,internal,via quotes
CsvTable SimilaritySweepTable(const std::vector<SimilaritySweepRow> &rows);

}  // namespace qstance::metrics

#endif  // QSTANCE_METRICS_SWEEPS_H_
