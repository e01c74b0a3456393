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

// Teacher-student workflow: teacher pseudo-labeling of candidate and
// calibration sentences, high-confidence filtering, article-disjoint
// training export, and gated two-step student inference.

#ifndef QSTANCE_STANCE_PIPELINE_H_
#define QSTANCE_STANCE_PIPELINE_H_

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "qstance/corpus/types.h"
#include "qstance/stance/label_client.h"
#include "qstance/stance/labels.h"

namespace qstance::stance {

inline constexpr double kDefaultTeacherKeep = 0.7;
inline constexpr double kDefaultBinaryGate = 0.7;
inline constexpr double kDefaultHoldoutFraction = 0.10;

// An item the provider answered with something unusable.
struct LabelError {
  std::string article_id;
  int sent_id = 0;
  std::string stage;  // "binary" or "stance"
  std::string message;

  Json ToJson() const;
};

using Articles = std::vector<std::vector<corpus::SentenceRecord>>;

struct PseudoLabelOutput {
  std::vector<PseudoLabel> labels;  // sorted by (article_id, sent_id)
  std::vector<LabelError> errors;
};

// Labels every sentence in `selected` with the binary teacher, then the
// positives with the stance teacher. Inputs are ±3-sentence context windows.
// Sentences whose binary answer is unusable are reported in `errors` and
// left out; an unusable stance answer keeps the binary label.
PseudoLabelOutput PseudoLabelSentences(const Articles &articles,
                                       const std::set<corpus::SentenceKey> &selected,
                                       const std::set<corpus::SentenceKey> &calibration,
                                       const LabelClient &binary_teacher,
                                       const LabelClient &stance_teacher);

struct TrainingRow {
  std::string article_id;
  int sent_id = 0;
  std::string context_text;
  std::string label;

  // Exported form: {"context_text","label"}.
  Json ToJson() const { return Json{{"context_text", context_text}, {"label", label}}; }
};

struct TrainingRows {
  std::vector<TrainingRow> binary;  // labels "interrogative" / "non-interrogative"
  std::vector<TrainingRow> stance;  // six stance labels
};

// Keeps binary rows with binary_confidence >= threshold and stance rows
// with stance_confidence >= threshold (inclusive). Threshold in (0, 1].
TrainingRows FilterHighConfidence(const std::vector<PseudoLabel> &labels,
                                  double threshold = kDefaultTeacherKeep);

struct ExportOptions {
  double holdout_fraction = kDefaultHoldoutFraction;
  uint64_t seed = 0;
  // Recorded in the manifest only.
  double threshold = kDefaultTeacherKeep;
};

struct TrainingExport {
  std::vector<TrainingRow> train_binary;
  std::vector<TrainingRow> validation_binary;
  std::vector<TrainingRow> train_stance;
  std::vector<TrainingRow> validation_stance;
  std::set<std::string> train_articles;
  std::set<std::string> validation_articles;
  Json manifest;
};

// Splits by article: the union of article ids of both tasks, minus the
// exclusion set, is shuffled with the seed and round(fraction * n)
// articles go to validation. Both tasks share the split. Throws DataError
// when nothing is left after exclusion.
TrainingExport ExportTrainingSet(const TrainingRows &rows,
                                 const std::set<std::string> &excluded_articles,
                                 const ExportOptions &options);

// Writes {train,validation}_{binary,stance}.jsonl and manifest.json.
void WriteTrainingExport(const TrainingExport &data, const std::string &dir);

struct InferenceOutput {
  std::vector<Prediction> predictions;  // sorted by (article_id, sent_id)
  std::vector<LabelError> errors;
  size_t stance_queries = 0;
};

// Runs the binary student on every sentence, then the stance student on
// sentences with binary_label true and binary_conf >= gate.
InferenceOutput InferTwoStep(const Articles &articles, const LabelClient &binary_student,
                             const LabelClient &stance_student,
                             double gate = kDefaultBinaryGate);

// Number of predictions carrying a stance.
size_t CountStanceLabeled(const std::vector<Prediction> &predictions);

}  // namespace qstance::stance

#endif  // QSTANCE_STANCE_PIPELINE_H_
