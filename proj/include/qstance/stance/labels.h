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

// The six interrogative stance types and the per-sentence records of the
// labeling pipeline: teacher pseudo-labels and student predictions.

#ifndef QSTANCE_STANCE_LABELS_H_
#define QSTANCE_STANCE_LABELS_H_

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include "qstance/corpus/types.h"
#include "qstance/util/io.h"

namespace qstance::stance {

enum class StanceLabel {
  kInformationSeeking,
  kRhetorical,
  kLeading,
  kTag,
  kEchoClarification,
  kFramingProcedural,
};

// Serialization order.
inline constexpr std::array<StanceLabel, 6> kAllStances = {
    StanceLabel::kInformationSeeking, StanceLabel::kRhetorical,
    StanceLabel::kLeading,            StanceLabel::kTag,
    StanceLabel::kEchoClarification,  StanceLabel::kFramingProcedural};

// Order in which the typology introduces the types, from the most to the
// least common. Used to break ties deterministically and to order
// per-class report rows.
inline constexpr std::array<StanceLabel, 6> kTypologyOrder = {
    StanceLabel::kFramingProcedural, StanceLabel::kInformationSeeking,
    StanceLabel::kRhetorical,        StanceLabel::kLeading,
    StanceLabel::kTag,               StanceLabel::kEchoClarification};

// "information-seeking", "echo-clarification", ...
std::string_view ToString(StanceLabel label);
// "Information-seeking", "Echo-clarification", ...
std::string DisplayName(StanceLabel label);
std::optional<StanceLabel> ParseStance(std::string_view text);
// Position in kTypologyOrder.
int TypologyRank(StanceLabel label);

// Teacher confidences live on a four-point scale.
inline constexpr std::array<double, 4> kTeacherScale = {0.2, 0.5, 0.8, 0.95};

struct SnappedConfidence {
  double value = 0.0;
  bool snapped = false;  // input was not already on the scale
};

// Nearest scale value; exact midpoints go to the lower value. Values
// within 1e-9 of a scale point are accepted as-is.
SnappedConfidence SnapToScale(double confidence);

struct PseudoLabel {
  std::string article_id;
  int sent_id = 0;
  std::string context_text;
  bool is_interrogative = false;
  double binary_confidence = 0.0;
  std::optional<StanceLabel> stance;
  std::optional<double> stance_confidence;
  // Teacher answers that had to be snapped onto the scale.
  bool binary_snapped = false;
  bool stance_snapped = false;
  bool calibration_pick = false;

  corpus::SentenceKey key() const { return {article_id, sent_id}; }
  Json ToJson() const;
  // Validates the record invariants; throws DataError.
  static PseudoLabel FromJson(const Json &j);
};

struct Prediction {
  std::string article_id;
  int sent_id = 0;
  bool binary_label = false;
  double binary_conf = 0.0;
  std::optional<StanceLabel> stance;
  std::optional<double> stance_conf;

  corpus::SentenceKey key() const { return {article_id, sent_id}; }
  Json ToJson() const;
  static Prediction FromJson(const Json &j);
};

}  // namespace qstance::stance

#endif  // QSTANCE_STANCE_LABELS_H_
