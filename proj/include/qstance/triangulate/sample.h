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

// Stratified, seeded sampling of articles for human annotation. Articles
// are split by source group (local vs national) and by interrogative
// profile: whether they contain pseudo-labeled interrogatives and, if so,
// their dominant stance. The plan has four roles: a single-coded main
// evaluation set mixing question-containing and question-free articles, a
// double-coded agreement set, and one extension set per annotator. Every
// role is split evenly between the two source groups.

#ifndef QSTANCE_TRIANGULATE_SAMPLE_H_
#define QSTANCE_TRIANGULATE_SAMPLE_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qstance/corpus/types.h"
#include "qstance/metrics/spot_check.h"
#include "qstance/stance/labels.h"
#include "qstance/util/io.h"

namespace qstance::triangulate {

enum class SampleRole { kMainEval, kDouble, kExtensionA, kExtensionB };

inline constexpr SampleRole kAllRoles[] = {SampleRole::kMainEval, SampleRole::kDouble,
                                           SampleRole::kExtensionA, SampleRole::kExtensionB};

// "main_eval", "double", "extension-A", "extension-B".
std::string_view ToString(SampleRole role);
std::optional<SampleRole> ParseSampleRole(std::string_view text);

struct SamplePlan {
  int main_eval = 400;
  int double_coded = 100;
  int extension_per_annotator = 100;
  // Share of question-containing articles in the main evaluation set.
  double main_question_share = 0.5;
  std::string annotator_a = "A";
  std::string annotator_b = "B";
  uint64_t seed = 0;

  int total() const { return main_eval + double_coded + 2 * extension_per_annotator; }
  void Validate() const;  // ConfigError
};

// Most frequent stance among the labeled sentences; ties go to the label
// that comes first in the typology order. nullopt without stance labels.
std::optional<stance::StanceLabel> DominantStance(
    const std::vector<stance::PseudoLabel> &article_labels);

struct SampleItem {
  int ordinal = 0;
  std::string article_id;
  std::string source;
  metrics::SourceGroup source_group = metrics::SourceGroup::kLocal;
  SampleRole role = SampleRole::kMainEval;
  std::vector<std::string> annotators;
  bool question_containing = false;
  std::optional<stance::StanceLabel> dominant_stance;
};

struct Sample {
  std::vector<SampleItem> items;
  // 1.0 unless the population was too small for the plan.
  double scale = 1.0;
  std::vector<std::string> warnings;

  // Count of items with the given role (and source group, if given).
  int Count(SampleRole role, std::optional<metrics::SourceGroup> group = std::nullopt) const;
};

// Draws the sample. Articles without a known source group are left out.
// When a source group cannot fill its share of the plan, every role is
// scaled down by the same factor (with a warning) so that the roles keep
// their proportions and the source balance stays exact. Throws DataError
// when a source group has no articles at all.
Sample StratifiedSample(const std::vector<corpus::ArticleRecord> &articles,
                        const std::vector<stance::PseudoLabel> &labels, const SamplePlan &plan);

// Manifest CSV: ordinal,article_id,source,source_group,role,annotators,
// question_containing,dominant_stance. Annotators are ';'-joined.
CsvTable SampleManifest(const Sample &sample);
std::vector<SampleItem> ParseSampleManifest(const CsvTable &table);

}  // namespace qstance::triangulate

#endif  // QSTANCE_TRIANGULATE_SAMPLE_H_
