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

// Spot-check sampler for the answer heuristic: a seeded sample of question
// groups from distinct articles, split between predicted answered and
// unanswered groups and balanced across the local and national source
// groups, written as a manifest with blank audit columns. The audited
// manifest is summarized back into counts per verdict.

#ifndef QSTANCE_METRICS_SPOT_CHECK_H_
#define QSTANCE_METRICS_SPOT_CHECK_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qstance/answers/qa.h"
#include "qstance/corpus/types.h"
#include "qstance/util/io.h"

namespace qstance::metrics {

enum class SourceGroup { kLocal, kNational };

std::string_view ToString(SourceGroup g);
// Hyper-local and regional outlets form the local group; national,
// transnational and thematic outlets the national group. Sources without
// an ontology entry have no group.
std::optional<SourceGroup> SourceGroupOf(const std::optional<corpus::OutletMeta> &outlet);

struct SpotCheckOptions {
  int n_answered = 40;
  int n_unanswered = 10;
  uint64_t seed = 0;
};

// Audit verdicts: clear answer, partial answer, answer elsewhere in the
// article, no genuine answer.
inline constexpr std::string_view kVerdicts[] = {"clear", "partial", "elsewhere", "none"};

struct SpotCheckItem {
  int sample_id = 0;
  SourceGroup stratum = SourceGroup::kLocal;
  std::string article_id;
  std::string source;
  int group_id = 0;
  std::vector<int> sent_ids;
  std::string question_text;
  bool predicted_answered = false;
  std::optional<double> answer_sim;
  std::optional<int> answer_start;
  std::optional<int> answer_len;
  std::optional<std::string> answer_text;
  std::string verdict;  // blank until audited
  std::string notes;
};

struct SpotCheckSample {
  std::vector<SpotCheckItem> items;
  std::vector<std::string> warnings;
};

// Draws n_answered + n_unanswered groups, one per article, half of each
// kind from each source group. A stratum short of groups of one kind is
// topped up from the other stratum; if the corpus as a whole is short the
// sample is smaller and a warning says so. Throws DataError when fewer
// eligible articles than requested groups exist.
SpotCheckSample SpotCheckSampleGroups(
    const std::vector<corpus::ArticleRecord> &articles,
    const std::vector<std::vector<corpus::SentenceRecord>> &sentences,
    const std::vector<answers::QaRecord> &records, const SpotCheckOptions &options);

CsvTable SpotCheckManifest(const SpotCheckSample &sample);
// Parses a (possibly audited) manifest back; throws DataError on
// malformed rows or verdicts outside the closed set.
std::vector<SpotCheckItem> ParseSpotCheckManifest(const CsvTable &table);

struct SpotCheckSummaryTables {
  CsvTable answered;    // Predicted answered,Local,National,Total
  CsvTable unanswered;  // Predicted unanswered,Local,National,Total
};

// Summarizes an audited manifest; every row needs a verdict (DataError
// otherwise). For predicted-unanswered rows "none" confirms the prediction
// and any other verdict counts as a missed answer.
SpotCheckSummaryTables SummarizeSpotCheck(const std::vector<SpotCheckItem> &items);

}  // namespace qstance::metrics

#endif  // QSTANCE_METRICS_SPOT_CHECK_H_
