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

// Pipeline stages. Each stage reads the files written by earlier stages in
// the output directory, writes its own files atomically, and returns a
// summary that is also stored as stages/<name>.json. Summaries hold counts
// only, so re-running a stage on unchanged inputs rewrites identical bytes.

#ifndef QSTANCE_CLI_STAGES_H_
#define QSTANCE_CLI_STAGES_H_

#include <optional>
#include <string>
#include <vector>

#include "qstance/cli/config.h"
#include "qstance/util/io.h"

namespace qstance::cli {

// Stage output files, relative to the output directory.
namespace files {
inline constexpr char kArticles[] = "articles.jsonl";
inline constexpr char kSentences[] = "sentences.jsonl";
inline constexpr char kCandidates[] = "candidates.jsonl";
inline constexpr char kPseudoLabels[] = "pseudo_labels.jsonl";
inline constexpr char kPseudoLabelErrors[] = "pseudo_label_errors.jsonl";
inline constexpr char kTrainDir[] = "train";
inline constexpr char kPredictions[] = "predictions.jsonl";
inline constexpr char kInferErrors[] = "infer_errors.jsonl";
inline constexpr char kQa[] = "qa.jsonl";
inline constexpr char kVectors[] = "vectors.jsonl";
inline constexpr char kEntities[] = "entities.jsonl";
inline constexpr char kIndices[] = "indices.csv";
inline constexpr char kSampleManifest[] = "sample_manifest.csv";
inline constexpr char kSpotCheckManifest[] = "spot_check_manifest.csv";
inline constexpr char kReportsDir[] = "reports";
inline constexpr char kEvalDir[] = "eval";
}  // namespace files

// Report tables by name, in emission order.
const std::vector<std::string> &ReportTableNames();

struct ReportOptions {
  // One table by name; all tables when empty.
  std::string table;
  // For the "aggregate" table.
  std::string dimension = "outlet";
  std::string metric = "id";
  std::string weighting = "article";
};

struct ReportResult {
  Json summary;
  // The CSV text of the selected table when a single table was asked for.
  std::string csv;
};

Json RunIngest(const PipelineConfig &config);
Json RunCandidates(const PipelineConfig &config);
Json RunPseudoLabel(const PipelineConfig &config);
Json RunExportTrain(const PipelineConfig &config);
Json RunInfer(const PipelineConfig &config);
Json RunAnswers(const PipelineConfig &config);
Json RunEntities(const PipelineConfig &config);
Json RunIndices(const PipelineConfig &config);
ReportResult RunReport(const PipelineConfig &config, const ReportOptions &options = {});
// kind: "confidence" or "similarity". Returns the table CSV text.
std::string RunSweep(const PipelineConfig &config, const std::string &kind);
Json RunSample(const PipelineConfig &config);
// Draws the spot-check manifest, or summarizes `audited` when given.
Json RunSpotCheck(const PipelineConfig &config, const std::string &audited = "");
Json RunEval(const PipelineConfig &config);
// Every stage in order; evaluation only when gold units are configured.
Json RunPipeline(const PipelineConfig &config);
// Blocks serving the annotation API.
void RunServe(const PipelineConfig &config);

}  // namespace qstance::cli

#endif  // QSTANCE_CLI_STAGES_H_
