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

#include "qstance/cli/stages.h"

#include <filesystem>
#include <map>
#include <set>

#include "qstance/annotate/server.h"
#include "qstance/annotate/service.h"
#include "qstance/answers/embedding.h"
#include "qstance/answers/qa.h"
#include "qstance/answers/quotes.h"
#include "qstance/candidates/candidates.h"
#include "qstance/corpus/ingest.h"
#include "qstance/corpus/segmenter.h"
#include "qstance/metrics/aggregate.h"
#include "qstance/metrics/indices.h"
#include "qstance/metrics/spot_check.h"
#include "qstance/metrics/sweeps.h"
#include "qstance/metrics/tables.h"
#include "qstance/providers/transport.h"
#include "qstance/semantics/entities.h"
#include "qstance/semantics/topics.h"
#include "qstance/stance/label_client.h"
#include "qstance/stance/pipeline.h"
#include "qstance/triangulate/agreement.h"
#include "qstance/triangulate/evaluate.h"
#include "qstance/triangulate/gold.h"
#include "qstance/triangulate/sample.h"
#include "qstance/util/errors.h"
#include "qstance/util/logging.h"
#include "qstance/util/parallel.h"

namespace qstance::cli {

namespace {

namespace fs = std::filesystem;

using Grouped = std::vector<std::vector<corpus::SentenceRecord>>;

// Which stage writes each file, for "missing prior stage" messages.
const std::map<std::string, std::string> kProducer = {
    {files::kArticles, "ingest"},          {files::kSentences, "ingest"},
    {files::kCandidates, "candidates"},    {files::kPseudoLabels, "pseudo-label"},
    {files::kPredictions, "infer"},        {files::kQa, "answers"},
    {files::kEntities, "entities"},        {files::kSampleManifest, "sample"},
    {files::kSpotCheckManifest, "spot-check"}};

std::string StageInput(const PipelineConfig &config, const std::string &name) {
  const std::string path = config.OutPath(name);
  if (!FileExists(path)) {
    auto it = kProducer.find(name);
    throw DataError("missing prior stage output " + path +
                    (it != kProducer.end() ? "; run `qstance " + it->second + "` first" : ""));
  }
  return path;
}

Json Finish(const PipelineConfig &config, const std::string &stage, Json summary) {
  summary["stage"] = stage;
  WriteFileAtomic(config.OutPath("stages/" + stage + ".json"), summary.dump(2) + "\n");
  return summary;
}

template <typename T>
void WriteRecords(const std::string &path, const std::vector<T> &records) {
  std::vector<Json> rows;
  rows.reserve(records.size());
  for (const auto &r : records) rows.push_back(r.ToJson());
  WriteJsonLines(path, rows);
}

template <typename T, typename Parse>
std::vector<T> ReadRecords(const std::string &path, Parse parse) {
  std::vector<T> out;
  for (const Json &row : ReadJsonLines(path)) out.push_back(parse(row));
  return out;
}

// Articles as written by ingest, joined with the ontology and the
// meta-topic map from the current configuration.
std::vector<corpus::ArticleRecord> LoadArticles(const PipelineConfig &config) {
  auto articles = ReadRecords<corpus::ArticleRecord>(StageInput(config, files::kArticles),
                                                     corpus::ArticleFromJson);
  corpus::JoinOntology(articles, corpus::Ontology::Load(config.ontology));
  semantics::MetaTopicMap topics;
  if (!config.meta_topics.empty()) topics = semantics::MetaTopicMap::Load(config.meta_topics);
  return semantics::JoinMetaTopics(std::move(articles), topics);
}

Grouped LoadSentences(const PipelineConfig &config) {
  return corpus::GroupSentencesByArticle(ReadRecords<corpus::SentenceRecord>(
      StageInput(config, files::kSentences), corpus::SentenceFromJson));
}

std::vector<stance::PseudoLabel> LoadPseudoLabels(const PipelineConfig &config) {
  return ReadRecords<stance::PseudoLabel>(StageInput(config, files::kPseudoLabels),
                                          stance::PseudoLabel::FromJson);
}

std::vector<stance::Prediction> LoadPredictions(const PipelineConfig &config) {
  return ReadRecords<stance::Prediction>(StageInput(config, files::kPredictions),
                                         stance::Prediction::FromJson);
}

std::vector<answers::QaRecord> LoadQa(const PipelineConfig &config) {
  return ReadRecords<answers::QaRecord>(StageInput(config, files::kQa),
                                        answers::QaRecord::FromJson);
}

std::vector<triangulate::SampleItem> LoadManifest(const PipelineConfig &config) {
  return triangulate::ParseSampleManifest(ReadCsv(StageInput(config, files::kSampleManifest)));
}

std::map<std::string, int> SentenceCounts(const Grouped &sentences) {
  std::map<std::string, int> counts;
  for (const auto &a : sentences) {
    if (!a.empty()) counts[a.front().article_id] = static_cast<int>(a.size());
  }
  return counts;
}

std::shared_ptr<providers::JsonTransport> Transport(const PipelineConfig &config,
                                                    const std::string &address,
                                                    const std::string &role) {
  return providers::MakeTransport(address, config.CassetteFor(role), config.record);
}

answers::SearchConfig SearchConfigOf(const PipelineConfig &config) {
  answers::SearchConfig search;
  search.horizon = config.horizon;
  search.window_lengths = config.window_lengths;
  search.similarity_threshold = config.similarity;
  search.stance_gate = config.stance_gate;
  search.Validate();
  return search;
}

std::vector<metrics::ArticleIndexRecord> ComputeIndices(const PipelineConfig &config,
                                                        bool *with_entities = nullptr) {
  const auto articles = LoadArticles(config);
  const auto counts = SentenceCounts(LoadSentences(config));
  std::vector<int> sentence_counts;
  for (const auto &a : articles) {
    auto it = counts.find(a.article_id);
    sentence_counts.push_back(it == counts.end() ? 0 : it->second);
  }
  std::optional<std::vector<semantics::EntityRecord>> entities;
  if (FileExists(config.OutPath(files::kEntities))) {
    entities = ReadRecords<semantics::EntityRecord>(config.OutPath(files::kEntities),
                                                    semantics::EntityRecord::FromJson);
  } else {
    LogWarning("no entities stage output; addressivity and entity shares stay empty");
  }
  if (with_entities != nullptr) *with_entities = entities.has_value();
  return metrics::ComputeAllIndices(articles, sentence_counts, LoadPredictions(config),
                                    LoadQa(config), entities ? &*entities : nullptr,
                                    config.stance_gate, config.threads);
}

// Gold units and annotation sessions: either an annotation store directory
// or a plain units file (then every manifest task counts as complete).
struct GoldData {
  std::vector<triangulate::GoldUnit> units;
  std::vector<annotate::Session> sessions;
};

GoldData LoadGold(const PipelineConfig &config,
                  const std::vector<triangulate::SampleItem> &manifest) {
  GoldData gold;
  if (config.gold.empty()) throw ConfigError("evaluation needs gold units (gold = ...)");
  if (fs::is_directory(config.gold)) {
    const std::string units = JoinPath(config.gold, annotate::kUnitsFile);
    const std::string sessions = JoinPath(config.gold, annotate::kSessionsFile);
    if (FileExists(units)) gold.units = triangulate::ReadGoldUnits(units);
    if (FileExists(sessions)) gold.sessions = annotate::ReadSessions(sessions);
    return gold;
  }
  if (!FileExists(config.gold)) throw ConfigError("gold units not found: " + config.gold);
  gold.units = triangulate::ReadGoldUnits(config.gold);
  for (const auto &item : manifest) {
    for (const auto &a : item.annotators) {
      gold.sessions.push_back(annotate::Session{annotate::TaskId(item), item.article_id, a,
                                                annotate::TaskStatus::kComplete, 1});
    }
  }
  return gold;
}

struct Evaluation {
  triangulate::BinaryMetrics binary;
  triangulate::StanceEvaluation unconditional;
  triangulate::StanceEvaluation conditional;
  triangulate::AgreementReport agreement;
  Json agreement_payload;
  int n_eval_articles = 0;
};

Evaluation Evaluate(const PipelineConfig &config) {
  const auto manifest = LoadManifest(config);
  const GoldData gold = LoadGold(config, manifest);
  std::set<std::pair<std::string, std::string>> complete;
  for (const auto &s : gold.sessions) {
    if (s.status == annotate::TaskStatus::kComplete) complete.insert({s.article_id, s.annotator_id});
  }

  // Single-coded main evaluation articles finished by their annotator.
  std::map<std::string, std::string> eval_articles;
  for (const auto &item : manifest) {
    if (item.role != triangulate::SampleRole::kMainEval) continue;
    if (complete.count({item.article_id, item.annotators.front()})) {
      eval_articles[item.article_id] = item.annotators.front();
    }
  }
  std::vector<triangulate::GoldUnit> eval_units;
  for (const auto &u : gold.units) {
    auto it = eval_articles.find(u.article_id);
    if (it != eval_articles.end() && it->second == u.annotator_id) eval_units.push_back(u);
  }
  Grouped eval_sentences;
  for (auto &article : LoadSentences(config)) {
    if (!article.empty() && eval_articles.count(article.front().article_id)) {
      eval_sentences.push_back(std::move(article));
    }
  }
  if (eval_sentences.size() != eval_articles.size()) {
    throw DataError("some evaluation articles have no sentences in the ingest output");
  }

  Evaluation e;
  e.n_eval_articles = static_cast<int>(eval_articles.size());
  const auto predictions = LoadPredictions(config);
  const auto gold_sentences = triangulate::GoldSentenceLabels(eval_sentences, eval_units);
  e.binary = triangulate::EvaluateBinary(predictions, gold_sentences, config.binary_gate);
  e.unconditional =
      triangulate::EvaluateStance(predictions, gold_sentences, false, config.binary_gate);
  e.conditional =
      triangulate::EvaluateStance(predictions, gold_sentences, true, config.binary_gate);
  e.agreement_payload = annotate::AgreementPayload(manifest, gold.units, gold.sessions);
  if (const auto pair = annotate::DoubleCodingPair(manifest)) {
    e.agreement = triangulate::ComputeAgreement(
        gold.units, annotate::CompletedDoubleCoded(manifest, gold.sessions), pair->first,
        pair->second);
  } else {
    e.agreement.flags.push_back("insufficient_data");
  }
  return e;
}

}  // namespace

const std::vector<std::string> &ReportTableNames() {
  static const std::vector<std::string> names = {
      "stance-global", "meta-topics", "outlets",   "answerability", "dialogicity",
      "confidence",    "similarity",  "spot-check", "model-iaa",    "per-class",
      "confusion",     "aggregate"};
  return names;
}

Json RunIngest(const PipelineConfig &config) {
  if (config.articles.empty()) throw ConfigError("ingest needs an articles file (articles = ...)");
  if (!FileExists(config.articles)) {
    throw ConfigError("articles file not found: " + config.articles);
  }
  corpus::IngestReport report;
  corpus::IngestOptions options;
  options.lenient = config.lenient;
  const auto articles = corpus::IngestArticles(
      config.articles, corpus::Ontology::Load(config.ontology), options, &report);

  const corpus::Segmenter segmenter;
  std::vector<std::vector<corpus::SentenceRecord>> sentences(articles.size());
  ParallelFor(articles.size(), config.threads,
              [&](size_t i) { sentences[i] = segmenter.Segment(articles[i]); });
  std::vector<Json> article_rows, sentence_rows;
  for (size_t i = 0; i < articles.size(); ++i) {
    article_rows.push_back(corpus::ToJson(articles[i]));
    for (const auto &s : sentences[i]) sentence_rows.push_back(corpus::ToJson(s));
  }
  WriteJsonLines(config.OutPath(files::kArticles), article_rows);
  WriteJsonLines(config.OutPath(files::kSentences), sentence_rows);
  Json summary = report.ToJson();
  summary["sentences"] = sentence_rows.size();
  return Finish(config, "ingest", summary);
}

Json RunCandidates(const PipelineConfig &config) {
  const uint64_t seed = config.RequireSeed("candidates");
  const auto articles = LoadArticles(config);
  const Grouped sentences = LoadSentences(config);
  candidates::CandidateDetector::Options options;
  options.fold_accents = config.fold_accents;
  const candidates::CandidateDetector detector(candidates::RuleSet::Load(config.rules), options);

  std::vector<std::vector<candidates::CandidateRecord>> per_article(sentences.size());
  ParallelFor(sentences.size(), config.threads, [&](size_t i) {
    for (const auto &s : sentences[i]) per_article[i].push_back(detector.Detect(s));
  });

  std::map<std::string, std::string> source_of;
  for (const auto &a : articles) source_of[a.article_id] = a.source;
  std::map<std::string, candidates::SourcePool> pools;
  for (const auto &records : per_article) {
    for (const auto &r : records) {
      auto &pool = pools[source_of.count(r.article_id) ? source_of[r.article_id] : ""];
      if (r.is_candidate) {
        ++pool.n_candidates;
      } else {
        pool.non_candidates.push_back({r.article_id, r.sent_id});
      }
    }
  }
  const auto picks =
      candidates::CalibrationSamplePerSource(pools, seed, config.calibration_fraction);
  std::vector<Json> rows;
  size_t n_candidates = 0;
  std::map<std::string, size_t> by_rule;
  for (auto &records : per_article) {
    for (auto &r : records) {
      r.calibration_pick = picks.count({r.article_id, r.sent_id}) > 0;
      n_candidates += r.is_candidate;
      for (auto rule : r.matched_rules) ++by_rule[std::string(candidates::ToString(rule))];
      rows.push_back(r.ToJson());
    }
  }
  WriteJsonLines(config.OutPath(files::kCandidates), rows);
  return Finish(config, "candidates",
                Json{{"sentences", rows.size()},
                     {"candidates", n_candidates},
                     {"calibration_picks", picks.size()},
                     {"by_rule", by_rule}});
}

Json RunPseudoLabel(const PipelineConfig &config) {
  const Grouped sentences = LoadSentences(config);
  std::set<corpus::SentenceKey> selected, calibration;
  for (const Json &row : ReadJsonLines(StageInput(config, files::kCandidates))) {
    const auto r = candidates::CandidateRecord::FromJson(row);
    if (r.is_candidate) selected.insert({r.article_id, r.sent_id});
    if (r.calibration_pick) calibration.insert({r.article_id, r.sent_id});
  }
  auto transport = Transport(config, config.teacher_url, "teacher");
  auto binary_options = stance::TeacherOptions("binary");
  auto stance_options = stance::TeacherOptions("stance");
  binary_options.batch_size = stance_options.batch_size = config.teacher_batch;
  binary_options.max_in_flight = stance_options.max_in_flight = config.max_in_flight;
  const stance::LabelClient binary(transport, binary_options);
  const stance::LabelClient stance_client(transport, stance_options);
  const auto output =
      stance::PseudoLabelSentences(sentences, selected, calibration, binary, stance_client);
  WriteRecords(config.OutPath(files::kPseudoLabels), output.labels);
  WriteRecords(config.OutPath(files::kPseudoLabelErrors), output.errors);
  size_t interrogative = 0, with_stance = 0;
  for (const auto &l : output.labels) {
    interrogative += l.is_interrogative;
    with_stance += l.stance.has_value();
  }
  if (!output.errors.empty()) {
    LogWarning(std::to_string(output.errors.size()) + " teacher answers were unusable; see " +
               config.OutPath(files::kPseudoLabelErrors));
  }
  return Finish(config, "pseudo-label",
                Json{{"selected", selected.size()},
                     {"calibration", calibration.size()},
                     {"labels", output.labels.size()},
                     {"interrogative", interrogative},
                     {"with_stance", with_stance},
                     {"errors", output.errors.size()}});
}

Json RunExportTrain(const PipelineConfig &config) {
  const uint64_t seed = config.RequireSeed("export-train");
  const auto labels = LoadPseudoLabels(config);
  std::set<std::string> excluded;
  if (FileExists(config.OutPath(files::kSampleManifest))) {
    for (const auto &item : LoadManifest(config)) excluded.insert(item.article_id);
  } else {
    LogWarning("no sample manifest yet; annotation articles are not excluded from training");
  }
  stance::ExportOptions options;
  options.seed = seed;
  options.holdout_fraction = config.holdout_fraction;
  options.threshold = config.teacher_keep;
  const auto data = stance::ExportTrainingSet(
      stance::FilterHighConfidence(labels, config.teacher_keep), excluded, options);
  stance::WriteTrainingExport(data, config.OutPath(files::kTrainDir));
  return Finish(config, "export-train",
                Json{{"excluded_articles", excluded.size()},
                     {"train_binary", data.train_binary.size()},
                     {"validation_binary", data.validation_binary.size()},
                     {"train_stance", data.train_stance.size()},
                     {"validation_stance", data.validation_stance.size()},
                     {"train_articles", data.train_articles.size()},
                     {"validation_articles", data.validation_articles.size()}});
}

Json RunInfer(const PipelineConfig &config) {
  const Grouped sentences = LoadSentences(config);
  stance::LabelClient::Options options;
  options.batch_size = config.label_batch;
  options.max_in_flight = config.max_in_flight;
  // One cassette for the usual single student endpoint; separate ones when
  // the binary and stance students live at different addresses.
  const bool split = config.binary_url != config.stance_url;
  const auto binary_transport =
      Transport(config, config.binary_url, split ? "student-binary" : "student");
  const stance::LabelClient binary(binary_transport, options);
  const stance::LabelClient stance_client(
      split ? Transport(config, config.stance_url, "student-stance") : binary_transport,
      options);
  const auto output =
      stance::InferTwoStep(sentences, binary, stance_client, config.binary_gate);
  WriteRecords(config.OutPath(files::kPredictions), output.predictions);
  WriteRecords(config.OutPath(files::kInferErrors), output.errors);
  size_t positive = 0;
  for (const auto &p : output.predictions) positive += p.binary_label;
  if (!output.errors.empty()) {
    LogWarning(std::to_string(output.errors.size()) + " student answers were unusable; see " +
               config.OutPath(files::kInferErrors));
  }
  return Finish(config, "infer",
                Json{{"sentences", output.predictions.size()},
                     {"binary_positive", positive},
                     {"stance_queries", output.stance_queries},
                     {"with_stance", stance::CountStanceLabeled(output.predictions)},
                     {"errors", output.errors.size()}});
}

Json RunAnswers(const PipelineConfig &config) {
  const Grouped sentences = LoadSentences(config);
  const auto predictions = LoadPredictions(config);
  const auto search = SearchConfigOf(config);
  const auto markers = answers::QuoteMarkers::Load(config.quote_markers);
  std::optional<answers::VectorTable> table;
  std::optional<answers::EmbeddingClient> client;
  if (!config.vectors.empty()) {
    if (!FileExists(config.vectors)) throw ConfigError("vectors file not found: " + config.vectors);
    table = answers::ReadVectorFile(config.vectors);
  } else {
    client.emplace(Transport(config, config.embed_url, "embed"),
                   answers::EmbeddingClient::Options{config.embed_batch, config.max_in_flight});
  }
  const auto output = answers::RunAnswers(sentences, predictions, client ? &*client : nullptr,
                                          table ? &*table : nullptr, search, markers,
                                          config.threads);
  WriteRecords(config.OutPath(files::kQa), output.records);
  answers::WriteVectorFile(config.OutPath(files::kVectors), output.vectors);
  size_t answered = 0;
  for (const auto &r : output.records) answered += r.has_answer;
  return Finish(config, "answers",
                Json{{"questions", output.records.size()},
                     {"answered", answered},
                     {"articles_with_questions", output.articles_with_questions},
                     {"groups", output.groups},
                     {"degenerate_groups", output.degenerate_groups},
                     {"renormalized_vectors", output.renormalized_vectors}});
}

Json RunEntities(const PipelineConfig &config) {
  const Grouped sentences = LoadSentences(config);
  const auto qa = LoadQa(config);
  semantics::NerClient::Options options;
  options.batch_size = config.ner_batch;
  options.max_in_flight = config.max_in_flight;
  options.threshold = config.ner_threshold;
  const semantics::NerClient client(Transport(config, config.ner_url, "ner"), options);
  const auto records = semantics::AnnotateQuestionsAndAnswers(sentences, qa, client);
  WriteRecords(config.OutPath(files::kEntities), records);
  size_t question_mentions = 0, answer_mentions = 0;
  for (const auto &r : records) {
    question_mentions += r.question_entities.size();
    answer_mentions += r.answer_entities.size();
  }
  return Finish(config, "entities",
                Json{{"questions", records.size()},
                     {"question_mentions", question_mentions},
                     {"answer_mentions", answer_mentions}});
}

Json RunIndices(const PipelineConfig &config) {
  bool with_entities = false;
  const auto records = ComputeIndices(config, &with_entities);
  WriteCsv(config.OutPath(files::kIndices), metrics::IndexTable(records));
  size_t with_questions = 0;
  for (const auto &r : records) with_questions += r.Q_a > 0;
  return Finish(config, "indices",
                Json{{"articles", records.size()},
                     {"articles_with_questions", with_questions},
                     {"with_entities", with_entities}});
}

std::string RunSweep(const PipelineConfig &config, const std::string &kind) {
  CsvTable table;
  std::string name;
  if (kind == "confidence") {
    table = metrics::ConfidenceSweepTable(
        metrics::SweepConfidence(LoadPredictions(config), SentenceCounts(LoadSentences(config))));
    name = "table5_confidence.csv";
  } else if (kind == "similarity") {
    table = metrics::SimilaritySweepTable(metrics::SweepSimilarity(LoadQa(config)));
    name = "table6_similarity.csv";
  } else {
    throw ConfigError("sweep kind must be confidence or similarity, got \"" + kind + "\"");
  }
  WriteCsv(config.OutPath(std::string(files::kReportsDir) + "/" + name), table);
  return FormatCsv(table);
}

Json RunSample(const PipelineConfig &config) {
  triangulate::SamplePlan plan;
  plan.seed = config.RequireSeed("sample");
  plan.main_eval = config.sample_main;
  plan.double_coded = config.sample_double;
  plan.extension_per_annotator = config.sample_extension;
  plan.main_question_share = config.main_question_share;
  plan.annotator_a = config.annotator_a;
  plan.annotator_b = config.annotator_b;
  const auto sample =
      triangulate::StratifiedSample(LoadArticles(config), LoadPseudoLabels(config), plan);
  WriteCsv(config.OutPath(files::kSampleManifest), triangulate::SampleManifest(sample));
  Json roles = Json::object();
  for (auto role : triangulate::kAllRoles) {
    roles[std::string(triangulate::ToString(role))] =
        Json{{"local", sample.Count(role, metrics::SourceGroup::kLocal)},
             {"national", sample.Count(role, metrics::SourceGroup::kNational)}};
  }
  return Finish(config, "sample",
                Json{{"articles", sample.items.size()},
                     {"scale", sample.scale},
                     {"roles", roles},
                     {"warnings", sample.warnings}});
}

Json RunSpotCheck(const PipelineConfig &config, const std::string &audited) {
  const std::string reports = config.OutPath(files::kReportsDir);
  if (!audited.empty()) {
    if (!FileExists(audited)) throw ConfigError("audited manifest not found: " + audited);
    const auto items = metrics::ParseSpotCheckManifest(ReadCsv(audited));
    const auto tables = metrics::SummarizeSpotCheck(items);
    WriteCsv(JoinPath(reports, "table7_spot_check_answered.csv"), tables.answered);
    WriteCsv(JoinPath(reports, "table7_spot_check_unanswered.csv"), tables.unanswered);
    return Finish(config, "spot-check-summary", Json{{"items", items.size()}});
  }
  metrics::SpotCheckOptions options;
  options.seed = config.RequireSeed("spot-check");
  options.n_answered = config.spot_answered;
  options.n_unanswered = config.spot_unanswered;
  const auto sample = metrics::SpotCheckSampleGroups(LoadArticles(config), LoadSentences(config),
                                                     LoadQa(config), options);
  WriteCsv(config.OutPath(files::kSpotCheckManifest), metrics::SpotCheckManifest(sample));
  return Finish(config, "spot-check",
                Json{{"items", sample.items.size()}, {"warnings", sample.warnings}});
}

Json RunEval(const PipelineConfig &config) {
  const Evaluation e = Evaluate(config);
  const std::string dir = config.OutPath(files::kEvalDir);
  WriteCsv(JoinPath(dir, "table8_model_iaa.csv"),
           triangulate::ModelAgreementTable(e.binary, e.unconditional, e.agreement));
  WriteCsv(JoinPath(dir, "table9_per_class.csv"), triangulate::PerClassTable(e.unconditional));
  WriteCsv(JoinPath(dir, "figure3_confusion.csv"), triangulate::ConfusionTable(e.conditional));
  const Json details{{"evaluation_articles", e.n_eval_articles},
                     {"binary", e.binary.ToJson()},
                     {"stance", e.unconditional.ToJson()},
                     {"stance_conditional", e.conditional.ToJson()},
                     {"agreement", e.agreement_payload}};
  WriteFileAtomic(JoinPath(dir, "eval.json"), details.dump(2) + "\n");
  return Finish(config, "eval",
                Json{{"evaluation_articles", e.n_eval_articles},
                     {"evaluation_sentences", e.binary.n},
                     {"evaluation_interrogatives", e.unconditional.n_gold},
                     {"agreement_status", e.agreement_payload["status"]}});
}

ReportResult RunReport(const PipelineConfig &config, const ReportOptions &options) {
  const auto &names = ReportTableNames();
  if (!options.table.empty() &&
      std::find(names.begin(), names.end(), options.table) == names.end()) {
    std::string known;
    for (const auto &n : names) known += (known.empty() ? "" : ", ") + n;
    throw ConfigError("unknown report table \"" + options.table + "\"; known: " + known);
  }
  const bool all = options.table.empty();
  auto wanted = [&](const char *name) { return all || options.table == name; };
  const std::string dir = config.OutPath(files::kReportsDir);
  ReportResult result;
  Json written = Json::array();
  Json skipped = Json::array();
  auto emit = [&](const std::string &file, const CsvTable &table) {
    WriteCsv(JoinPath(dir, file), table);
    written.push_back(file);
    if (!all) result.csv = FormatCsv(table);
  };

  std::optional<std::vector<metrics::ArticleIndexRecord>> indices;
  auto index_records = [&]() -> const std::vector<metrics::ArticleIndexRecord> & {
    if (!indices) indices = ComputeIndices(config);
    return *indices;
  };

  if (wanted("stance-global")) {
    emit("table1_stance_global.csv",
         metrics::StanceGlobalTable(LoadPredictions(config), config.stance_gate));
  }
  if (wanted("meta-topics")) emit("table2_meta_topics.csv", metrics::MetaTopicTable(index_records()));
  if (wanted("outlets")) emit("table3_outlets.csv", metrics::OutletTable(LoadArticles(config)));
  if (wanted("answerability") || wanted("dialogicity")) {
    const auto qa = LoadQa(config);
    if (wanted("answerability")) {
      emit("table4_answerability.csv", metrics::AnswerabilityByStanceTable(qa));
    }
    if (wanted("dialogicity")) emit("table4_dialogicity.csv", metrics::DialogicityTable(qa));
  }
  if (wanted("confidence")) {
    emit("table5_confidence.csv",
         metrics::ConfidenceSweepTable(metrics::SweepConfidence(
             LoadPredictions(config), SentenceCounts(LoadSentences(config)))));
  }
  if (wanted("similarity")) {
    emit("table6_similarity.csv",
         metrics::SimilaritySweepTable(metrics::SweepSimilarity(LoadQa(config))));
  }
  if (wanted("spot-check")) {
    if (config.spot_check_audited.empty()) {
      if (!all) throw ConfigError("the spot-check table needs spot_check_audited = <manifest>");
      skipped.push_back("spot-check");
    } else {
      if (!FileExists(config.spot_check_audited)) {
        throw ConfigError("audited manifest not found: " + config.spot_check_audited);
      }
      const auto tables = metrics::SummarizeSpotCheck(
          metrics::ParseSpotCheckManifest(ReadCsv(config.spot_check_audited)));
      emit("table7_spot_check_answered.csv", tables.answered);
      WriteCsv(JoinPath(dir, "table7_spot_check_unanswered.csv"), tables.unanswered);
      written.push_back("table7_spot_check_unanswered.csv");
      if (!all) result.csv += "\n" + FormatCsv(tables.unanswered);
    }
  }
  if (wanted("model-iaa") || wanted("per-class") || wanted("confusion")) {
    if (config.gold.empty()) {
      if (!all) throw ConfigError("evaluation tables need gold units (gold = ...)");
      for (const char *n : {"model-iaa", "per-class", "confusion"}) skipped.push_back(n);
    } else {
      const Evaluation e = Evaluate(config);
      if (wanted("model-iaa")) {
        emit("table8_model_iaa.csv",
             triangulate::ModelAgreementTable(e.binary, e.unconditional, e.agreement));
      }
      if (wanted("per-class")) {
        emit("table9_per_class.csv", triangulate::PerClassTable(e.unconditional));
      }
      if (wanted("confusion")) {
        emit("figure3_confusion.csv", triangulate::ConfusionTable(e.conditional));
      }
    }
  }
  if (all) {
    for (auto dimension : {metrics::Dimension::kAll, metrics::Dimension::kOutlet,
                           metrics::Dimension::kCountry, metrics::Dimension::kScale,
                           metrics::Dimension::kMetaTopic}) {
      for (auto metric : metrics::AllMetrics()) {
        emit("aggregates/" + std::string(metrics::ToString(metric)) + "_by_" +
                 std::string(metrics::ToString(dimension)) + ".csv",
             metrics::AggregateTable(metrics::Aggregate(index_records(), dimension, metric),
                                     dimension));
      }
    }
  } else if (options.table == "aggregate") {
    const auto dimension = metrics::ParseDimension(options.dimension);
    const auto metric = metrics::ParseMetric(options.metric);
    metrics::Weighting weighting;
    if (options.weighting == "article") {
      weighting = metrics::Weighting::kArticle;
    } else if (options.weighting == "pooled") {
      weighting = metrics::Weighting::kPooled;
    } else {
      throw ConfigError("weighting must be article or pooled, got \"" + options.weighting + "\"");
    }
    emit("aggregates/" + options.metric + "_by_" + options.dimension +
             (weighting == metrics::Weighting::kPooled ? "_pooled" : "") + ".csv",
         metrics::AggregateTable(metrics::Aggregate(index_records(), dimension, metric, weighting),
                                 dimension));
  }
  if (skipped.size() > 0) {
    std::string list;
    for (const auto &s : skipped) list += (list.empty() ? "" : ", ") + s.get<std::string>();
    LogWarning("report tables skipped for missing inputs: " + list);
  }
  result.summary = Finish(config, all ? "report" : "report-" + options.table,
                          Json{{"written", written}, {"skipped", skipped}});
  return result;
}

Json RunPipeline(const PipelineConfig &config) {
  Json stages = Json::object();
  auto run = [&](const char *name, const std::function<Json()> &fn) {
    LogInfo("stage " + std::string(name));
    stages[name] = fn();
  };
  run("ingest", [&] { return RunIngest(config); });
  run("candidates", [&] { return RunCandidates(config); });
  run("pseudo-label", [&] { return RunPseudoLabel(config); });
  run("sample", [&] { return RunSample(config); });
  run("export-train", [&] { return RunExportTrain(config); });
  run("infer", [&] { return RunInfer(config); });
  run("answers", [&] { return RunAnswers(config); });
  run("entities", [&] { return RunEntities(config); });
  run("indices", [&] { return RunIndices(config); });
  run("spot-check", [&] { return RunSpotCheck(config); });
  if (!config.gold.empty()) run("eval", [&] { return RunEval(config); });
  run("report", [&] { return RunReport(config).summary; });
  return Finish(config, "pipeline", Json{{"stages", stages}});
}

void RunServe(const PipelineConfig &config) {
  const auto manifest = LoadManifest(config);
  std::set<std::string> wanted;
  for (const auto &item : manifest) wanted.insert(item.article_id);
  std::map<std::string, annotate::ArticleView> views;
  for (auto &a : LoadArticles(config)) {
    if (wanted.count(a.article_id)) views[a.article_id].article = std::move(a);
  }
  for (auto &group : LoadSentences(config)) {
    if (!group.empty() && wanted.count(group.front().article_id)) {
      views[group.front().article_id].sentences = std::move(group);
    }
  }
  if (FileExists(config.OutPath(files::kPredictions))) {
    for (auto &p : LoadPredictions(config)) {
      if (wanted.count(p.article_id)) views[p.article_id].prelabels.push_back(std::move(p));
    }
  } else {
    LogWarning("no predictions yet; articles are served without pre-labels");
  }
  annotate::AnnotationService service(manifest, std::move(views), config.StoreDir());
  annotate::AnnotationServer server(service, config.static_dir);
  server.Run(annotate::ParseServeAddress(config.serve_addr));
}

}  // namespace qstance::cli
