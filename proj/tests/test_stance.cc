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

#include <atomic>
#include <chrono>
#include <cmath>
#include <mutex>
#include <thread>

#include "doctest.h"
#include "qstance/corpus/context.h"
#include "qstance/corpus/segmenter.h"
#include "qstance/providers/mock.h"
#include "qstance/stance/pipeline.h"
#include "qstance/util/errors.h"
#include "qstance/util/random.h"
#include "test_util.h"

namespace qstance::stance {
namespace {

using providers::FunctionTransport;
using providers::MockFlavor;
using providers::MockTransport;

std::shared_ptr<FunctionTransport> Fake(FunctionTransport::Handler handler) {
  return std::make_shared<FunctionTransport>(std::move(handler));
}

Articles MakeArticles(const std::vector<std::pair<std::string, std::string>> &texts) {
  Articles articles;
  const corpus::Segmenter segmenter;
  for (const auto &[id, text] : texts) {
    corpus::ArticleRecord a;
    a.article_id = id;
    a.source = "example.ch";
    a.text = text;
    articles.push_back(segmenter.Segment(a));
  }
  return articles;
}

TEST_CASE("stance labels: closed vocabulary and orders") {
  for (StanceLabel s : kAllStances) CHECK(ParseStance(ToString(s)) == s);
  CHECK(!ParseStance("Rhetorical").has_value());
  CHECK(DisplayName(StanceLabel::kEchoClarification) == "Echo-clarification");
  CHECK(TypologyRank(StanceLabel::kFramingProcedural) == 0);
  CHECK(TypologyRank(StanceLabel::kEchoClarification) == 5);
}

TEST_CASE("SnapToScale: nearest four-point value, flagged when moved") {
  CHECK(SnapToScale(0.8).value == 0.8);
  CHECK(!SnapToScale(0.8).snapped);
  CHECK(SnapToScale(0.79).value == 0.8);
  CHECK(SnapToScale(0.79).snapped);
  CHECK(SnapToScale(0.35).value == 0.2);  // midpoint goes low
  CHECK(SnapToScale(0.9).value == 0.95);
  CHECK(SnapToScale(1.7).value == 0.95);
  CHECK(SnapToScale(-1.0).value == 0.2);
}

TEST_CASE("teacher_label: accepted, snapped and unparsable items") {
  auto transport = Fake([](const std::string &endpoint, const Json &body) {
    CHECK(endpoint == providers::kBinaryEndpoint);
    CHECK(body["prompt_id"] == "teacher_binary_v1");
    return Json{{"results",
                 {Json{{"is_interrogative", true}, {"confidence", 0.8}},
                  "Bien sûr ! Voici ma réponse : oui",
                  R"({"is_interrogative": false, "confidence": 0.79})",
                  Json{{"confidence", 0.5}}}}};
  });
  LabelClient client(transport, TeacherOptions("binary"));
  const auto results = client.LabelBinary({"a", "b", "c", "d"});
  REQUIRE(results.size() == 4);
  CHECK(results[0].ok());
  CHECK(results[0].is_interrogative);
  CHECK(results[0].confidence == 0.8);
  CHECK(!results[0].snapped);
  CHECK(!results[1].ok());
  CHECK(results[2].ok());
  CHECK(results[2].confidence == 0.8);
  CHECK(results[2].snapped);
  CHECK(!results[3].ok());
}

TEST_CASE("label client: short results array is an item error for the whole batch") {
  auto transport = Fake([](const std::string &, const Json &body) {
    Json results = Json::array();
    for (size_t i = 0; i + 1 < body["items"].size(); ++i) {
      results.push_back(Json{{"label", "tag"}, {"confidence", 0.9}});
    }
    return Json{{"results", results}};
  });
  LabelClient client(transport, {.batch_size = 3});
  const auto results = client.LabelStance({"a", "b", "c", "d"});
  CHECK(!results[0].ok());
  CHECK(!results[2].ok());
  CHECK(!results[3].ok());  // a batch of one gets zero results
}

TEST_CASE("label client: transport failures fail the call") {
  auto transport = Fake([](const std::string &, const Json &) -> Json {
    throw ProviderError("connection refused");
  });
  LabelClient client(transport, {});
  CHECK_THROWS_AS(client.LabelBinary({"a"}), ProviderError);
  CHECK(client.LabelBinary({}).empty());
}

TEST_CASE("label client: concurrent batches come back in input order") {
  std::atomic<int> calls{0};
  auto transport = Fake([&](const std::string &, const Json &body) {
    ++calls;
    // Scramble timing a little.
    std::this_thread::sleep_for(std::chrono::microseconds(Fnv1a64(body.dump()) % 500));
    Json results = Json::array();
    for (const auto &item : body["items"]) {
      const double x = std::stod(item["context_text"].get<std::string>());
      results.push_back(Json{{"is_interrogative", true}, {"confidence", x / 1000.0}});
    }
    return Json{{"results", results}};
  });
  std::vector<std::string> contexts;
  for (int i = 0; i < 103; ++i) contexts.push_back(std::to_string(i));
  LabelClient client(transport, {.batch_size = 4, .max_in_flight = 8});
  const auto results = client.LabelBinary(contexts);
  CHECK(calls == 26);
  for (int i = 0; i < 103; ++i) CHECK(results[static_cast<size_t>(i)].confidence == doctest::Approx(i / 1000.0));
}

PseudoLabel Label(const std::string &article, int sent, bool q, double bc,
                  std::optional<StanceLabel> s = std::nullopt, std::optional<double> sc = std::nullopt) {
  PseudoLabel p;
  p.article_id = article;
  p.sent_id = sent;
  p.context_text = article + "/" + std::to_string(sent);
  p.is_interrogative = q;
  p.binary_confidence = bc;
  p.stance = s;
  p.stance_confidence = sc;
  return p;
}

TEST_CASE("filter_high_confidence: inclusive threshold per task") {
  const std::vector<PseudoLabel> labels = {
      Label("a", 0, true, 0.8, StanceLabel::kTag, 0.5),
      Label("a", 1, false, 0.5),
      Label("b", 0, true, 0.95, StanceLabel::kRhetorical, 0.95),
      Label("b", 1, false, 0.95),
  };
  const TrainingRows rows = FilterHighConfidence(labels, 0.7);
  CHECK(rows.binary.size() == 3);
  CHECK(rows.stance.size() == 1);
  CHECK(rows.stance[0].label == "rhetorical");
  CHECK(rows.binary[0].label == "interrogative");
  CHECK(rows.binary[2].label == "non-interrogative");

  const TrainingRows strict = FilterHighConfidence(labels, 0.95);
  CHECK(strict.binary.size() == 2);
  CHECK(strict.stance.size() == 1);
  CHECK_THROWS_AS(FilterHighConfidence(labels, 0.0), ConfigError);
  CHECK_THROWS_AS(FilterHighConfidence(labels, 1.5), ConfigError);
}

TrainingRows HundredArticles() {
  std::vector<PseudoLabel> labels;
  for (int a = 0; a < 100; ++a) {
    char id[8];
    std::snprintf(id, sizeof id, "art%03d", a);
    labels.push_back(Label(id, 0, true, 0.95, StanceLabel::kFramingProcedural, 0.8));
    labels.push_back(Label(id, 1, false, 0.8));
  }
  return FilterHighConfidence(labels);
}

TEST_CASE("export_training_set: 90/10 article split, disjoint and exclusion-free") {
  const TrainingRows rows = HundredArticles();
  const TrainingExport data = ExportTrainingSet(rows, {}, {.seed = 7});
  CHECK(data.train_articles.size() == 90);
  CHECK(data.validation_articles.size() == 10);
  for (const auto &a : data.validation_articles) CHECK(data.train_articles.count(a) == 0);
  for (const auto &r : data.train_binary) CHECK(data.train_articles.count(r.article_id));
  for (const auto &r : data.validation_stance) CHECK(data.validation_articles.count(r.article_id));
  CHECK(data.train_binary.size() == 180);
  CHECK(data.manifest["binary"]["validation"]["labels"]["interrogative"] == 10);

  const TrainingExport excluded = ExportTrainingSet(rows, {"art000", "art050"}, {.seed = 7});
  CHECK(excluded.train_articles.size() + excluded.validation_articles.size() == 98);
  for (const auto *split : {&excluded.train_binary, &excluded.validation_binary,
                            &excluded.train_stance, &excluded.validation_stance}) {
    for (const auto &r : *split) CHECK((r.article_id != "art000" && r.article_id != "art050"));
  }
  CHECK(excluded.manifest["excluded_articles"] == 2);
}

TEST_CASE("export_training_set: deterministic manifest and files") {
  const TrainingRows rows = HundredArticles();
  testing::TempDir dir1;
  testing::TempDir dir2;
  WriteTrainingExport(ExportTrainingSet(rows, {}, {.seed = 3}), dir1.path());
  WriteTrainingExport(ExportTrainingSet(rows, {}, {.seed = 3}), dir2.path());
  for (const char *f : {"manifest.json", "train_binary.jsonl", "validation_stance.jsonl"}) {
    CHECK(ReadFile(JoinPath(dir1.path(), f)) == ReadFile(JoinPath(dir2.path(), f)));
  }
  const Json row = Json::parse(ReadFile(JoinPath(dir1.path(), "train_binary.jsonl"))
                                   .substr(0, ReadFile(JoinPath(dir1.path(), "train_binary.jsonl")).find('\n')));
  CHECK(row.size() == 2);
  CHECK(row.contains("context_text"));
  CHECK(row.contains("label"));
  CHECK(ExportTrainingSet(rows, {}, {.seed = 4}).validation_articles !=
        ExportTrainingSet(rows, {}, {.seed = 3}).validation_articles);
}

TEST_CASE("export_training_set: nothing left after exclusion is an error") {
  std::set<std::string> all;
  for (int a = 0; a < 100; ++a) {
    char id[8];
    std::snprintf(id, sizeof id, "art%03d", a);
    all.insert(id);
  }
  CHECK_THROWS_AS(ExportTrainingSet(HundredArticles(), all, {.seed = 1}), DataError);
}

TEST_CASE("infer_two_step: gate rule examples") {
  // Binary answers keyed by target sentence.
  const std::map<std::string, std::pair<bool, double>> binary = {
      {"Un.", {true, 0.9}}, {"Deux.", {true, 0.6}}, {"Trois.", {false, 0.99}}};
  std::vector<std::string> stance_asked;
  std::mutex mutex;
  auto transport = Fake([&](const std::string &endpoint, const Json &body) {
    Json results = Json::array();
    for (const auto &item : body["items"]) {
      const std::string target = corpus::ExtractTarget(item["context_text"].get<std::string>());
      if (endpoint == providers::kBinaryEndpoint) {
        const auto &[label, conf] = binary.at(target);
        results.push_back(Json{{"is_interrogative", label}, {"confidence", conf}});
      } else {
        std::lock_guard<std::mutex> lock(mutex);
        stance_asked.push_back(target);
        results.push_back(Json{{"label", "information-seeking"}, {"confidence", 0.9}});
      }
    }
    return Json{{"results", results}};
  });
  LabelClient client(transport, {});
  const auto out = InferTwoStep(MakeArticles({{"a", "Un. Deux. Trois."}}), client, client, 0.7);
  REQUIRE(out.predictions.size() == 3);
  CHECK(stance_asked == std::vector<std::string>{"Un."});
  CHECK(out.predictions[0].stance == StanceLabel::kInformationSeeking);
  CHECK(!out.predictions[1].stance.has_value());
  CHECK(!out.predictions[2].stance.has_value());
  CHECK(out.stance_queries == 1);
}

std::string RandomArticle(SeededRng &rng) {
  static const std::vector<std::string> pool = {
      "Pourquoi le conseil a-t-il refusé ?", "Le projet avance lentement.",
      "Faut-il s'en inquiéter ?", "Reste à savoir qui paiera.",
      "Les habitants attendent une réponse.", "Vraiment ?",
      "C'est une bonne idée, n'est-ce pas ?", "Le maire a démissionné hier soir.",
      "Combien coûtera la rénovation ?", "On peut se demander si cela suffira.",
      "La séance est levée.", "Qui peut encore croire à ce projet ?"};
  std::string text;
  const size_t n = 3 + rng.UniformBelow(10);
  for (size_t i = 0; i < n; ++i) {
    if (!text.empty()) text += " ";
    text += pool[rng.UniformBelow(pool.size())];
  }
  return text;
}

TEST_CASE("infer_two_step: gate monotonicity on mock students") {
  SeededRng rng(21);
  std::vector<std::pair<std::string, std::string>> texts;
  for (int i = 0; i < 40; ++i) texts.push_back({"a" + std::to_string(i), RandomArticle(rng)});
  const Articles articles = MakeArticles(texts);
  LabelClient client(std::make_shared<MockTransport>(MockFlavor::kStudent), {.max_in_flight = 4});
  size_t previous = SIZE_MAX;
  for (double gate : {0.0, 0.5, 0.6, 0.7, 0.8, 0.9, 0.95, 1.0}) {
    const auto out = InferTwoStep(articles, client, client, gate);
    const size_t n = CountStanceLabeled(out.predictions);
    CAPTURE(gate);
    CHECK(n <= previous);
    previous = n;
    for (const auto &p : out.predictions) {
      CHECK(p.stance.has_value() == (p.binary_label && p.binary_conf >= gate));
    }
  }
}

TEST_CASE("pseudo-labeling with the mock teacher stays on the scale") {
  SeededRng rng(5);
  std::vector<std::pair<std::string, std::string>> texts;
  for (int i = 0; i < 20; ++i) texts.push_back({"t" + std::to_string(i), RandomArticle(rng)});
  const Articles articles = MakeArticles(texts);
  std::set<corpus::SentenceKey> selected;
  for (const auto &a : articles) {
    for (const auto &s : a) selected.insert({s.article_id, s.sent_id});
  }
  auto teacher = std::make_shared<MockTransport>(MockFlavor::kTeacher);
  const LabelClient binary(teacher, TeacherOptions("binary"));
  const LabelClient stance(teacher, TeacherOptions("stance"));
  const auto out = PseudoLabelSentences(articles, selected, {}, binary, stance);
  CHECK(out.errors.empty());
  CHECK(out.labels.size() == selected.size());
  for (const auto &p : out.labels) {
    CHECK(!SnapToScale(p.binary_confidence).snapped);
    if (p.stance) CHECK(p.is_interrogative);
    // Round trip through the stage file format.
    const PseudoLabel back = PseudoLabel::FromJson(p.ToJson());
    CHECK(back.ToJson() == p.ToJson());
  }
  CHECK(std::is_sorted(out.labels.begin(), out.labels.end(),
                       [](const auto &a, const auto &b) { return a.key() < b.key(); }));
}

TEST_CASE("prediction JSON: invariants checked on load") {
  Prediction p{"a", 1, true, 0.9, StanceLabel::kTag, 0.8};
  CHECK(Prediction::FromJson(p.ToJson()).stance == StanceLabel::kTag);
  Json bad = p.ToJson();
  bad["binary_label"] = false;
  CHECK_THROWS_AS(Prediction::FromJson(bad), DataError);
  bad = p.ToJson();
  bad["stance"] = "question";
  CHECK_THROWS_AS(Prediction::FromJson(bad), DataError);
  Json off_scale = Label("a", 0, true, 0.7).ToJson();
  CHECK_THROWS_AS(PseudoLabel::FromJson(off_scale), DataError);
}

TEST_CASE("prompt assets exist for the teacher modes") {
  CHECK(LoadPrompt(TeacherOptions("binary").prompt_id).find("Phrase cible") != std::string::npos);
  CHECK(LoadPrompt(TeacherOptions("stance").prompt_id).find("echo-clarification") !=
        std::string::npos);
  CHECK_THROWS_AS(LoadPrompt("nope"), ConfigError);
}

}  // namespace
}  // namespace qstance::stance
