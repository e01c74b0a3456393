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

#include "qstance/answers/qa.h"

#include <algorithm>
#include <map>
#include <set>

#include "qstance/util/errors.h"
#include "qstance/util/parallel.h"

namespace qstance::answers {

namespace {

template <typename T>
Json Nullable(const std::optional<T> &x) {
  return x ? Json(*x) : Json(nullptr);
}

template <typename T>
std::optional<T> OptionalField(const Json &j, const char *field) {
  if (!j.contains(field) || j[field].is_null()) return std::nullopt;
  return j[field].get<T>();
}

}  // namespace

Json QaRecord::ToJson() const {
  return Json{{"article_id", article_id},
              {"sent_id", sent_id},
              {"stance", std::string(stance::ToString(stance))},
              {"stance_conf", stance_conf},
              {"group_id", group_id},
              {"has_answer", has_answer},
              {"answer_sim", Nullable(answer_sim)},
              {"answer_start", Nullable(answer_start)},
              {"answer_len", Nullable(answer_len)},
              {"answer_text", Nullable(answer_text)},
              {"question_has_quotes", question_has_quotes},
              {"answer_has_quotes", answer_has_quotes},
              {"best_has_quotes", best_has_quotes}};
}

QaRecord QaRecord::FromJson(const Json &j) {
  QaRecord r;
  try {
    r.article_id = j.at("article_id").get<std::string>();
    r.sent_id = j.at("sent_id").get<int>();
    const std::string who = r.article_id + "#" + std::to_string(r.sent_id);
    const auto s = stance::ParseStance(j.at("stance").get<std::string>());
    if (!s) throw DataError("unknown stance in QA record " + who);
    r.stance = *s;
    r.stance_conf = j.at("stance_conf").get<double>();
    r.group_id = j.at("group_id").get<int>();
    r.has_answer = j.at("has_answer").get<bool>();
    r.answer_sim = OptionalField<double>(j, "answer_sim");
    r.answer_start = OptionalField<int>(j, "answer_start");
    r.answer_len = OptionalField<int>(j, "answer_len");
    r.answer_text = OptionalField<std::string>(j, "answer_text");
    r.question_has_quotes = j.at("question_has_quotes").get<bool>();
    r.answer_has_quotes = j.at("answer_has_quotes").get<bool>();
    r.best_has_quotes = j.value("best_has_quotes", r.answer_has_quotes);
    if (r.has_answer && (!r.answer_sim || !r.answer_start || !r.answer_len || !r.answer_text)) {
      throw DataError("answered QA record without span fields: " + who);
    }
    if (!r.has_answer && (r.answer_start || r.answer_len || r.answer_text || r.answer_has_quotes)) {
      throw DataError("unanswered QA record with span fields: " + who);
    }
  } catch (const Json::exception &e) {
    throw DataError(std::string("malformed QA record: ") + e.what());
  }
  return r;
}

std::vector<QaRecord> AnswerArticle(const std::vector<corpus::SentenceRecord> &sentences,
                                    const std::vector<stance::Prediction> &predictions,
                                    const std::vector<Vector> &vectors,
                                    const SearchConfig &config, const QuoteMarkers &markers,
                                    size_t *degenerate_groups) {
  if (vectors.size() != sentences.size()) {
    throw DataError("vector count differs from sentence count");
  }
  std::vector<QaRecord> records;
  if (sentences.empty()) return records;
  const std::string &article_id = sentences.front().article_id;
  std::map<int, const stance::Prediction *> by_id;
  for (const auto &p : predictions) by_id[p.sent_id] = &p;

  const auto groups = GroupQuestions(article_id, QuestionIds(predictions, config.stance_gate),
                                     vectors);
  if (groups.empty()) return records;
  const PrefixSums sums(vectors);
  for (const auto &group : groups) {
    if (group.degenerate && degenerate_groups != nullptr) ++*degenerate_groups;
    const AnswerSpan span = FindAnswerSpan(group, sums, config);
    std::string best_text;
    bool best_quotes = false;
    if (span.best_start) {
      for (int i = 0; i < *span.best_length; ++i) {
        const auto &s = sentences[static_cast<size_t>(*span.best_start + i)];
        if (i > 0) best_text += " ";
        best_text += s.text;
        best_quotes = best_quotes || markers.Detect(s.text);
      }
    }
    for (int id : group.sent_ids) {
      const stance::Prediction &p = *by_id.at(id);
      QaRecord r;
      r.article_id = article_id;
      r.sent_id = id;
      r.stance = *p.stance;
      r.stance_conf = *p.stance_conf;
      r.group_id = group.group_id;
      r.has_answer = span.found;
      r.answer_sim = span.similarity;
      r.question_has_quotes = markers.Detect(sentences[static_cast<size_t>(id)].text);
      r.best_has_quotes = best_quotes;
      if (span.found) {
        r.answer_start = span.best_start;
        r.answer_len = span.best_length;
        r.answer_text = best_text;
        r.answer_has_quotes = best_quotes;
      }
      records.push_back(std::move(r));
    }
  }
  return records;
}

AnswersOutput RunAnswers(const std::vector<std::vector<corpus::SentenceRecord>> &articles,
                         const std::vector<stance::Prediction> &predictions,
                         const EmbeddingClient *client, const VectorTable *table,
                         const SearchConfig &config, const QuoteMarkers &markers, int threads) {
  config.Validate();
  if (client == nullptr && table == nullptr) {
    throw ConfigError("answers stage needs an embedding provider or a vector file");
  }
  std::map<std::string, std::vector<stance::Prediction>> by_article;
  for (const auto &p : predictions) by_article[p.article_id].push_back(p);

  // Articles that have at least one question.
  std::vector<size_t> active;
  for (size_t a = 0; a < articles.size(); ++a) {
    if (articles[a].empty()) continue;
    auto it = by_article.find(articles[a].front().article_id);
    if (it != by_article.end() && !QuestionIds(it->second, config.stance_gate).empty()) {
      active.push_back(a);
    }
  }

  AnswersOutput out;
  out.articles_with_questions = active.size();
  std::vector<std::vector<Vector>> vectors(active.size());
  if (table != nullptr) {
    for (size_t i = 0; i < active.size(); ++i) {
      vectors[i] = ArticleVectors(*table, articles[active[i]], &out.renormalized_vectors);
    }
  } else {
    std::vector<std::string> inputs;
    for (size_t a : active) {
      auto more = EmbeddingInputs(articles[a]);
      inputs.insert(inputs.end(), more.begin(), more.end());
    }
    EmbeddingBatch batch = client->Embed(inputs);
    out.renormalized_vectors = batch.renormalized;
    size_t next = 0;
    for (size_t i = 0; i < active.size(); ++i) {
      const size_t n = articles[active[i]].size();
      vectors[i].assign(std::make_move_iterator(batch.vectors.begin() + static_cast<long>(next)),
                        std::make_move_iterator(batch.vectors.begin() + static_cast<long>(next + n)));
      next += n;
    }
  }

  std::vector<std::vector<QaRecord>> per_article(active.size());
  std::vector<size_t> degenerate(active.size(), 0);
  ParallelFor(active.size(), threads, [&](size_t i) {
    const auto &sentences = articles[active[i]];
    per_article[i] = AnswerArticle(sentences, by_article.at(sentences.front().article_id),
                                   vectors[i], config, markers, &degenerate[i]);
  });
  for (size_t i = 0; i < active.size(); ++i) {
    out.degenerate_groups += degenerate[i];
    std::set<int> groups;
    for (auto &r : per_article[i]) {
      groups.insert(r.group_id);
      out.records.push_back(std::move(r));
    }
    out.groups += groups.size();
    const auto &sentences = articles[active[i]];
    for (size_t s = 0; s < sentences.size(); ++s) {
      out.vectors[{sentences[s].article_id, sentences[s].sent_id}] = vectors[i][s];
    }
  }
  std::sort(out.records.begin(), out.records.end(),
            [](const QaRecord &a, const QaRecord &b) { return a.key() < b.key(); });
  return out;
}

}  // namespace qstance::answers
