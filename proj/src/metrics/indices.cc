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

#include "qstance/metrics/indices.h"

#include <algorithm>
#include <map>
#include <set>

#include "qstance/answers/search.h"
#include "qstance/util/errors.h"
#include "qstance/util/parallel.h"

namespace qstance::metrics {

namespace {

Json Nullable(const std::optional<double> &x) { return x ? Json(*x) : Json(nullptr); }

std::string Cell(const std::optional<double> &x) { return x ? FormatFixed(*x, 6) : ""; }

template <typename T>
std::map<std::string, std::vector<T>> ByArticle(const std::vector<T> &rows) {
  std::map<std::string, std::vector<T>> out;
  for (const auto &r : rows) out[r.article_id].push_back(r);
  return out;
}

}  // namespace

Json ArticleIndexRecord::ToJson() const {
  return Json{{"article_id", article_id},
              {"source", source},
              {"country_region", country_region},
              {"scale", scale},
              {"meta_topic", meta_topic},
              {"S_a", S_a},
              {"Q_a", Q_a},
              {"A_a", A_a},
              {"ID_a", ID_a},
              {"Ans_a", Nullable(Ans_a)},
              {"share_unanswered", Nullable(share_unanswered)},
              {"share_internal", Nullable(share_internal)},
              {"share_external", Nullable(share_external)},
              {"addr_actor", Nullable(addr_actor)},
              {"addr_group", Nullable(addr_group)},
              {"addr_issue", Nullable(addr_issue)},
              {"pers_flag_count", pers_flag_count},
              {"org_flag_count", org_flag_count},
              {"loc_flag_count", loc_flag_count},
              {"event_flag_count", event_flag_count},
              {"collective_flag_count", collective_flag_count},
              {"q_quote_count", q_quote_count}};
}

ArticleIndexRecord ComputeArticleIndices(const std::string &article_id, int sentence_count,
                                         const std::vector<stance::Prediction> &predictions,
                                         const std::vector<answers::QaRecord> &qa,
                                         const std::vector<semantics::EntityRecord> *entities,
                                         double stance_gate) {
  if (sentence_count < 1) throw DataError("article " + article_id + " has no sentences");
  ArticleIndexRecord r;
  r.article_id = article_id;
  r.S_a = sentence_count;
  const std::vector<int> questions = answers::QuestionIds(predictions, stance_gate);
  r.Q_a = static_cast<int>(questions.size());
  if (r.Q_a > r.S_a) throw DataError("more questions than sentences in " + article_id);
  r.ID_a = static_cast<double>(r.Q_a) / r.S_a;

  std::map<int, const answers::QaRecord *> qa_by_id;
  for (const auto &q : qa) qa_by_id[q.sent_id] = &q;
  std::map<int, const semantics::EntityRecord *> entities_by_id;
  if (entities != nullptr) {
    for (const auto &e : *entities) entities_by_id[e.sent_id] = &e;
  }

  int &actor = r.actor_count;
  int &group = r.group_count;
  int &issue = r.issue_count;
  r.has_entities = entities != nullptr;
  static const std::vector<semantics::EntityMention> kNone;
  for (int id : questions) {
    auto it = qa_by_id.find(id);
    if (it == qa_by_id.end()) {
      throw DataError("no QA record for question " + article_id + "#" + std::to_string(id));
    }
    const answers::QaRecord &q = *it->second;
    if (!q.has_answer) {
      ++r.unanswered_count;
    } else if (q.answer_has_quotes) {
      ++r.external_count;
    } else {
      ++r.internal_count;
    }
    if (q.question_has_quotes) ++r.q_quote_count;

    auto e = entities_by_id.find(id);
    const auto &mentions = e == entities_by_id.end() ? kNone : e->second->question_entities;
    using semantics::EntityLabel;
    if (semantics::MentionsLabel(mentions, EntityLabel::kPerson)) ++r.pers_flag_count;
    if (semantics::MentionsLabel(mentions, EntityLabel::kOrganization)) ++r.org_flag_count;
    if (semantics::MentionsLabel(mentions, EntityLabel::kLocation)) ++r.loc_flag_count;
    if (semantics::MentionsLabel(mentions, EntityLabel::kEvent)) ++r.event_flag_count;
    if (semantics::MentionsLabel(mentions, EntityLabel::kCollectiveGroup) ||
        semantics::MentionsLabel(mentions, EntityLabel::kSocialGroup) ||
        semantics::MentionsLabel(mentions, EntityLabel::kPublic)) {
      ++r.collective_flag_count;
    }
    switch (semantics::ClassifyAddressivity(mentions)) {
      case semantics::Addressivity::kActorFocused:
        ++actor;
        break;
      case semantics::Addressivity::kGroupFocused:
        ++group;
        break;
      case semantics::Addressivity::kIssueFocused:
        ++issue;
        break;
    }
  }
  r.A_a = r.internal_count + r.external_count;
  if (r.Q_a > 0) {
    const double q = r.Q_a;
    r.Ans_a = r.A_a / q;
    r.share_unanswered = r.unanswered_count / q;
    r.share_internal = r.internal_count / q;
    r.share_external = r.external_count / q;
    if (entities != nullptr) {
      r.addr_actor = actor / q;
      r.addr_group = group / q;
      r.addr_issue = issue / q;
    }
  }
  return r;
}

void SetGroupingKeys(const corpus::ArticleRecord &article, ArticleIndexRecord &record) {
  record.source = article.source;
  if (article.outlet) {
    record.country_region = article.outlet->country_region;
    record.scale = std::string(corpus::ToString(article.outlet->scale));
  } else {
    record.country_region = std::string(kUnknownGroup);
    record.scale = std::string(kUnknownGroup);
  }
  record.meta_topic = article.meta_topic.value_or("unassigned");
}

std::vector<ArticleIndexRecord> ComputeAllIndices(
    const std::vector<corpus::ArticleRecord> &articles, const std::vector<int> &sentence_counts,
    const std::vector<stance::Prediction> &predictions,
    const std::vector<answers::QaRecord> &qa,
    const std::vector<semantics::EntityRecord> *entities, double stance_gate, int threads) {
  if (articles.size() != sentence_counts.size()) {
    throw DataError("sentence counts do not match the article list");
  }
  const auto predictions_by = ByArticle(predictions);
  const auto qa_by = ByArticle(qa);
  std::map<std::string, std::vector<semantics::EntityRecord>> entities_by;
  if (entities != nullptr) entities_by = ByArticle(*entities);

  std::set<std::string> known;
  for (const auto &a : articles) {
    if (!known.insert(a.article_id).second) {
      throw DataError("duplicate article_id " + a.article_id);
    }
  }
  for (const auto &[id, rows] : predictions_by) {
    if (known.count(id) == 0) throw DataError("predictions for unknown article " + id);
  }

  static const std::vector<stance::Prediction> kNoPredictions;
  static const std::vector<answers::QaRecord> kNoQa;
  static const std::vector<semantics::EntityRecord> kNoEntities;
  std::vector<ArticleIndexRecord> out(articles.size());
  ParallelFor(articles.size(), threads, [&](size_t i) {
    const auto &a = articles[i];
    auto p = predictions_by.find(a.article_id);
    auto q = qa_by.find(a.article_id);
    const std::vector<semantics::EntityRecord> *e = nullptr;
    if (entities != nullptr) {
      auto it = entities_by.find(a.article_id);
      e = it == entities_by.end() ? &kNoEntities : &it->second;
    }
    out[i] = ComputeArticleIndices(a.article_id, sentence_counts[i],
                                   p == predictions_by.end() ? kNoPredictions : p->second,
                                   q == qa_by.end() ? kNoQa : q->second, e, stance_gate);
    SetGroupingKeys(a, out[i]);
  });
  std::sort(out.begin(), out.end(), [](const auto &x, const auto &y) {
    return x.article_id < y.article_id;
  });
  return out;
}

CsvTable IndexTable(const std::vector<ArticleIndexRecord> &records) {
  CsvTable t;
  t.header = {"article_id",       "source",           "country_region",  "scale",
              "meta_topic",       "S_a",              "Q_a",             "A_a",
              "ID_a",             "Ans_a",            "share_unanswered", "share_internal",
              "share_external",   "addr_actor",       "addr_group",      "addr_issue",
              "pers_flag_count",  "org_flag_count",   "loc_flag_count",  "event_flag_count",
              "collective_flag_count", "q_quote_count"};
  for (const auto &r : records) {
    t.rows.push_back({r.article_id,
                      r.source,
                      r.country_region,
                      r.scale,
                      r.meta_topic,
                      std::to_string(r.S_a),
                      std::to_string(r.Q_a),
                      std::to_string(r.A_a),
                      FormatFixed(r.ID_a, 6),
                      Cell(r.Ans_a),
                      Cell(r.share_unanswered),
                      Cell(r.share_internal),
                      Cell(r.share_external),
                      Cell(r.addr_actor),
                      Cell(r.addr_group),
                      Cell(r.addr_issue),
                      std::to_string(r.pers_flag_count),
                      std::to_string(r.org_flag_count),
                      std::to_string(r.loc_flag_count),
                      std::to_string(r.event_flag_count),
                      std::to_string(r.collective_flag_count),
                      std::to_string(r.q_quote_count)});
  }
  return t;
}

}  // namespace qstance::metrics
