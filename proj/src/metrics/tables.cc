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

#include "qstance/metrics/tables.h"

#include <algorithm>
#include <map>

#include "qstance/semantics/topics.h"

namespace qstance::metrics {

std::string Percent(double numerator, double denominator) {
  if (denominator <= 0.0) return "";
  return FormatFixed(100.0 * numerator / denominator, 1);
}

CsvTable StanceGlobalTable(const std::vector<stance::Prediction> &predictions,
                           double stance_gate) {
  std::map<std::string, long> counts;
  for (stance::StanceLabel s : stance::kAllStances) counts[std::string(stance::ToString(s))] = 0;
  long total = 0;
  for (const auto &p : predictions) {
    if (p.stance && p.stance_conf && *p.stance_conf >= stance_gate) {
      ++counts[std::string(stance::ToString(*p.stance))];
      ++total;
    }
  }
  CsvTable t;
  t.header = {"Stance", "N", "% of interrogatives"};
  for (const auto &[label, n] : counts) {
    t.rows.push_back({label, std::to_string(n), Percent(n, total)});
  }
  return t;
}

CsvTable MetaTopicTable(const std::vector<ArticleIndexRecord> &records) {
  struct Acc {
    long articles = 0;
    double id_sum = 0.0;
    long questions = 0;
    long org = 0;
    long loc = 0;
    long event = 0;
  };
  std::map<std::string, Acc> by_topic;
  for (const auto &r : records) {
    Acc &a = by_topic[r.meta_topic];
    ++a.articles;
    a.id_sum += r.ID_a;
    a.questions += r.Q_a;
    a.org += r.org_flag_count;
    a.loc += r.loc_flag_count;
    a.event += r.event_flag_count;
  }
  std::vector<std::string> keys(semantics::kMetaTopics.begin(), semantics::kMetaTopics.end());
  if (by_topic.count(std::string(semantics::kUnassigned)) != 0) {
    keys.emplace_back(semantics::kUnassigned);
  }
  CsvTable t;
  t.header = {"Meta-topic", "Articles", "Mean interrogative index", "% questions with ORG",
              "% with LOC / EVENT"};
  for (const auto &k : keys) {
    const Acc a = by_topic.count(k) != 0 ? by_topic.at(k) : Acc{};
    const std::string mean = a.articles == 0 ? "" : FormatFixed(a.id_sum / a.articles, 4);
    const std::string loc_event =
        a.questions == 0 ? "" : Percent(a.loc, a.questions) + " / " + Percent(a.event, a.questions);
    t.rows.push_back({k, std::to_string(a.articles), mean, Percent(a.org, a.questions), loc_event});
  }
  return t;
}

CsvTable OutletTable(const std::vector<corpus::ArticleRecord> &articles) {
  std::map<std::string, std::pair<long, const corpus::ArticleRecord *>> by_source;
  for (const auto &a : articles) {
    auto &entry = by_source[a.source];
    ++entry.first;
    entry.second = &a;
  }
  CsvTable t;
  t.header = {"Source", "Articles", "Country/region", "Scale", "Type"};
  for (const auto &[source, entry] : by_source) {
    const auto &outlet = entry.second->outlet;
    t.rows.push_back({source, std::to_string(entry.first),
                      outlet ? outlet->country_region : std::string(kUnknownGroup),
                      outlet ? std::string(corpus::ToString(outlet->scale))
                             : std::string(kUnknownGroup),
                      outlet ? std::string(corpus::ToString(outlet->type))
                             : std::string(kUnknownGroup)});
  }
  return t;
}

CsvTable AnswerabilityByStanceTable(const std::vector<answers::QaRecord> &records) {
  std::map<stance::StanceLabel, std::pair<long, long>> counts;  // (questions, answered)
  long questions = 0;
  long answered = 0;
  for (const auto &r : records) {
    auto &c = counts[r.stance];
    ++c.first;
    ++questions;
    if (r.has_answer) {
      ++c.second;
      ++answered;
    }
  }
  CsvTable t;
  t.header = {"Stance", "N questions", "% answered"};
  for (stance::StanceLabel s : stance::kAllStances) {
    const auto c = counts[s];
    t.rows.push_back({std::string(stance::ToString(s)), std::to_string(c.first),
                      Percent(c.second, c.first)});
  }
  t.rows.push_back({"All stances", std::to_string(questions), Percent(answered, questions)});
  return t;
}

CsvTable DialogicityTable(const std::vector<answers::QaRecord> &records) {
  long unanswered = 0;
  long internal = 0;
  long quotes = 0;
  for (const auto &r : records) {
    if (!r.has_answer) {
      ++unanswered;
    } else if (r.answer_has_quotes) {
      ++quotes;
    } else {
      ++internal;
    }
  }
  const double n = static_cast<double>(records.size());
  CsvTable t;
  t.header = {"Category", "N", "% of interrogatives"};
  t.rows.push_back({"Unanswered", std::to_string(unanswered), Percent(unanswered, n)});
  t.rows.push_back({"Answered (internal)", std::to_string(internal), Percent(internal, n)});
  t.rows.push_back({"Answered (via quotes)", std::to_string(quotes), Percent(quotes, n)});
  return t;
}

}  // namespace qstance::metrics
