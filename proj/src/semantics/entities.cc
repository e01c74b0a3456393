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

#include "qstance/semantics/entities.h"

#include <algorithm>
#include <map>

#include "qstance/util/errors.h"
#include "qstance/util/logging.h"
#include "qstance/util/parallel.h"
#include "qstance/util/utf8.h"

namespace qstance::semantics {

std::string_view ToString(EntityLabel label) {
  switch (label) {
    case EntityLabel::kPerson:
      return "person";
    case EntityLabel::kOrganization:
      return "organization";
    case EntityLabel::kLocation:
      return "location";
    case EntityLabel::kCollectiveGroup:
      return "nationality or religious or political group";
    case EntityLabel::kSocialGroup:
      return "generic social group";
    case EntityLabel::kPublic:
      return "public or audience";
    case EntityLabel::kEvent:
      return "event";
  }
  return "";
}

std::optional<EntityLabel> ParseEntityLabel(std::string_view text) {
  for (EntityLabel label : kAllEntityLabels) {
    if (text == ToString(label)) return label;
  }
  return std::nullopt;
}

std::vector<std::string> EntityLabelStrings() {
  std::vector<std::string> out;
  for (EntityLabel label : kAllEntityLabels) out.emplace_back(ToString(label));
  return out;
}

Json EntityMention::ToJson() const {
  return Json{{"text", text},
              {"label", std::string(semantics::ToString(label))},
              {"score", score},
              {"start", start},
              {"end", end}};
}

EntityMention EntityMention::FromJson(const Json &j) {
  EntityMention m;
  try {
    m.text = j.at("text").get<std::string>();
    const std::string label = j.at("label").get<std::string>();
    const auto parsed = ParseEntityLabel(label);
    if (!parsed) throw DataError("unknown entity label \"" + label + "\"");
    m.label = *parsed;
    m.score = j.at("score").get<double>();
    m.start = j.at("start").get<int>();
    m.end = j.at("end").get<int>();
  } catch (const Json::exception &e) {
    throw DataError(std::string("malformed entity mention: ") + e.what());
  }
  if (!(m.score >= 0.0 && m.score <= 1.0) || m.start < 0 || m.end <= m.start) {
    throw DataError("entity mention with invalid score or offsets: " + j.dump());
  }
  return m;
}

std::string_view ToString(Addressivity a) {
  switch (a) {
    case Addressivity::kActorFocused:
      return "actor-focused";
    case Addressivity::kGroupFocused:
      return "group-focused";
    case Addressivity::kIssueFocused:
      return "issue-focused";
  }
  return "";
}

bool MentionsLabel(const std::vector<EntityMention> &mentions, EntityLabel label) {
  return std::any_of(mentions.begin(), mentions.end(),
                     [label](const EntityMention &m) { return m.label == label; });
}

Addressivity ClassifyAddressivity(const std::vector<EntityMention> &mentions) {
  bool actor = false;
  bool group = false;
  for (const auto &m : mentions) {
    switch (m.label) {
      case EntityLabel::kPerson:
      case EntityLabel::kOrganization:
      case EntityLabel::kLocation:
        actor = true;
        break;
      case EntityLabel::kCollectiveGroup:
      case EntityLabel::kSocialGroup:
      case EntityLabel::kPublic:
        group = true;
        break;
      case EntityLabel::kEvent:
        break;
    }
  }
  if (actor) return Addressivity::kActorFocused;
  if (group) return Addressivity::kGroupFocused;
  return Addressivity::kIssueFocused;
}

NerClient::NerClient(std::shared_ptr<providers::JsonTransport> transport, Options options)
    : transport_(std::move(transport)), options_(options) {
  if (!transport_) throw ConfigError("NER client needs a transport");
  if (options_.batch_size < 1) throw ConfigError("NER batch size must be positive");
  if (!(options_.threshold >= 0.0 && options_.threshold <= 1.0)) {
    throw ConfigError("NER score threshold must lie in [0,1]");
  }
}

namespace {

// Validates one raw mention against its text; returns nullopt (after a
// warning) when it cannot be kept.
std::optional<EntityMention> ReadMention(const Json &raw, size_t text_length) {
  if (!raw.is_object()) {
    LogWarning("NER mention is not an object; dropped");
    return std::nullopt;
  }
  const auto label = raw.contains("label") && raw["label"].is_string()
                         ? ParseEntityLabel(raw["label"].get<std::string>())
                         : std::nullopt;
  if (!label) {
    LogWarning("NER mention with unknown label dropped: " + raw.dump());
    return std::nullopt;
  }
  if (!raw.contains("score") || !raw["score"].is_number() || !raw.contains("start") ||
      !raw["start"].is_number_integer() || !raw.contains("end") ||
      !raw["end"].is_number_integer()) {
    LogWarning("NER mention without numeric score/offsets dropped: " + raw.dump());
    return std::nullopt;
  }
  EntityMention m;
  m.label = *label;
  m.score = raw["score"].get<double>();
  const long start = raw["start"].get<long>();
  const long end = raw["end"].get<long>();
  if (start < 0 || end <= start || static_cast<size_t>(end) > text_length) {
    LogWarning("NER mention with out-of-bounds offsets dropped: " + raw.dump());
    return std::nullopt;
  }
  m.start = static_cast<int>(start);
  m.end = static_cast<int>(end);
  if (raw.contains("text") && raw["text"].is_string()) m.text = raw["text"].get<std::string>();
  return m;
}

}  // namespace

std::vector<std::vector<EntityMention>> NerClient::Annotate(
    const std::vector<std::string> &texts) const {
  std::vector<std::vector<EntityMention>> out(texts.size());
  const std::vector<std::string> labels = EntityLabelStrings();
  const size_t batch = static_cast<size_t>(options_.batch_size);
  const size_t n_batches = (texts.size() + batch - 1) / batch;
  ParallelFor(n_batches, options_.max_in_flight, [&](size_t b) {
    const size_t begin = b * batch;
    const size_t end = std::min(texts.size(), begin + batch);
    Json items = Json::array();
    for (size_t i = begin; i < end; ++i) {
      items.push_back(Json{{"text", texts[i]}, {"labels", labels}});
    }
    const Json response = transport_->Post(providers::kNerEndpoint, Json{{"items", items}});
    if (!response.is_object() || !response.contains("results") ||
        !response["results"].is_array() || response["results"].size() != end - begin) {
      throw ProviderError("NER response without one result list per item");
    }
    for (size_t i = begin; i < end; ++i) {
      const Json &list = response["results"][i - begin];
      if (!list.is_array()) throw ProviderError("NER result is not a list of mentions");
      const std::u32string decoded = utf8::Decode(texts[i]);
      for (const Json &raw : list) {
        auto m = ReadMention(raw, decoded.size());
        if (!m || m->score < options_.threshold) continue;
        // The offsets are authoritative; the surface is re-derived from them.
        m->text = utf8::Encode(decoded.substr(static_cast<size_t>(m->start),
                                              static_cast<size_t>(m->end - m->start)));
        out[i].push_back(std::move(*m));
      }
      std::stable_sort(out[i].begin(), out[i].end(),
                       [](const EntityMention &a, const EntityMention &b) {
                         return a.start != b.start ? a.start < b.start : a.end < b.end;
                       });
    }
  });
  return out;
}

std::string QuestionContext(const std::vector<corpus::SentenceRecord> &article, int sent_id) {
  if (sent_id < 0 || static_cast<size_t>(sent_id) >= article.size()) {
    throw DataError("question context for unknown sentence " + std::to_string(sent_id));
  }
  const size_t i = static_cast<size_t>(sent_id);
  std::string out;
  if (i > 0) out = article[i - 1].text + " ";
  out += article[i].text;
  if (i + 1 < article.size()) out += " " + article[i + 1].text;
  return out;
}

Json EntityRecord::ToJson() const {
  Json q = Json::array();
  for (const auto &m : question_entities) q.push_back(m.ToJson());
  Json a = Json::array();
  for (const auto &m : answer_entities) a.push_back(m.ToJson());
  return Json{{"article_id", article_id},
              {"sent_id", sent_id},
              {"question_entities", q},
              {"answer_entities", a}};
}

EntityRecord EntityRecord::FromJson(const Json &j) {
  EntityRecord r;
  try {
    r.article_id = j.at("article_id").get<std::string>();
    r.sent_id = j.at("sent_id").get<int>();
    for (const Json &m : j.at("question_entities")) {
      r.question_entities.push_back(EntityMention::FromJson(m));
    }
    for (const Json &m : j.at("answer_entities")) {
      r.answer_entities.push_back(EntityMention::FromJson(m));
    }
  } catch (const Json::exception &e) {
    throw DataError(std::string("malformed entity record: ") + e.what());
  }
  return r;
}

std::vector<EntityRecord> AnnotateQuestionsAndAnswers(
    const std::vector<std::vector<corpus::SentenceRecord>> &articles,
    const std::vector<answers::QaRecord> &records, const NerClient &client) {
  std::map<std::string, const std::vector<corpus::SentenceRecord> *> by_id;
  for (const auto &a : articles) {
    if (!a.empty()) by_id[a.front().article_id] = &a;
  }
  std::vector<answers::QaRecord> sorted = records;
  std::sort(sorted.begin(), sorted.end(),
            [](const answers::QaRecord &a, const answers::QaRecord &b) {
              return a.key() < b.key();
            });

  std::vector<std::string> question_inputs;
  std::vector<std::string> answer_inputs;
  std::map<std::string, size_t> answer_index;
  std::vector<std::optional<size_t>> answer_of(sorted.size());
  for (size_t i = 0; i < sorted.size(); ++i) {
    const auto &r = sorted[i];
    auto it = by_id.find(r.article_id);
    if (it == by_id.end()) throw DataError("QA record for unknown article " + r.article_id);
    question_inputs.push_back(QuestionContext(*it->second, r.sent_id));
    if (r.has_answer) {
      auto [pos, inserted] = answer_index.emplace(*r.answer_text, answer_inputs.size());
      if (inserted) answer_inputs.push_back(*r.answer_text);
      answer_of[i] = pos->second;
    }
  }
  const auto question_mentions = client.Annotate(question_inputs);
  const auto answer_mentions = client.Annotate(answer_inputs);

  std::vector<EntityRecord> out(sorted.size());
  for (size_t i = 0; i < sorted.size(); ++i) {
    out[i].article_id = sorted[i].article_id;
    out[i].sent_id = sorted[i].sent_id;
    out[i].question_entities = question_mentions[i];
    if (answer_of[i]) out[i].answer_entities = answer_mentions[*answer_of[i]];
  }
  return out;
}

}  // namespace qstance::semantics
