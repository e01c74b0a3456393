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

#include "qstance/corpus/types.h"

#include <algorithm>
#include <cctype>

#include "qstance/util/errors.h"
#include "qstance/util/utf8.h"

namespace qstance::corpus {

namespace {

std::string Lower(std::string_view text) {
  std::string out(text);
  for (char &c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

constexpr std::string_view kArticleKeys[] = {
    "article_id", "source", "published_at", "title", "text", "topic_id", "lang"};

bool IsArticleKey(std::string_view key) {
  return std::find(std::begin(kArticleKeys), std::end(kArticleKeys), key) !=
         std::end(kArticleKeys);
}

std::string RequireString(const Json &j, const char *key) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_string()) {
    throw DataError(std::string("missing or non-string field \"") + key + "\"");
  }
  return it->get<std::string>();
}

}  // namespace

std::string_view ToString(Scale scale) {
  switch (scale) {
    case Scale::kHyperLocal:
      return "hyper-local";
    case Scale::kRegional:
      return "regional";
    case Scale::kNational:
      return "national";
    case Scale::kTransnational:
      return "transnational";
    case Scale::kThematic:
      return "thematic";
  }
  return "";
}

std::string_view ToString(OutletType type) {
  switch (type) {
    case OutletType::kGeneral:
      return "general";
    case OutletType::kSports:
      return "sports";
    case OutletType::kCelebrity:
      return "celebrity";
    case OutletType::kWire:
      return "wire";
    case OutletType::kBusiness:
      return "business";
  }
  return "";
}

std::optional<Scale> ParseScale(std::string_view text) {
  const std::string key = Lower(text);
  for (Scale s : {Scale::kHyperLocal, Scale::kRegional, Scale::kNational,
                  Scale::kTransnational, Scale::kThematic}) {
    if (key == ToString(s)) return s;
  }
  return std::nullopt;
}

std::optional<OutletType> ParseOutletType(std::string_view text) {
  const std::string key = Lower(text);
  for (OutletType t : {OutletType::kGeneral, OutletType::kSports,
                       OutletType::kCelebrity, OutletType::kWire,
                       OutletType::kBusiness}) {
    if (key == ToString(t)) return t;
  }
  return std::nullopt;
}

Json ToJson(const ArticleRecord &article) {
  Json j = Json::object();
  j["article_id"] = article.article_id;
  j["source"] = article.source;
  j["published_at"] = article.published_at;
  j["title"] = article.title ? Json(*article.title) : Json(nullptr);
  j["text"] = article.text;
  j["topic_id"] = article.topic_id ? Json(*article.topic_id) : Json(nullptr);
  j["lang"] = article.lang;
  for (const auto &[key, value] : article.extra.items()) j[key] = value;
  return j;
}

ArticleRecord ArticleFromJson(const Json &j) {
  if (!j.is_object()) throw DataError("article line is not a JSON object");
  ArticleRecord a;
  a.article_id = RequireString(j, "article_id");
  if (a.article_id.empty()) throw DataError("empty \"article_id\"");
  a.source = RequireString(j, "source");
  a.text = RequireString(j, "text");
  if (utf8::Trim(a.text).empty()) {
    throw DataError("empty \"text\" for article " + a.article_id);
  }
  if (auto it = j.find("published_at"); it != j.end() && !it->is_null()) {
    if (!it->is_string()) throw DataError("non-string \"published_at\"");
    a.published_at = it->get<std::string>();
  }
  if (auto it = j.find("title"); it != j.end() && !it->is_null()) {
    if (!it->is_string()) throw DataError("non-string \"title\"");
    a.title = it->get<std::string>();
  }
  if (auto it = j.find("topic_id"); it != j.end() && !it->is_null()) {
    if (!it->is_number_integer()) throw DataError("non-integer \"topic_id\"");
    a.topic_id = it->get<int64_t>();
  }
  if (auto it = j.find("lang"); it != j.end() && !it->is_null()) {
    if (!it->is_string()) throw DataError("non-string \"lang\"");
    a.lang = it->get<std::string>();
  }
  for (const auto &[key, value] : j.items()) {
    if (!IsArticleKey(key)) a.extra[key] = value;
  }
  return a;
}

Json ToJson(const SentenceRecord &s) {
  return Json{{"article_id", s.article_id},
              {"sent_id", s.sent_id},
              {"text", s.text},
              {"start", s.start},
              {"end", s.end}};
}

SentenceRecord SentenceFromJson(const Json &j) {
  SentenceRecord s;
  try {
    s.article_id = j.at("article_id").get<std::string>();
    s.sent_id = j.at("sent_id").get<int>();
    s.text = j.at("text").get<std::string>();
    if (j.contains("start")) s.start = j.at("start").get<size_t>();
    if (j.contains("end")) s.end = j.at("end").get<size_t>();
  } catch (const Json::exception &e) {
    throw DataError(std::string("malformed sentence record: ") + e.what());
  }
  return s;
}

std::vector<std::vector<SentenceRecord>> GroupSentencesByArticle(
    std::vector<SentenceRecord> sentences) {
  std::stable_sort(sentences.begin(), sentences.end(),
                   [](const SentenceRecord &a, const SentenceRecord &b) {
                     if (a.article_id != b.article_id) return a.article_id < b.article_id;
                     return a.sent_id < b.sent_id;
                   });
  std::vector<std::vector<SentenceRecord>> groups;
  for (auto &s : sentences) {
    if (groups.empty() || groups.back().front().article_id != s.article_id) {
      groups.emplace_back();
    }
    auto &group = groups.back();
    if (s.sent_id != static_cast<int>(group.size())) {
      throw DataError("sent_id gap in article " + s.article_id + " at " +
                      std::to_string(s.sent_id));
    }
    group.push_back(std::move(s));
  }
  return groups;
}

}  // namespace qstance::corpus
