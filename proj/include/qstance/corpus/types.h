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

#ifndef QSTANCE_CORPUS_TYPES_H_
#define QSTANCE_CORPUS_TYPES_H_

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qstance/util/io.h"

namespace qstance::corpus {

enum class Scale { kHyperLocal, kRegional, kNational, kTransnational, kThematic };
enum class OutletType { kGeneral, kSports, kCelebrity, kWire, kBusiness };

std::string_view ToString(Scale scale);
std::string_view ToString(OutletType type);
// Case-insensitive; accepts the capitalized forms used in outlet tables.
std::optional<Scale> ParseScale(std::string_view text);
std::optional<OutletType> ParseOutletType(std::string_view text);

struct OutletMeta {
  std::string source;
  std::string country_region;
  Scale scale = Scale::kNational;
  OutletType type = OutletType::kGeneral;
};

struct ArticleRecord {
  std::string article_id;
  std::string source;
  std::string published_at;
  std::optional<std::string> title;
  std::string text;
  std::optional<int64_t> topic_id;
  std::string lang = "fr";
  // Keys not part of the record, carried through untouched.
  Json extra = Json::object();

  // Filled by the ontology join; empty for unlisted sources.
  std::optional<OutletMeta> outlet;
  // Filled by the meta-topic join.
  std::optional<std::string> meta_topic;
};

struct SentenceRecord {
  std::string article_id;
  int sent_id = 0;
  std::string text;
  // Code point offsets of the sentence in the article text.
  size_t start = 0;
  size_t end = 0;
};

// (article_id, sent_id) address of one sentence; orders as the output
// sort key of every stage.
struct SentenceKey {
  std::string article_id;
  int sent_id = 0;

  auto operator<=>(const SentenceKey &) const = default;
  bool operator==(const SentenceKey &) const = default;
};

struct ContextWindow {
  std::string article_id;
  int sent_id = 0;
  std::string context_text;
  int radius = 0;
};

// Record <-> JSON. ArticleFromJson validates the record invariants and
// throws DataError on violation.
Json ToJson(const ArticleRecord &article);
ArticleRecord ArticleFromJson(const Json &j);
Json ToJson(const SentenceRecord &sentence);
SentenceRecord SentenceFromJson(const Json &j);

// Groups sentences by article_id, sorted by (article_id, sent_id), and
// checks sent_id contiguity.
std::vector<std::vector<SentenceRecord>> GroupSentencesByArticle(
    std::vector<SentenceRecord> sentences);

}  // namespace qstance::corpus

#endif  // QSTANCE_CORPUS_TYPES_H_
