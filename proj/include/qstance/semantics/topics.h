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

// Topic id -> meta-topic table, maintained by analysts as a two-column CSV
// (topic_id,meta_topic), and its join onto articles.

#ifndef QSTANCE_SEMANTICS_TOPICS_H_
#define QSTANCE_SEMANTICS_TOPICS_H_

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qstance/corpus/types.h"

namespace qstance::semantics {

inline constexpr std::array<std::string_view, 8> kMetaTopics = {
    "professional sports",     "national/local politics", "geopolitics",      "local news",
    "lifestyle/entertainment", "faits divers",            "business/economy", "technology"};

inline constexpr std::string_view kUnassigned = "unassigned";

class MetaTopicMap {
 public:
  MetaTopicMap() = default;

  // Throws DataError for a missing column, a non-integer or duplicate
  // topic_id, or a meta-topic outside the eight labels (matched
  // case-insensitively and stored in canonical form).
  static MetaTopicMap Parse(std::string_view csv_text);
  static MetaTopicMap Load(const std::string &path);

  void Add(int64_t topic_id, std::string_view meta_topic);

  // The mapped meta-topic, or "unassigned" for an unmapped or absent id.
  std::string Lookup(std::optional<int64_t> topic_id) const;

  size_t size() const { return map_.size(); }

 private:
  std::map<int64_t, std::string> map_;
};

// Returns copies of `articles` with meta_topic set from `map`.
std::vector<corpus::ArticleRecord> JoinMetaTopics(std::vector<corpus::ArticleRecord> articles,
                                                  const MetaTopicMap &map);

}  // namespace qstance::semantics

#endif  // QSTANCE_SEMANTICS_TOPICS_H_
