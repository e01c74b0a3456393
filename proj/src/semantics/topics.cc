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

#include "qstance/semantics/topics.h"

#include <algorithm>
#include <charconv>
#include <cctype>

#include "qstance/util/errors.h"
#include "qstance/util/io.h"
#include "qstance/util/utf8.h"

namespace qstance::semantics {

namespace {

std::string Canonical(std::string_view text) {
  std::string key = utf8::Trim(text);
  std::transform(key.begin(), key.end(), key.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  for (std::string_view label : kMetaTopics) {
    if (key == label) return std::string(label);
  }
  return {};
}

}  // namespace

void MetaTopicMap::Add(int64_t topic_id, std::string_view meta_topic) {
  const std::string label = Canonical(meta_topic);
  if (label.empty()) {
    throw DataError("unknown meta-topic \"" + std::string(meta_topic) + "\" for topic " +
                    std::to_string(topic_id));
  }
  if (!map_.emplace(topic_id, label).second) {
    throw DataError("duplicate topic_id " + std::to_string(topic_id) + " in meta-topic map");
  }
}

MetaTopicMap MetaTopicMap::Parse(std::string_view csv_text) {
  const CsvTable table = ParseCsv(csv_text);
  const int id_col = table.Column("topic_id");
  const int topic_col = table.Column("meta_topic");
  if (id_col < 0 || topic_col < 0) {
    throw DataError("meta-topic map needs columns topic_id,meta_topic");
  }
  MetaTopicMap map;
  for (size_t r = 0; r < table.rows.size(); ++r) {
    const auto &row = table.rows[r];
    if (row.size() <= static_cast<size_t>(std::max(id_col, topic_col))) {
      throw DataError("short row " + std::to_string(r + 2) + " in meta-topic map");
    }
    const std::string id_text = utf8::Trim(row[static_cast<size_t>(id_col)]);
    int64_t id = 0;
    const auto [ptr, ec] = std::from_chars(id_text.data(), id_text.data() + id_text.size(), id);
    if (ec != std::errc() || ptr != id_text.data() + id_text.size()) {
      throw DataError("non-integer topic_id \"" + id_text + "\" in meta-topic map");
    }
    map.Add(id, row[static_cast<size_t>(topic_col)]);
  }
  return map;
}

MetaTopicMap MetaTopicMap::Load(const std::string &path) {
  if (!FileExists(path)) throw ConfigError("meta-topic map not found: " + path);
  return Parse(ReadFile(path));
}

std::string MetaTopicMap::Lookup(std::optional<int64_t> topic_id) const {
  if (!topic_id) return std::string(kUnassigned);
  auto it = map_.find(*topic_id);
  return it == map_.end() ? std::string(kUnassigned) : it->second;
}

std::vector<corpus::ArticleRecord> JoinMetaTopics(std::vector<corpus::ArticleRecord> articles,
                                                  const MetaTopicMap &map) {
  for (auto &a : articles) a.meta_topic = map.Lookup(a.topic_id);
  return articles;
}

}  // namespace qstance::semantics
