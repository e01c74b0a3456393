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

#include "qstance/corpus/ingest.h"

#include <set>

#include "qstance/util/errors.h"
#include "qstance/util/logging.h"
#include "qstance/util/utf8.h"

namespace qstance::corpus {

Ontology Ontology::Parse(std::string_view csv_text) {
  const CsvTable table = ParseCsv(csv_text);
  const int c_source = table.Column("source");
  const int c_country = table.Column("country_region");
  const int c_scale = table.Column("scale");
  const int c_type = table.Column("type");
  if (c_source < 0 || c_country < 0 || c_scale < 0 || c_type < 0) {
    throw DataError("ontology header must be source,country_region,scale,type");
  }
  Ontology ontology;
  for (size_t r = 0; r < table.rows.size(); ++r) {
    const auto &row = table.rows[r];
    const std::string where = "ontology row " + std::to_string(r + 2);
    if (row.size() != table.header.size()) {
      throw DataError(where + ": expected " + std::to_string(table.header.size()) +
                      " fields");
    }
    OutletMeta meta;
    meta.source = utf8::Trim(row[c_source]);
    meta.country_region = utf8::Trim(row[c_country]);
    const auto scale = ParseScale(utf8::Trim(row[c_scale]));
    const auto type = ParseOutletType(utf8::Trim(row[c_type]));
    if (meta.source.empty()) throw DataError(where + ": empty source");
    if (!scale) throw DataError(where + ": unknown scale \"" + row[c_scale] + "\"");
    if (!type) throw DataError(where + ": unknown type \"" + row[c_type] + "\"");
    meta.scale = *scale;
    meta.type = *type;
    if (!ontology.outlets_.emplace(meta.source, meta).second) {
      throw DataError(where + ": duplicate source " + meta.source);
    }
  }
  return ontology;
}

Ontology Ontology::Load(const std::string &path) { return Parse(ReadFile(path)); }

const OutletMeta *Ontology::Find(std::string_view source) const {
  auto it = outlets_.find(source);
  return it == outlets_.end() ? nullptr : &it->second;
}

Json IngestReport::ToJson() const {
  return Json{{"lines", lines},
              {"accepted", accepted},
              {"rejected", rejected},
              {"unknown_source", unknown_source},
              {"warnings", warnings},
              {"errors", errors}};
}

IngestReport IngestArticles(const std::string &path, const Ontology &ontology,
                            const IngestOptions &options,
                            const std::function<void(ArticleRecord)> &sink) {
  IngestReport report;
  std::set<std::string, std::less<>> seen;
  std::set<std::string, std::less<>> warned_sources;
  ForEachLine(path, [&](std::string_view line, size_t number) {
    ++report.lines;
    ArticleRecord article;
    try {
      article = ArticleFromJson(Json::parse(line));
      if (!seen.insert(article.article_id).second) {
        throw DataError("duplicate article_id " + article.article_id);
      }
    } catch (const std::exception &e) {
      const std::string message =
          path + ":" + std::to_string(number) + ": " + e.what();
      if (!options.lenient) throw DataError(message);
      ++report.rejected;
      report.errors.push_back(message);
      LogWarning("skipping " + message);
      return;
    }
    if (const OutletMeta *meta = ontology.Find(article.source)) {
      article.outlet = *meta;
    } else {
      ++report.unknown_source;
      if (warned_sources.insert(article.source).second) {
        const std::string message = "source not in ontology: " + article.source;
        report.warnings.push_back(message);
        LogWarning(message);
      }
    }
    ++report.accepted;
    sink(std::move(article));
  });
  return report;
}

std::vector<ArticleRecord> IngestArticles(const std::string &path,
                                          const Ontology &ontology,
                                          const IngestOptions &options,
                                          IngestReport *report) {
  std::vector<ArticleRecord> articles;
  IngestReport r = IngestArticles(path, ontology, options, [&](ArticleRecord a) {
    articles.push_back(std::move(a));
  });
  if (report != nullptr) *report = std::move(r);
  return articles;
}

void JoinOntology(std::vector<ArticleRecord> &articles, const Ontology &ontology) {
  for (auto &a : articles) {
    const OutletMeta *meta = ontology.Find(a.source);
    a.outlet = meta ? std::optional<OutletMeta>(*meta) : std::nullopt;
  }
}

}  // namespace qstance::corpus
