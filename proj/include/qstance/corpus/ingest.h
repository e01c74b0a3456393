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

#ifndef QSTANCE_CORPUS_INGEST_H_
#define QSTANCE_CORPUS_INGEST_H_

#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "qstance/corpus/types.h"

namespace qstance::corpus {

// Outlet ontology keyed by source domain. Loaded from a CSV with header
// `source,country_region,scale,type`.
class Ontology {
 public:
  Ontology() = default;

  static Ontology Parse(std::string_view csv_text);
  static Ontology Load(const std::string &path);

  // nullptr for unlisted sources.
  const OutletMeta *Find(std::string_view source) const;
  size_t size() const { return outlets_.size(); }

 private:
  std::map<std::string, OutletMeta, std::less<>> outlets_;
};

struct IngestOptions {
  // Skip malformed lines instead of failing the whole file.
  bool lenient = false;
};

struct IngestReport {
  size_t lines = 0;
  size_t accepted = 0;
  size_t rejected = 0;
  size_t unknown_source = 0;
  std::vector<std::string> warnings;
  std::vector<std::string> errors;

  Json ToJson() const;
};

// Streams articles from a JSON-lines file in file order, joining each with
// the ontology (left-outer: unlisted sources are kept with a warning).
// Malformed lines throw DataError with the line number unless lenient.
IngestReport IngestArticles(const std::string &path, const Ontology &ontology,
                            const IngestOptions &options,
                            const std::function<void(ArticleRecord)> &sink);

// Convenience wrapper that collects the stream.
std::vector<ArticleRecord> IngestArticles(const std::string &path,
                                          const Ontology &ontology,
                                          const IngestOptions &options = {},
                                          IngestReport *report = nullptr);

// Joins articles with the ontology without re-reading the file.
void JoinOntology(std::vector<ArticleRecord> &articles, const Ontology &ontology);

}  // namespace qstance::corpus

#endif  // QSTANCE_CORPUS_INGEST_H_
