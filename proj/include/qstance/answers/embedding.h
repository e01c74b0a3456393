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

// Sentence embeddings for answer search: a typed client for the embedding
// endpoint, defensive normalization, and a JSON-lines vector file that can
// stand in for the provider.

#ifndef QSTANCE_ANSWERS_EMBEDDING_H_
#define QSTANCE_ANSWERS_EMBEDDING_H_

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "qstance/answers/search.h"
#include "qstance/corpus/types.h"
#include "qstance/providers/transport.h"

namespace qstance::answers {

// Scales `v` to unit length. Returns true when the norm was off by more
// than 1e-6 (the vector was actually changed). Throws ProviderError for a
// zero or non-finite vector, which must not be silently normalized.
bool Normalize(Vector &v);

struct EmbeddingBatch {
  std::vector<Vector> vectors;
  size_t renormalized = 0;
};

class EmbeddingClient {
 public:
  struct Options {
    int batch_size = 64;
    int max_in_flight = 1;
  };

  EmbeddingClient(std::shared_ptr<providers::JsonTransport> transport, Options options);

  // One unit vector per text. Every vector of the call must share one
  // dimension; a mismatch, a zero vector or a malformed payload is a
  // ProviderError.
  EmbeddingBatch Embed(const std::vector<std::string> &texts) const;

 private:
  std::shared_ptr<providers::JsonTransport> transport_;
  Options options_;
};

// ±1-sentence <tgt> contexts for every sentence of an article.
std::vector<std::string> EmbeddingInputs(const std::vector<corpus::SentenceRecord> &article);

// Pre-computed vectors keyed by (article_id, sent_id).
using VectorTable = std::map<corpus::SentenceKey, Vector>;

// JSON lines {"article_id","sent_id","vector":[...]}.
VectorTable ReadVectorFile(const std::string &path);
void WriteVectorFile(const std::string &path, const VectorTable &table);

// Vectors of one article from a table, normalized defensively. Throws
// DataError for a missing sentence or mixed dimensions.
std::vector<Vector> ArticleVectors(const VectorTable &table,
                                   const std::vector<corpus::SentenceRecord> &article,
                                   size_t *renormalized = nullptr);

}  // namespace qstance::answers

#endif  // QSTANCE_ANSWERS_EMBEDDING_H_
