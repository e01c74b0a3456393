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

#include "qstance/answers/embedding.h"

#include <algorithm>
#include <cmath>

#include "qstance/corpus/context.h"
#include "qstance/util/errors.h"
#include "qstance/util/parallel.h"

namespace qstance::answers {

bool Normalize(Vector &v) {
  double norm = 0.0;
  for (double x : v) norm += x * x;
  norm = std::sqrt(norm);
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw ProviderError("embedding provider returned a zero or non-finite vector");
  }
  if (std::fabs(norm - 1.0) <= 1e-6) return false;
  for (double &x : v) x /= norm;
  return true;
}

EmbeddingClient::EmbeddingClient(std::shared_ptr<providers::JsonTransport> transport,
                                 Options options)
    : transport_(std::move(transport)), options_(options) {
  if (!transport_) throw ConfigError("embedding client needs a transport");
  if (options_.batch_size < 1) throw ConfigError("embedding batch size must be positive");
}

EmbeddingBatch EmbeddingClient::Embed(const std::vector<std::string> &texts) const {
  EmbeddingBatch out;
  out.vectors.resize(texts.size());
  std::vector<char> renormalized(texts.size(), 0);
  const size_t batch = static_cast<size_t>(options_.batch_size);
  const size_t n_batches = (texts.size() + batch - 1) / batch;
  ParallelFor(n_batches, options_.max_in_flight, [&](size_t b) {
    const size_t begin = b * batch;
    const size_t end = std::min(texts.size(), begin + batch);
    Json request{{"texts", Json::array()}};
    for (size_t i = begin; i < end; ++i) request["texts"].push_back(texts[i]);
    const Json response = transport_->Post(providers::kEmbedEndpoint, request);
    if (!response.is_object() || !response.contains("vectors") ||
        !response["vectors"].is_array() || response["vectors"].size() != end - begin) {
      throw ProviderError("embedding response without one vector per text");
    }
    const long declared = response.contains("dim") && response["dim"].is_number_integer()
                              ? response["dim"].get<long>()
                              : -1;
    for (size_t i = begin; i < end; ++i) {
      const Json &raw = response["vectors"][i - begin];
      Vector v;
      try {
        v = raw.get<Vector>();
      } catch (const Json::exception &) {
        throw ProviderError("embedding vector is not a list of numbers");
      }
      if (v.empty() || (declared >= 0 && static_cast<long>(v.size()) != declared)) {
        throw ProviderError("embedding dimension mismatch within a batch (declared " +
                            std::to_string(declared) + ", got " + std::to_string(v.size()) + ")");
      }
      renormalized[i] = Normalize(v) ? 1 : 0;
      out.vectors[i] = std::move(v);
    }
  });
  for (const auto &v : out.vectors) {
    if (v.size() != out.vectors.front().size()) {
      throw ProviderError("embedding dimension mismatch across batches (" +
                          std::to_string(out.vectors.front().size()) + " vs " +
                          std::to_string(v.size()) + ")");
    }
  }
  out.renormalized = static_cast<size_t>(std::count(renormalized.begin(), renormalized.end(), 1));
  return out;
}

std::vector<std::string> EmbeddingInputs(const std::vector<corpus::SentenceRecord> &article) {
  std::vector<std::string> inputs;
  inputs.reserve(article.size());
  for (const auto &s : article) {
    inputs.push_back(
        corpus::BuildContext(article, s.sent_id, corpus::kEmbeddingRadius).context_text);
  }
  return inputs;
}

VectorTable ReadVectorFile(const std::string &path) {
  VectorTable table;
  for (const Json &row : ReadJsonLines(path)) {
    try {
      corpus::SentenceKey key{row.at("article_id").get<std::string>(),
                              row.at("sent_id").get<int>()};
      table[key] = row.at("vector").get<Vector>();
    } catch (const Json::exception &e) {
      throw DataError("malformed vector row in " + path + ": " + e.what());
    }
  }
  return table;
}

void WriteVectorFile(const std::string &path, const VectorTable &table) {
  std::vector<Json> rows;
  rows.reserve(table.size());
  for (const auto &[key, v] : table) {
    rows.push_back(Json{{"article_id", key.article_id}, {"sent_id", key.sent_id}, {"vector", v}});
  }
  WriteJsonLines(path, rows);
}

std::vector<Vector> ArticleVectors(const VectorTable &table,
                                   const std::vector<corpus::SentenceRecord> &article,
                                   size_t *renormalized) {
  std::vector<Vector> vectors;
  vectors.reserve(article.size());
  for (const auto &s : article) {
    auto it = table.find({s.article_id, s.sent_id});
    if (it == table.end()) {
      throw DataError("no vector for " + s.article_id + "#" + std::to_string(s.sent_id));
    }
    Vector v = it->second;
    if (!vectors.empty() && v.size() != vectors.front().size()) {
      throw DataError("mixed vector dimensions in article " + s.article_id);
    }
    try {
      if (Normalize(v) && renormalized != nullptr) ++*renormalized;
    } catch (const ProviderError &) {
      throw DataError("zero vector for " + s.article_id + "#" + std::to_string(s.sent_id));
    }
    vectors.push_back(std::move(v));
  }
  return vectors;
}

}  // namespace qstance::answers
