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

#include "qstance/answers/search.h"

#include <algorithm>
#include <cmath>

#include "qstance/util/errors.h"
#include "qstance/util/logging.h"

namespace qstance::answers {

namespace {

// Below this norm a mean vector has no usable direction.
constexpr double kDegenerateNorm = 1e-12;

}  // namespace

void SearchConfig::Validate() const {
  if (horizon < 1) throw ConfigError("answer horizon must be at least 1");
  if (window_lengths.empty()) throw ConfigError("no answer window lengths configured");
  for (size_t i = 0; i < window_lengths.size(); ++i) {
    if (window_lengths[i] < 1) throw ConfigError("answer window lengths must be positive");
    if (i > 0 && window_lengths[i] <= window_lengths[i - 1]) {
      throw ConfigError("answer window lengths must be strictly ascending");
    }
  }
  if (!(similarity_threshold >= -1.0 && similarity_threshold <= 1.0)) {
    throw ConfigError("similarity threshold must be in [-1, 1]");
  }
  if (!(stance_gate >= 0.0 && stance_gate <= 1.0)) {
    throw ConfigError("stance gate must be in [0, 1]");
  }
}

std::vector<int> QuestionIds(const std::vector<stance::Prediction> &predictions,
                             double stance_gate) {
  std::vector<int> ids;
  for (const auto &p : predictions) {
    if (p.stance && p.stance_conf && *p.stance_conf >= stance_gate) ids.push_back(p.sent_id);
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

std::vector<QuestionGroup> GroupQuestions(const std::string &article_id,
                                          const std::vector<int> &question_ids,
                                          const std::vector<Vector> &vectors) {
  std::vector<QuestionGroup> groups;
  for (int id : question_ids) {
    if (id < 0 || static_cast<size_t>(id) >= vectors.size()) {
      throw DataError("question sent_id " + std::to_string(id) + " outside article " +
                      article_id);
    }
    if (groups.empty() || groups.back().last() + 1 != id) {
      QuestionGroup g;
      g.article_id = article_id;
      g.group_id = static_cast<int>(groups.size());
      groups.push_back(std::move(g));
    }
    groups.back().sent_ids.push_back(id);
  }
  for (auto &g : groups) {
    const size_t dim = vectors[static_cast<size_t>(g.sent_ids.front())].size();
    Vector mean(dim, 0.0);
    for (int id : g.sent_ids) {
      const Vector &v = vectors[static_cast<size_t>(id)];
      for (size_t k = 0; k < dim; ++k) mean[k] += v[k];
    }
    double norm = 0.0;
    for (double x : mean) norm += x * x;
    norm = std::sqrt(norm);
    if (norm < kDegenerateNorm * static_cast<double>(g.sent_ids.size())) {
      g.degenerate = true;
      LogWarning("question group " + std::to_string(g.group_id) + " of article " + article_id +
                 " has a zero mean vector; excluded from answer search");
    } else {
      for (double &x : mean) x /= norm;
    }
    g.group_vector = std::move(mean);
  }
  return groups;
}

PrefixSums::PrefixSums(const std::vector<Vector> &vectors)
    : n_(vectors.size()), dim_(vectors.empty() ? 0 : vectors.front().size()) {
  sums_.assign((n_ + 1) * dim_, 0.0);
  for (size_t i = 0; i < n_; ++i) {
    if (vectors[i].size() != dim_) throw DataError("sentence vectors differ in dimension");
    const double *prev = &sums_[i * dim_];
    double *row = &sums_[(i + 1) * dim_];
    for (size_t k = 0; k < dim_; ++k) row[k] = prev[k] + vectors[i][k];
  }
}

void PrefixSums::WindowSum(size_t start, size_t length, Vector &out) const {
  out.resize(dim_);
  const double *hi = &sums_[(start + length) * dim_];
  const double *lo = &sums_[start * dim_];
  for (size_t k = 0; k < dim_; ++k) out[k] = hi[k] - lo[k];
}

AnswerSpan FindAnswerSpan(const QuestionGroup &group, const PrefixSums &sums,
                          const SearchConfig &config) {
  AnswerSpan span;
  span.group_id = group.group_id;
  if (group.degenerate || sums.size() == 0) return span;
  if (group.group_vector.size() != sums.dim()) {
    throw DataError("group vector and sentence vectors differ in dimension");
  }
  const long first = static_cast<long>(group.last()) + 1;
  const long limit = std::min(static_cast<long>(group.last()) + config.horizon,
                              static_cast<long>(sums.size()) - 1);
  Vector window;
  double best = 0.0;
  for (long start = first; start <= limit; ++start) {
    for (int length : config.window_lengths) {
      const long end = start + length - 1;
      if (end > limit) break;  // lengths ascend
      sums.WindowSum(static_cast<size_t>(start), static_cast<size_t>(length), window);
      double dot = 0.0;
      double norm = 0.0;
      for (size_t k = 0; k < window.size(); ++k) {
        dot += group.group_vector[k] * window[k];
        norm += window[k] * window[k];
      }
      if (norm <= 0.0) continue;
      // cos(g, mean/|mean|) = g·sum / |sum|; the 1/length factor cancels.
      const double score = dot / std::sqrt(norm);
      if (!span.similarity || score > best) {
        best = score;
        span.similarity = score;
        span.best_start = static_cast<int>(start);
        span.best_length = length;
      }
    }
  }
  span.found = span.similarity.has_value() && best >= config.similarity_threshold;
  return span;
}

}  // namespace qstance::answers
