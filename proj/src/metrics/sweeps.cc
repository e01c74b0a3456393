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

#include "qstance/metrics/sweeps.h"

#include <cstdio>

#include "qstance/util/errors.h"

namespace qstance::metrics {

std::vector<ConfidenceSweepRow> SweepConfidence(
    const std::vector<stance::Prediction> &predictions,
    const std::map<std::string, int> &sentence_counts, const std::vector<double> &thresholds) {
  long total_sentences = 0;
  for (const auto &[id, n] : sentence_counts) {
    if (n < 1) throw DataError("article " + id + " has no sentences");
    total_sentences += n;
  }
  for (const auto &p : predictions) {
    if (sentence_counts.count(p.article_id) == 0) {
      throw DataError("prediction for article without sentence count: " + p.article_id);
    }
  }
  std::vector<ConfidenceSweepRow> rows;
  for (double t : thresholds) {
    std::map<std::string, int> questions;
    ConfidenceSweepRow row;
    row.threshold = t;
    for (const auto &p : predictions) {
      if (p.binary_label && p.binary_conf >= t && p.stance && p.stance_conf &&
          *p.stance_conf >= t) {
        ++questions[p.article_id];
        ++row.n_questions;
      }
    }
    if (total_sentences > 0) {
      row.pct_sentences = 100.0 * static_cast<double>(row.n_questions) /
                          static_cast<double>(total_sentences);
      double sum = 0.0;
      for (const auto &[id, s] : sentence_counts) {
        auto it = questions.find(id);
        sum += it == questions.end() ? 0.0 : static_cast<double>(it->second) / s;
      }
      row.mean_id = sum / static_cast<double>(sentence_counts.size());
    }
    rows.push_back(row);
  }
  return rows;
}

std::vector<SimilaritySweepRow> SweepSimilarity(const std::vector<answers::QaRecord> &records,
                                                const std::vector<double> &thresholds) {
  for (const auto &r : records) {
    if (r.has_answer && !r.answer_sim) {
      throw DataError("answered QA record without stored similarity: " + r.article_id + "#" +
                      std::to_string(r.sent_id));
    }
  }
  std::vector<SimilaritySweepRow> rows;
  for (double t : thresholds) {
    SimilaritySweepRow row;
    row.threshold = t;
    row.n_questions = static_cast<long>(records.size());
    long internal = 0;
    long quotes = 0;
    for (const auto &r : records) {
      if (!r.answer_sim || *r.answer_sim < t) continue;
      if (r.best_has_quotes) {
        ++quotes;
      } else {
        ++internal;
      }
    }
    if (!records.empty()) {
      const double n = static_cast<double>(records.size());
      row.internal = 100.0 * static_cast<double>(internal) / n;
      row.via_quotes = 100.0 * static_cast<double>(quotes) / n;
      row.answered = 100.0 * static_cast<double>(internal + quotes) / n;
      row.unanswered = 100.0 * static_cast<double>(row.n_questions - internal - quotes) / n;
    }
    rows.push_back(row);
  }
  return rows;
}

std::string FormatThreshold(double t) {
  char buf[32];
  for (int digits = 1; digits <= 17; ++digits) {
    std::snprintf(buf, sizeof(buf), "%.*g", digits, t);
    if (std::stod(buf) == t) break;
  }
  return buf;
}

CsvTable ConfidenceSweepTable(const std::vector<ConfidenceSweepRow> &rows) {
  CsvTable t;
  t.header = {"Confidence", "N questions", "% of sentences", "Mean ID_a"};
  for (const auto &r : rows) {
    t.rows.push_back({FormatThreshold(r.threshold), std::to_string(r.n_questions),
                      FormatFixed(r.pct_sentences, 2), FormatFixed(r.mean_id, 4)});
  }
  return t;
}

CsvTable SimilaritySweepTable(const std::vector<SimilaritySweepRow> &rows) {
  CsvTable t;
  t.header = {"Similarity", "answered", "unanswered", "internal", "via quotes"};
  for (const auto &r : rows) {
    t.rows.push_back({FormatThreshold(r.threshold), FormatFixed(r.answered, 1),
                      FormatFixed(r.unanswered, 1), FormatFixed(r.internal, 1),
                      FormatFixed(r.via_quotes, 1)});
  }
  return t;
}

}  // namespace qstance::metrics
