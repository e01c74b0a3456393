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

// Descriptive aggregation of article indices by outlet, country/region,
// editorial scale or meta-topic.
//
// Each metric is a ratio numerator/denominator per article (ID_a = Q/S,
// Ans_a = A/Q, ...). Article-weighted aggregation (the default) treats
// every article with a non-zero denominator as one observation. Pooled
// aggregation weights each article by its denominator, so the mean equals
// the pooled ratio sum(numerator) / sum(denominator), e.g. the share of all
// questions in a group that mention a person.
//
// Quantiles use the nearest-rank definition; SD is the population SD.

#ifndef QSTANCE_METRICS_AGGREGATE_H_
#define QSTANCE_METRICS_AGGREGATE_H_

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qstance/metrics/indices.h"

namespace qstance::metrics {

struct Summary {
  size_t n = 0;           // observations
  double weight = 0.0;    // total weight
  double mean = 0.0;
  double median = 0.0;
  double sd = 0.0;
  double p90 = 0.0;
};

// Weighted nearest-rank quantile: the smallest value whose cumulative
// weight reaches p * total weight. `values` need not be sorted.
double NearestRank(std::vector<std::pair<double, double>> value_weight, double p);

// Summary of (value, weight) observations; weights must be positive.
// Throws DataError on an empty input.
Summary Summarize(const std::vector<std::pair<double, double>> &value_weight);

enum class Dimension { kAll, kOutlet, kCountry, kScale, kMetaTopic };
// "all", "outlet", "country", "scale", "meta_topic"; ConfigError otherwise.
Dimension ParseDimension(std::string_view name);
std::string_view ToString(Dimension d);
// Column header used in aggregate tables.
std::string_view DimensionHeader(Dimension d);
const std::string &GroupKey(const ArticleIndexRecord &r, Dimension d);

enum class Metric {
  kInterrogativeIndex,  // Q / S
  kAnswerability,       // A / Q
  kUnanswered,
  kInternal,
  kExternal,
  kActor,
  kGroup,
  kIssue,
  kPersonalization,  // questions mentioning a person / Q
  kOrganization,
  kLocation,
  kEvent,
  kCollective,
  kQuotedQuestions,
};
// "id", "ans", "unanswered", "internal", "external", "actor", "group",
// "issue", "personalization", "organization", "location", "event",
// "collective", "quoted_questions"; ConfigError otherwise.
Metric ParseMetric(std::string_view name);
std::string_view ToString(Metric m);
std::vector<Metric> AllMetrics();

// (numerator, denominator) of a metric for one article, or nullopt when
// undefined (zero denominator, or addressivity without entities).
std::optional<std::pair<double, double>> MetricRatio(const ArticleIndexRecord &r, Metric m);

enum class Weighting { kArticle, kPooled };

struct AggregateRow {
  std::string key;
  size_t n_articles = 0;   // articles contributing to this metric
  long n_questions = 0;    // sum of Q_a over contributing articles
  Summary summary;
  // sum(numerator) / sum(denominator) over contributing articles.
  double pooled = 0.0;
};

// One row per non-empty group, sorted by key.
std::vector<AggregateRow> Aggregate(const std::vector<ArticleIndexRecord> &records,
                                    Dimension dimension, Metric metric,
                                    Weighting weighting = Weighting::kArticle);

// Header: <dimension>,N articles,N questions,Mean,Median,SD,P90,Pooled
CsvTable AggregateTable(const std::vector<AggregateRow> &rows, Dimension dimension);

}  // namespace qstance::metrics

#endif  // QSTANCE_METRICS_AGGREGATE_H_
