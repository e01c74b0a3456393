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

#include "qstance/metrics/aggregate.h"

#include <algorithm>
#include <cmath>
#include <map>

#include "qstance/util/errors.h"

namespace qstance::metrics {

double NearestRank(std::vector<std::pair<double, double>> value_weight, double p) {
  if (value_weight.empty()) throw DataError("quantile of an empty sample");
  std::sort(value_weight.begin(), value_weight.end());
  double total = 0.0;
  for (const auto &[v, w] : value_weight) total += w;
  const double target = p * total;
  double cumulative = 0.0;
  for (const auto &[v, w] : value_weight) {
    cumulative += w;
    // Relative slack keeps exact ranks (e.g. p*n integral) stable under
    // floating-point summation.
    if (cumulative >= target - 1e-12 * total) return v;
  }
  return value_weight.back().first;
}

Summary Summarize(const std::vector<std::pair<double, double>> &value_weight) {
  if (value_weight.empty()) throw DataError("summary of an empty sample");
  Summary s;
  s.n = value_weight.size();
  double sum = 0.0;
  for (const auto &[v, w] : value_weight) {
    if (!(w > 0.0)) throw DataError("non-positive aggregation weight");
    s.weight += w;
    sum += w * v;
  }
  s.mean = sum / s.weight;
  double ss = 0.0;
  for (const auto &[v, w] : value_weight) ss += w * (v - s.mean) * (v - s.mean);
  s.sd = std::sqrt(ss / s.weight);
  s.median = NearestRank(value_weight, 0.5);
  s.p90 = NearestRank(value_weight, 0.9);
  return s;
}

namespace {

constexpr std::pair<Dimension, std::string_view> kDimensions[] = {
    {Dimension::kAll, "all"},
    {Dimension::kOutlet, "outlet"},
    {Dimension::kCountry, "country"},
    {Dimension::kScale, "scale"},
    {Dimension::kMetaTopic, "meta_topic"}};

constexpr std::pair<Metric, std::string_view> kMetrics[] = {
    {Metric::kInterrogativeIndex, "id"},
    {Metric::kAnswerability, "ans"},
    {Metric::kUnanswered, "unanswered"},
    {Metric::kInternal, "internal"},
    {Metric::kExternal, "external"},
    {Metric::kActor, "actor"},
    {Metric::kGroup, "group"},
    {Metric::kIssue, "issue"},
    {Metric::kPersonalization, "personalization"},
    {Metric::kOrganization, "organization"},
    {Metric::kLocation, "location"},
    {Metric::kEvent, "event"},
    {Metric::kCollective, "collective"},
    {Metric::kQuotedQuestions, "quoted_questions"}};

}  // namespace

Dimension ParseDimension(std::string_view name) {
  for (const auto &[d, n] : kDimensions) {
    if (n == name) return d;
  }
  throw ConfigError("unknown aggregation dimension \"" + std::string(name) + "\"");
}

std::string_view ToString(Dimension d) {
  for (const auto &[x, n] : kDimensions) {
    if (x == d) return n;
  }
  return "";
}

std::string_view DimensionHeader(Dimension d) {
  switch (d) {
    case Dimension::kAll:
      return "Group";
    case Dimension::kOutlet:
      return "Source";
    case Dimension::kCountry:
      return "Country/region";
    case Dimension::kScale:
      return "Scale";
    case Dimension::kMetaTopic:
      return "Meta-topic";
  }
  return "";
}

const std::string &GroupKey(const ArticleIndexRecord &r, Dimension d) {
  static const std::string kAll = "all";
  switch (d) {
    case Dimension::kAll:
      return kAll;
    case Dimension::kOutlet:
      return r.source;
    case Dimension::kCountry:
      return r.country_region;
    case Dimension::kScale:
      return r.scale;
    case Dimension::kMetaTopic:
      return r.meta_topic;
  }
  return kAll;
}

Metric ParseMetric(std::string_view name) {
  for (const auto &[m, n] : kMetrics) {
    if (n == name) return m;
  }
  throw ConfigError("unknown metric \"" + std::string(name) + "\"");
}

std::string_view ToString(Metric m) {
  for (const auto &[x, n] : kMetrics) {
    if (x == m) return n;
  }
  return "";
}

std::vector<Metric> AllMetrics() {
  std::vector<Metric> out;
  for (const auto &[m, n] : kMetrics) out.push_back(m);
  return out;
}

std::optional<std::pair<double, double>> MetricRatio(const ArticleIndexRecord &r, Metric m) {
  const double q = r.Q_a;
  if (m == Metric::kInterrogativeIndex) {
    if (r.S_a == 0) return std::nullopt;
    return std::make_pair(q, static_cast<double>(r.S_a));
  }
  if (r.Q_a == 0) return std::nullopt;
  switch (m) {
    case Metric::kAnswerability:
      return std::make_pair(static_cast<double>(r.A_a), q);
    case Metric::kUnanswered:
      return std::make_pair(static_cast<double>(r.unanswered_count), q);
    case Metric::kInternal:
      return std::make_pair(static_cast<double>(r.internal_count), q);
    case Metric::kExternal:
      return std::make_pair(static_cast<double>(r.external_count), q);
    case Metric::kActor:
      if (!r.has_entities) return std::nullopt;
      return std::make_pair(static_cast<double>(r.actor_count), q);
    case Metric::kGroup:
      if (!r.has_entities) return std::nullopt;
      return std::make_pair(static_cast<double>(r.group_count), q);
    case Metric::kIssue:
      if (!r.has_entities) return std::nullopt;
      return std::make_pair(static_cast<double>(r.issue_count), q);
    case Metric::kPersonalization:
      if (!r.has_entities) return std::nullopt;
      return std::make_pair(static_cast<double>(r.pers_flag_count), q);
    case Metric::kOrganization:
      if (!r.has_entities) return std::nullopt;
      return std::make_pair(static_cast<double>(r.org_flag_count), q);
    case Metric::kLocation:
      if (!r.has_entities) return std::nullopt;
      return std::make_pair(static_cast<double>(r.loc_flag_count), q);
    case Metric::kEvent:
      if (!r.has_entities) return std::nullopt;
      return std::make_pair(static_cast<double>(r.event_flag_count), q);
    case Metric::kCollective:
      if (!r.has_entities) return std::nullopt;
      return std::make_pair(static_cast<double>(r.collective_flag_count), q);
    case Metric::kQuotedQuestions:
      return std::make_pair(static_cast<double>(r.q_quote_count), q);
    case Metric::kInterrogativeIndex:
      break;
  }
  return std::nullopt;
}

std::vector<AggregateRow> Aggregate(const std::vector<ArticleIndexRecord> &records,
                                    Dimension dimension, Metric metric, Weighting weighting) {
  struct Accumulator {
    std::vector<std::pair<double, double>> observations;
    double numerator = 0.0;
    double denominator = 0.0;
    long questions = 0;
  };
  std::map<std::string, Accumulator> groups;
  for (const auto &r : records) {
    const auto ratio = MetricRatio(r, metric);
    if (!ratio) continue;
    auto &acc = groups[GroupKey(r, dimension)];
    const auto [num, den] = *ratio;
    acc.observations.emplace_back(num / den, weighting == Weighting::kPooled ? den : 1.0);
    acc.numerator += num;
    acc.denominator += den;
    acc.questions += r.Q_a;
  }
  std::vector<AggregateRow> rows;
  for (auto &[key, acc] : groups) {
    AggregateRow row;
    row.key = key;
    row.n_articles = acc.observations.size();
    row.n_questions = acc.questions;
    row.summary = Summarize(acc.observations);
    row.pooled = acc.numerator / acc.denominator;
    if (weighting == Weighting::kPooled) row.summary.mean = row.pooled;
    rows.push_back(std::move(row));
  }
  return rows;
}

CsvTable AggregateTable(const std::vector<AggregateRow> &rows, Dimension dimension) {
  CsvTable t;
  t.header = {std::string(DimensionHeader(dimension)),
              "N articles",
              "N questions",
              "Mean",
              "Median",
              "SD",
              "P90",
              "Pooled"};
  for (const auto &r : rows) {
    t.rows.push_back({r.key, std::to_string(r.n_articles), std::to_string(r.n_questions),
                      FormatFixed(r.summary.mean, 6), FormatFixed(r.summary.median, 6),
                      FormatFixed(r.summary.sd, 6), FormatFixed(r.summary.p90, 6),
                      FormatFixed(r.pooled, 6)});
  }
  return t;
}

}  // namespace qstance::metrics
