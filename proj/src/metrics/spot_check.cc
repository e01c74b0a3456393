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

#include "qstance/metrics/spot_check.h"

#include <algorithm>
#include <array>
#include <charconv>
#include <map>
#include <set>
#include <sstream>

#include "qstance/util/errors.h"
#include "qstance/util/logging.h"
#include "qstance/util/random.h"

namespace qstance::metrics {

std::string_view ToString(SourceGroup g) {
  return g == SourceGroup::kLocal ? "local" : "national";
}

std::optional<SourceGroup> SourceGroupOf(const std::optional<corpus::OutletMeta> &outlet) {
  if (!outlet) return std::nullopt;
  switch (outlet->scale) {
    case corpus::Scale::kHyperLocal:
    case corpus::Scale::kRegional:
      return SourceGroup::kLocal;
    case corpus::Scale::kNational:
    case corpus::Scale::kTransnational:
    case corpus::Scale::kThematic:
      return SourceGroup::kNational;
  }
  return std::nullopt;
}

namespace {

struct Candidate {
  const answers::QaRecord *first = nullptr;
  std::vector<int> sent_ids;
  SourceGroup stratum = SourceGroup::kLocal;
  std::string source;
};

}  // namespace

SpotCheckSample SpotCheckSampleGroups(
    const std::vector<corpus::ArticleRecord> &articles,
    const std::vector<std::vector<corpus::SentenceRecord>> &sentences,
    const std::vector<answers::QaRecord> &records, const SpotCheckOptions &options) {
  if (options.n_answered < 0 || options.n_unanswered < 0) {
    throw ConfigError("spot-check sizes must be non-negative");
  }
  std::map<std::string, const corpus::ArticleRecord *> article_by_id;
  for (const auto &a : articles) article_by_id[a.article_id] = &a;
  std::map<std::string, const std::vector<corpus::SentenceRecord> *> sentences_by_id;
  for (const auto &s : sentences) {
    if (!s.empty()) sentences_by_id[s.front().article_id] = &s;
  }

  // Question groups keyed by (article, group), with their stratum.
  std::map<std::pair<std::string, int>, Candidate> groups;
  for (const auto &r : records) {
    auto a = article_by_id.find(r.article_id);
    if (a == article_by_id.end()) throw DataError("QA record for unknown article " + r.article_id);
    const auto stratum = SourceGroupOf(a->second->outlet);
    if (!stratum) continue;
    auto &c = groups[{r.article_id, r.group_id}];
    if (c.first == nullptr || r.sent_id < c.first->sent_id) c.first = &r;
    c.sent_ids.push_back(r.sent_id);
    c.stratum = *stratum;
    c.source = a->second->source;
  }
  std::set<std::string> eligible;
  for (const auto &[key, c] : groups) eligible.insert(key.first);
  const size_t wanted = static_cast<size_t>(options.n_answered + options.n_unanswered);
  if (eligible.size() < wanted) {
    throw DataError("spot check needs " + std::to_string(wanted) +
                    " articles with question groups, found " + std::to_string(eligible.size()));
  }

  // Pools per (stratum, answered), in a seeded random order.
  SeededRng rng(options.seed);
  std::array<std::array<std::vector<const Candidate *>, 2>, 2> pools;
  for (auto &[key, c] : groups) {
    std::sort(c.sent_ids.begin(), c.sent_ids.end());
    pools[c.stratum == SourceGroup::kLocal ? 0 : 1][c.first->has_answer ? 1 : 0].push_back(&c);
  }
  for (auto &by_stratum : pools) {
    for (auto &pool : by_stratum) rng.Shuffle(pool);
  }

  SpotCheckSample sample;
  std::set<std::string> used;
  std::vector<const Candidate *> chosen;
  auto take = [&](std::vector<const Candidate *> &pool, int count) {
    int taken = 0;
    for (const Candidate *c : pool) {
      if (taken == count) break;
      if (c->first == nullptr || used.count(c->first->article_id) != 0) continue;
      used.insert(c->first->article_id);
      chosen.push_back(c);
      ++taken;
    }
    return taken;
  };
  // Unanswered groups are the scarce kind, so they are drawn first.
  for (int kind : {0, 1}) {
    const int total = kind == 1 ? options.n_answered : options.n_unanswered;
    const std::array<int, 2> target = {(total + 1) / 2, total / 2};
    std::array<int, 2> got = {take(pools[0][kind], target[0]), take(pools[1][kind], target[1])};
    const char *label = kind == 1 ? "answered" : "unanswered";
    for (int s : {0, 1}) {
      const int missing = target[s] - got[s];
      if (missing <= 0) continue;
      const int extra = take(pools[1 - s][kind], missing);
      got[1 - s] += extra;
      std::ostringstream w;
      w << "only " << (target[s] - missing) << " " << label << " groups available in the "
        << ToString(s == 0 ? SourceGroup::kLocal : SourceGroup::kNational) << " stratum; "
        << extra << " drawn from the other stratum";
      sample.warnings.push_back(w.str());
    }
    if (got[0] + got[1] < total) {
      sample.warnings.push_back("spot check: only " + std::to_string(got[0] + got[1]) + " " +
                                label + " groups selected of " + std::to_string(total));
    }
  }
  for (const auto &w : sample.warnings) LogWarning(w);

  std::sort(chosen.begin(), chosen.end(), [](const Candidate *a, const Candidate *b) {
    return std::make_tuple(a->stratum, !a->first->has_answer, a->first->article_id) <
           std::make_tuple(b->stratum, !b->first->has_answer, b->first->article_id);
  });
  for (const Candidate *c : chosen) {
    const answers::QaRecord &r = *c->first;
    SpotCheckItem item;
    item.sample_id = static_cast<int>(sample.items.size()) + 1;
    item.stratum = c->stratum;
    item.article_id = r.article_id;
    item.source = c->source;
    item.group_id = r.group_id;
    item.sent_ids = c->sent_ids;
    auto s = sentences_by_id.find(r.article_id);
    if (s == sentences_by_id.end()) {
      throw DataError("no sentences for spot-check article " + r.article_id);
    }
    for (int id : c->sent_ids) {
      if (id < 0 || static_cast<size_t>(id) >= s->second->size()) {
        throw DataError("QA record beyond the article: " + r.article_id);
      }
      if (!item.question_text.empty()) item.question_text += " ";
      item.question_text += (*s->second)[static_cast<size_t>(id)].text;
    }
    item.predicted_answered = r.has_answer;
    item.answer_sim = r.answer_sim;
    item.answer_start = r.answer_start;
    item.answer_len = r.answer_len;
    item.answer_text = r.answer_text;
    sample.items.push_back(std::move(item));
  }
  return sample;
}

namespace {

const std::vector<std::string> kManifestHeader = {
    "sample_id",  "stratum",     "article_id",   "source",     "group_id",
    "sent_ids",   "question_text", "predicted",  "answer_sim", "answer_start",
    "answer_len", "answer_text", "verdict",      "notes"};

template <typename T>
std::optional<T> ParseNumber(const std::string &text, const char *what) {
  if (text.empty()) return std::nullopt;
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw DataError(std::string("bad ") + what + " \"" + text + "\" in spot-check manifest");
  }
  return value;
}

}  // namespace

CsvTable SpotCheckManifest(const SpotCheckSample &sample) {
  CsvTable t;
  t.header = kManifestHeader;
  for (const auto &i : sample.items) {
    std::string ids;
    for (int id : i.sent_ids) ids += (ids.empty() ? "" : ";") + std::to_string(id);
    t.rows.push_back({std::to_string(i.sample_id), std::string(ToString(i.stratum)),
                      i.article_id, i.source, std::to_string(i.group_id), ids, i.question_text,
                      i.predicted_answered ? "answered" : "unanswered",
                      i.answer_sim ? FormatFixed(*i.answer_sim, 6) : "",
                      i.answer_start ? std::to_string(*i.answer_start) : "",
                      i.answer_len ? std::to_string(*i.answer_len) : "",
                      i.answer_text.value_or(""), i.verdict, i.notes});
  }
  return t;
}

std::vector<SpotCheckItem> ParseSpotCheckManifest(const CsvTable &table) {
  std::vector<int> col;
  for (const auto &name : kManifestHeader) {
    const int c = table.Column(name);
    if (c < 0) throw DataError("spot-check manifest lacks column " + name);
    col.push_back(c);
  }
  std::vector<SpotCheckItem> items;
  for (const auto &row : table.rows) {
    auto cell = [&](size_t k) -> std::string {
      const auto c = static_cast<size_t>(col[k]);
      return c < row.size() ? row[c] : std::string();
    };
    SpotCheckItem i;
    i.sample_id = ParseNumber<int>(cell(0), "sample_id").value_or(0);
    const std::string stratum = cell(1);
    if (stratum != "local" && stratum != "national") {
      throw DataError("bad stratum \"" + stratum + "\" in spot-check manifest");
    }
    i.stratum = stratum == "local" ? SourceGroup::kLocal : SourceGroup::kNational;
    i.article_id = cell(2);
    i.source = cell(3);
    i.group_id = ParseNumber<int>(cell(4), "group_id").value_or(0);
    std::stringstream ids(cell(5));
    for (std::string id; std::getline(ids, id, ';');) {
      i.sent_ids.push_back(*ParseNumber<int>(id, "sent_id"));
    }
    i.question_text = cell(6);
    const std::string predicted = cell(7);
    if (predicted != "answered" && predicted != "unanswered") {
      throw DataError("bad predicted status \"" + predicted + "\" in spot-check manifest");
    }
    i.predicted_answered = predicted == "answered";
    if (!cell(8).empty()) i.answer_sim = std::stod(cell(8));
    i.answer_start = ParseNumber<int>(cell(9), "answer_start");
    i.answer_len = ParseNumber<int>(cell(10), "answer_len");
    if (i.predicted_answered) i.answer_text = cell(11);
    i.verdict = cell(12);
    if (!i.verdict.empty() &&
        std::find(std::begin(kVerdicts), std::end(kVerdicts), i.verdict) == std::end(kVerdicts)) {
      throw DataError("bad verdict \"" + i.verdict + "\" in spot-check manifest");
    }
    i.notes = cell(13);
    items.push_back(std::move(i));
  }
  return items;
}

SpotCheckSummaryTables SummarizeSpotCheck(const std::vector<SpotCheckItem> &items) {
  // counts[row][stratum]
  std::array<std::array<int, 2>, 4> answered{};
  std::array<std::array<int, 2>, 2> unanswered{};
  for (const auto &i : items) {
    if (i.verdict.empty()) {
      throw DataError("spot-check item " + std::to_string(i.sample_id) + " has no verdict");
    }
    const size_t s = i.stratum == SourceGroup::kLocal ? 0 : 1;
    const auto v = static_cast<size_t>(
        std::find(std::begin(kVerdicts), std::end(kVerdicts), i.verdict) - std::begin(kVerdicts));
    if (i.predicted_answered) {
      ++answered[v][s];
    } else {
      ++unanswered[i.verdict == "none" ? 0 : 1][s];
    }
  }
  auto cell = [](int count, int total) {
    const double pct = total == 0 ? 0.0 : 100.0 * count / total;
    std::string p = FormatFixed(pct, 1);
    if (p.size() > 2 && p.compare(p.size() - 2, 2, ".0") == 0) p.resize(p.size() - 2);
    return std::to_string(count) + " (" + p + "%)";
  };
  auto build = [&](const std::string &title, const std::vector<std::string> &labels,
                   const auto &counts) {
    CsvTable t;
    t.header = {title, "Local", "National", "Total"};
    std::array<int, 2> totals{};
    for (const auto &row : counts) {
      totals[0] += row[0];
      totals[1] += row[1];
    }
    for (size_t r = 0; r < labels.size(); ++r) {
      t.rows.push_back({labels[r], cell(counts[r][0], totals[0]), cell(counts[r][1], totals[1]),
                        cell(counts[r][0] + counts[r][1], totals[0] + totals[1])});
    }
    return t;
  };
  SpotCheckSummaryTables out;
  out.answered = build("Predicted answered",
                       {"Clear answer", "Partial answer", "Answer elsewhere in article",
                        "No genuine answer"},
                       answered);
  out.unanswered = build("Predicted unanswered", {"Correctly unanswered", "Missed answer exists"},
                         unanswered);
  return out;
}

}  // namespace qstance::metrics
