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

#include "qstance/triangulate/sample.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>

#include "qstance/util/errors.h"
#include "qstance/util/logging.h"
#include "qstance/util/random.h"

namespace qstance::triangulate {

namespace {

using metrics::SourceGroup;

constexpr std::array<SourceGroup, 2> kGroups = {SourceGroup::kLocal, SourceGroup::kNational};

struct Profile {
  const corpus::ArticleRecord *article = nullptr;
  SourceGroup group = SourceGroup::kLocal;
  bool question_containing = false;
  std::optional<stance::StanceLabel> dominant;
};

// Per source group and role, the number of articles to draw.
struct Quota {
  int main_question = 0;
  int main_free = 0;
  int double_coded = 0;
  int extension = 0;

  int question_total() const { return main_question + double_coded + 2 * extension; }
};

Quota HalfQuota(const SamplePlan &plan, double scale) {
  auto half = [scale](int n) { return static_cast<int>(std::floor(n * scale / 2.0 + 1e-9)); };
  Quota q;
  const int main = half(plan.main_eval);
  q.main_question = static_cast<int>(std::lround(main * plan.main_question_share));
  q.main_free = main - q.main_question;
  q.double_coded = half(plan.double_coded);
  q.extension = half(plan.extension_per_annotator);
  return q;
}

// Draws up to `n` question-containing articles, cycling over the dominant
// stance buckets in typology order so that profiles are as balanced as the
// population allows.
std::vector<const Profile *> DrawBalanced(const std::vector<const Profile *> &pool, size_t n,
                                          SeededRng &rng) {
  std::vector<std::vector<const Profile *>> buckets(stance::kTypologyOrder.size() + 1);
  for (const Profile *p : pool) {
    const size_t b = p->dominant ? stance::TypologyRank(*p->dominant) : buckets.size() - 1;
    buckets[b].push_back(p);
  }
  for (auto &b : buckets) rng.Shuffle(b);
  std::vector<const Profile *> out;
  std::vector<size_t> next(buckets.size(), 0);
  while (out.size() < n) {
    bool progressed = false;
    for (size_t b = 0; b < buckets.size() && out.size() < n; ++b) {
      if (next[b] < buckets[b].size()) {
        out.push_back(buckets[b][next[b]++]);
        progressed = true;
      }
    }
    if (!progressed) break;
  }
  return out;
}

}  // namespace

std::string_view ToString(SampleRole role) {
  switch (role) {
    case SampleRole::kMainEval:
      return "main_eval";
    case SampleRole::kDouble:
      return "double";
    case SampleRole::kExtensionA:
      return "extension-A";
    case SampleRole::kExtensionB:
      return "extension-B";
  }
  return "";
}

std::optional<SampleRole> ParseSampleRole(std::string_view text) {
  for (SampleRole r : kAllRoles) {
    if (text == ToString(r)) return r;
  }
  return std::nullopt;
}

void SamplePlan::Validate() const {
  if (main_eval < 0 || double_coded < 0 || extension_per_annotator < 0) {
    throw ConfigError("sample plan sizes must be non-negative");
  }
  if (main_eval % 2 || double_coded % 2 || extension_per_annotator % 2) {
    throw ConfigError("sample plan sizes must be even to split across source groups");
  }
  if (!(main_question_share >= 0.0 && main_question_share <= 1.0)) {
    throw ConfigError("main_question_share must lie in [0,1]");
  }
  if (annotator_a.empty() || annotator_b.empty() || annotator_a == annotator_b) {
    throw ConfigError("the two annotator ids must be distinct and non-empty");
  }
}

std::optional<stance::StanceLabel> DominantStance(
    const std::vector<stance::PseudoLabel> &article_labels) {
  std::array<int, stance::kTypologyOrder.size()> counts{};
  bool any = false;
  for (const auto &l : article_labels) {
    if (!l.stance) continue;
    ++counts[stance::TypologyRank(*l.stance)];
    any = true;
  }
  if (!any) return std::nullopt;
  size_t best = 0;
  for (size_t i = 1; i < counts.size(); ++i) {
    if (counts[i] > counts[best]) best = i;
  }
  return stance::kTypologyOrder[best];
}

int Sample::Count(SampleRole role, std::optional<SourceGroup> group) const {
  return static_cast<int>(std::count_if(items.begin(), items.end(), [&](const SampleItem &i) {
    return i.role == role && (!group || i.source_group == *group);
  }));
}

Sample StratifiedSample(const std::vector<corpus::ArticleRecord> &articles,
                        const std::vector<stance::PseudoLabel> &labels, const SamplePlan &plan) {
  plan.Validate();
  Sample sample;

  std::map<std::string, std::vector<stance::PseudoLabel>> by_article;
  for (const auto &l : labels) by_article[l.article_id].push_back(l);

  // Profiles in article_id order so the draw does not depend on input order.
  std::vector<Profile> profiles;
  size_t ungrouped = 0;
  for (const auto &a : articles) {
    const auto group = metrics::SourceGroupOf(a.outlet);
    if (!group) {
      ++ungrouped;
      continue;
    }
    Profile p{&a, *group, false, std::nullopt};
    if (auto it = by_article.find(a.article_id); it != by_article.end()) {
      p.question_containing = std::any_of(it->second.begin(), it->second.end(),
                                          [](const auto &l) { return l.is_interrogative; });
      p.dominant = DominantStance(it->second);
    }
    profiles.push_back(p);
  }
  std::sort(profiles.begin(), profiles.end(), [](const Profile &x, const Profile &y) {
    return x.article->article_id < y.article->article_id;
  });
  for (size_t i = 1; i < profiles.size(); ++i) {
    if (profiles[i].article->article_id == profiles[i - 1].article->article_id) {
      throw DataError("duplicate article_id in sampling population: " +
                      profiles[i].article->article_id);
    }
  }
  if (ungrouped > 0) {
    sample.warnings.push_back(std::to_string(ungrouped) +
                              " articles without a source group were left out of sampling");
  }

  std::array<std::vector<const Profile *>, 2> question_pool, free_pool;
  for (const auto &p : profiles) {
    auto &pool = p.question_containing ? question_pool : free_pool;
    pool[p.group == SourceGroup::kLocal ? 0 : 1].push_back(&p);
  }
  for (size_t g = 0; g < 2; ++g) {
    if (question_pool[g].empty() && free_pool[g].empty()) {
      throw DataError(std::string("no articles in the ") +
                      std::string(metrics::ToString(kGroups[g])) + " source group");
    }
  }

  // Shrink the whole plan by one factor if any stratum falls short.
  const Quota full = HalfQuota(plan, 1.0);
  double scale = 1.0;
  for (size_t g = 0; g < 2; ++g) {
    if (full.question_total() > 0) {
      scale = std::min(scale, static_cast<double>(question_pool[g].size()) /
                                  full.question_total());
    }
    if (full.main_free > 0) {
      scale = std::min(scale, static_cast<double>(free_pool[g].size()) / full.main_free);
    }
  }
  const Quota quota = HalfQuota(plan, scale);
  sample.scale = scale;
  if (scale < 1.0) {
    sample.warnings.push_back(
        "population too small for the sampling plan; all roles scaled by " +
        FormatFixed(scale, 4) + " (" + std::to_string(2 * quota.question_total() +
                                                      2 * quota.main_free) +
        " of " + std::to_string(plan.total()) + " articles)");
  }

  SeededRng rng(plan.seed);
  std::map<SampleRole, std::vector<SampleItem>> by_role;
  for (size_t g = 0; g < 2; ++g) {
    const auto drawn =
        DrawBalanced(question_pool[g], static_cast<size_t>(quota.question_total()), rng);
    // Deal the drawn articles to the roles in proportion to their quotas,
    // so every role sees the same spread of dominant stances.
    const std::array<std::pair<SampleRole, int>, 4> targets = {
        std::pair{SampleRole::kMainEval, quota.main_question},
        std::pair{SampleRole::kDouble, quota.double_coded},
        std::pair{SampleRole::kExtensionA, quota.extension},
        std::pair{SampleRole::kExtensionB, quota.extension}};
    std::array<int, 4> dealt{};
    for (const Profile *p : drawn) {
      size_t best = targets.size();
      double best_room = 0.0;
      for (size_t t = 0; t < targets.size(); ++t) {
        if (dealt[t] >= targets[t].second) continue;
        const double room = 1.0 - static_cast<double>(dealt[t]) / targets[t].second;
        if (best == targets.size() || room > best_room + 1e-12) {
          best = t;
          best_room = room;
        }
      }
      ++dealt[best];
      SampleItem item;
      item.article_id = p->article->article_id;
      item.source = p->article->source;
      item.source_group = p->group;
      item.role = targets[best].first;
      item.question_containing = true;
      item.dominant_stance = p->dominant;
      by_role[item.role].push_back(std::move(item));
    }

    auto free = free_pool[g];
    rng.Shuffle(free);
    free.resize(std::min(free.size(), static_cast<size_t>(quota.main_free)));
    // Interleave question-free articles into the main set.
    auto &main = by_role[SampleRole::kMainEval];
    const size_t main_begin = main.size() - static_cast<size_t>(dealt[0]);
    std::vector<SampleItem> merged(main.begin() + static_cast<std::ptrdiff_t>(main_begin),
                                   main.end());
    for (const Profile *p : free) {
      SampleItem item;
      item.article_id = p->article->article_id;
      item.source = p->article->source;
      item.source_group = p->group;
      item.role = SampleRole::kMainEval;
      merged.push_back(std::move(item));
    }
    rng.Shuffle(merged);
    main.resize(main_begin);
    main.insert(main.end(), merged.begin(), merged.end());
  }

  int ordinal = 0;
  for (SampleRole role : kAllRoles) {
    auto &items = by_role[role];
    // Main-set articles alternate between annotators within each source
    // group so both annotators see the same source mix.
    std::array<int, 2> position{};
    for (auto &item : items) {
      switch (role) {
        case SampleRole::kMainEval: {
          int &pos = position[item.source_group == SourceGroup::kLocal ? 0 : 1];
          item.annotators = {pos++ % 2 == 0 ? plan.annotator_a : plan.annotator_b};
          break;
        }
        case SampleRole::kDouble:
          item.annotators = {plan.annotator_a, plan.annotator_b};
          break;
        case SampleRole::kExtensionA:
          item.annotators = {plan.annotator_a};
          break;
        case SampleRole::kExtensionB:
          item.annotators = {plan.annotator_b};
          break;
      }
      item.ordinal = ordinal++;
      sample.items.push_back(std::move(item));
    }
  }
  for (const auto &w : sample.warnings) LogWarning(w);
  return sample;
}

CsvTable SampleManifest(const Sample &sample) {
  CsvTable table;
  table.header = {"ordinal",     "article_id", "source",
                  "source_group", "role",      "annotators",
                  "question_containing", "dominant_stance"};
  for (const auto &i : sample.items) {
    std::string annotators;
    for (const auto &a : i.annotators) annotators += (annotators.empty() ? "" : ";") + a;
    table.rows.push_back({std::to_string(i.ordinal), i.article_id, i.source,
                          std::string(metrics::ToString(i.source_group)),
                          std::string(ToString(i.role)), annotators,
                          i.question_containing ? "true" : "false",
                          i.dominant_stance ? std::string(stance::ToString(*i.dominant_stance))
                                            : ""});
  }
  return table;
}

std::vector<SampleItem> ParseSampleManifest(const CsvTable &table) {
  auto column = [&table](const char *name) {
    const int c = table.Column(name);
    if (c < 0) throw DataError(std::string("sample manifest lacks column ") + name);
    return static_cast<size_t>(c);
  };
  const size_t c_ordinal = column("ordinal"), c_article = column("article_id"),
               c_source = column("source"), c_group = column("source_group"),
               c_role = column("role"), c_annotators = column("annotators"),
               c_question = column("question_containing"), c_stance = column("dominant_stance");
  std::vector<SampleItem> items;
  for (size_t r = 0; r < table.rows.size(); ++r) {
    const auto &row = table.rows[r];
    if (row.size() != table.header.size()) {
      throw DataError("sample manifest row " + std::to_string(r + 1) + " has " +
                      std::to_string(row.size()) + " fields");
    }
    const std::string where = "sample manifest row " + std::to_string(r + 1);
    SampleItem i;
    try {
      i.ordinal = std::stoi(row[c_ordinal]);
    } catch (const std::exception &) {
      throw DataError(where + ": bad ordinal");
    }
    i.article_id = row[c_article];
    i.source = row[c_source];
    if (row[c_group] == metrics::ToString(SourceGroup::kLocal)) {
      i.source_group = SourceGroup::kLocal;
    } else if (row[c_group] == metrics::ToString(SourceGroup::kNational)) {
      i.source_group = SourceGroup::kNational;
    } else {
      throw DataError(where + ": unknown source_group " + row[c_group]);
    }
    auto role = ParseSampleRole(row[c_role]);
    if (!role) throw DataError(where + ": unknown role " + row[c_role]);
    i.role = *role;
    std::string rest = row[c_annotators];
    for (size_t pos; (pos = rest.find(';')) != std::string::npos; rest.erase(0, pos + 1)) {
      i.annotators.push_back(rest.substr(0, pos));
    }
    if (!rest.empty()) i.annotators.push_back(rest);
    if (i.annotators.empty()) throw DataError(where + ": no annotators");
    i.question_containing = row[c_question] == "true";
    if (!row[c_stance].empty()) {
      i.dominant_stance = stance::ParseStance(row[c_stance]);
      if (!i.dominant_stance) throw DataError(where + ": unknown stance " + row[c_stance]);
    }
    items.push_back(std::move(i));
  }
  return items;
}

}  // namespace qstance::triangulate
