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

#include "qstance/triangulate/agreement.h"

#include <algorithm>
#include <limits>
#include <map>
#include <set>
#include <tuple>

#include "qstance/util/errors.h"

namespace qstance::triangulate {

namespace {

struct Candidate {
  size_t a;
  size_t b;
  double jaccard;
};

Alignment Finish(std::vector<AlignedPair> pairs, size_t n_a, size_t n_b) {
  std::sort(pairs.begin(), pairs.end(),
            [](const AlignedPair &x, const AlignedPair &y) { return x.a < y.a; });
  Alignment out;
  std::vector<bool> used_a(n_a, false), used_b(n_b, false);
  for (const auto &p : pairs) used_a[p.a] = used_b[p.b] = true;
  for (size_t i = 0; i < n_a; ++i) {
    if (!used_a[i]) out.unmatched_a.push_back(i);
  }
  for (size_t j = 0; j < n_b; ++j) {
    if (!used_b[j]) out.unmatched_b.push_back(j);
  }
  out.pairs = std::move(pairs);
  return out;
}

Alignment Greedy(const std::vector<Span> &a, const std::vector<Span> &b) {
  std::vector<Candidate> candidates;
  for (size_t i = 0; i < a.size(); ++i) {
    for (size_t j = 0; j < b.size(); ++j) {
      const double jac = SpanJaccard(a[i], b[j]);
      if (jac > 0.0) candidates.push_back({i, j, jac});
    }
  }
  // The tie key is the unordered pair of spans, which is the same whichever
  // annotator comes first.
  auto key = [&](const Candidate &c) {
    const auto sa = std::make_pair(a[c.a].start, a[c.a].end);
    const auto sb = std::make_pair(b[c.b].start, b[c.b].end);
    return std::make_pair(std::min(sa, sb), std::max(sa, sb));
  };
  std::stable_sort(candidates.begin(), candidates.end(),
                   [&](const Candidate &x, const Candidate &y) {
                     if (x.jaccard != y.jaccard) return x.jaccard > y.jaccard;
                     return key(x) < key(y);
                   });
  std::vector<bool> used_a(a.size(), false), used_b(b.size(), false);
  std::vector<AlignedPair> pairs;
  for (const auto &c : candidates) {
    if (used_a[c.a] || used_b[c.b]) continue;
    used_a[c.a] = used_b[c.b] = true;
    pairs.push_back({c.a, c.b, c.jaccard});
  }
  return Finish(std::move(pairs), a.size(), b.size());
}

// Hungarian algorithm (potentials, O(n^3)) on a square cost matrix;
// returns the column assigned to each row.
std::vector<size_t> MinCostAssignment(const std::vector<std::vector<double>> &cost) {
  const size_t n = cost.size();
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<size_t> p(n + 1, 0), way(n + 1, 0);
  for (size_t i = 1; i <= n; ++i) {
    p[0] = i;
    size_t j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<bool> used(n + 1, false);
    do {
      used[j0] = true;
      const size_t i0 = p[j0];
      double delta = inf;
      size_t j1 = 0;
      for (size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<size_t> row_to_col(n, 0);
  for (size_t j = 1; j <= n; ++j) {
    if (p[j] != 0) row_to_col[p[j] - 1] = j - 1;
  }
  return row_to_col;
}

Alignment Optimal(const std::vector<Span> &a, const std::vector<Span> &b) {
  const size_t n = std::max(a.size(), b.size());
  std::vector<std::vector<double>> cost(n, std::vector<double>(n, 0.0));
  for (size_t i = 0; i < a.size(); ++i) {
    for (size_t j = 0; j < b.size(); ++j) cost[i][j] = -SpanJaccard(a[i], b[j]);
  }
  const auto assignment = MinCostAssignment(cost);
  std::vector<AlignedPair> pairs;
  for (size_t i = 0; i < a.size(); ++i) {
    const size_t j = assignment[i];
    if (j >= b.size()) continue;
    const double jac = SpanJaccard(a[i], b[j]);
    if (jac > 0.0) pairs.push_back({i, j, jac});
  }
  return Finish(std::move(pairs), a.size(), b.size());
}

}  // namespace

int Overlap(const Span &a, const Span &b) {
  return std::max(0, std::min(a.end, b.end) - std::max(a.start, b.start));
}

double SpanJaccard(const Span &a, const Span &b) {
  const int inter = Overlap(a, b);
  if (inter == 0) return 0.0;
  return static_cast<double>(inter) / (a.length() + b.length() - inter);
}

Alignment AlignSpans(const std::vector<Span> &a, const std::vector<Span> &b, AlignMode mode) {
  return mode == AlignMode::kGreedy ? Greedy(a, b) : Optimal(a, b);
}

double CorpusJaccard(const std::vector<ArticleAlignment> &articles) {
  if (articles.empty()) throw DataError("corpus Jaccard needs at least one article");
  long intersection = 0;
  long union_length = 0;
  for (const auto &art : articles) {
    for (const auto &p : art.alignment.pairs) {
      const int inter = Overlap(art.a[p.a], art.b[p.b]);
      intersection += inter;
      union_length += art.a[p.a].length() + art.b[p.b].length() - inter;
    }
    for (size_t i : art.alignment.unmatched_a) union_length += art.a[i].length();
    for (size_t j : art.alignment.unmatched_b) union_length += art.b[j].length();
  }
  if (union_length == 0) throw DataError("corpus Jaccard over articles without any span");
  return static_cast<double>(intersection) / static_cast<double>(union_length);
}

double CohenKappa(const std::vector<stance::StanceLabel> &a,
                  const std::vector<stance::StanceLabel> &b) {
  if (a.empty()) throw DataError("Cohen's kappa needs at least one labeled pair");
  if (a.size() != b.size()) throw DataError("Cohen's kappa needs paired label sequences");
  const double n = static_cast<double>(a.size());
  std::array<double, 6> marg_a{}, marg_b{};
  double agree = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    ++marg_a[static_cast<size_t>(stance::TypologyRank(a[i]))];
    ++marg_b[static_cast<size_t>(stance::TypologyRank(b[i]))];
    if (a[i] == b[i]) ++agree;
  }
  const double po = agree / n;
  double pe = 0.0;
  for (size_t k = 0; k < 6; ++k) pe += (marg_a[k] / n) * (marg_b[k] / n);
  if (pe >= 1.0) return po >= 1.0 ? 1.0 : 0.0;
  return (po - pe) / (1.0 - pe);
}

Json AgreementReport::ToJson() const {
  auto opt = [](const std::optional<double> &v) { return v ? Json(*v) : Json(nullptr); };
  Json labels = Json::array();
  for (auto l : stance::kTypologyOrder) labels.push_back(std::string(stance::ToString(l)));
  Json matrix = Json::array();
  for (const auto &row : confusion) matrix.push_back(row);
  return Json{{"annotator_a", annotator_a},
              {"annotator_b", annotator_b},
              {"n_articles", n_articles},
              {"n_units_a", n_units_a},
              {"n_units_b", n_units_b},
              {"n_matched_units", n_matched_units},
              {"jaccard_overlap", opt(jaccard_overlap)},
              {"label_accuracy", opt(label_accuracy)},
              {"cohen_kappa", opt(cohen_kappa)},
              {"confusion", Json{{"labels", labels}, {"matrix", matrix}}},
              {"flags", flags}};
}

AgreementReport ComputeAgreement(const std::vector<GoldUnit> &units,
                                 const std::vector<std::string> &article_ids,
                                 const std::string &annotator_a, const std::string &annotator_b,
                                 AlignMode mode) {
  AgreementReport report;
  report.annotator_a = annotator_a;
  report.annotator_b = annotator_b;
  const std::set<std::string> articles(article_ids.begin(), article_ids.end());
  report.n_articles = static_cast<int>(articles.size());

  // Units per article and annotator, in a canonical order.
  std::map<std::string, std::pair<std::vector<const GoldUnit *>, std::vector<const GoldUnit *>>>
      grouped;
  for (const auto &id : articles) grouped[id];
  for (const auto &u : units) {
    auto it = grouped.find(u.article_id);
    if (it == grouped.end()) continue;
    if (u.annotator_id == annotator_a) it->second.first.push_back(&u);
    if (u.annotator_id == annotator_b) it->second.second.push_back(&u);
  }
  auto canonical = [](const GoldUnit *x, const GoldUnit *y) {
    return std::tie(x->start, x->end, x->unit_id) < std::tie(y->start, y->end, y->unit_id);
  };

  std::vector<ArticleAlignment> alignments;
  std::vector<stance::StanceLabel> labels_a, labels_b;
  for (auto &[id, pair] : grouped) {
    auto &[ua, ub] = pair;
    std::sort(ua.begin(), ua.end(), canonical);
    std::sort(ub.begin(), ub.end(), canonical);
    ArticleAlignment art;
    for (const auto *u : ua) art.a.push_back({u->start, u->end});
    for (const auto *u : ub) art.b.push_back({u->start, u->end});
    art.alignment = AlignSpans(art.a, art.b, mode);
    for (const auto &p : art.alignment.pairs) {
      const auto la = ua[p.a]->function, lb = ub[p.b]->function;
      labels_a.push_back(la);
      labels_b.push_back(lb);
      ++report.confusion[static_cast<size_t>(stance::TypologyRank(la))]
                        [static_cast<size_t>(stance::TypologyRank(lb))];
    }
    report.n_units_a += static_cast<int>(ua.size());
    report.n_units_b += static_cast<int>(ub.size());
    alignments.push_back(std::move(art));
  }
  report.n_matched_units = static_cast<int>(labels_a.size());

  if (report.n_units_a + report.n_units_b == 0) {
    report.flags.push_back("insufficient_data");
    return report;
  }
  report.jaccard_overlap = CorpusJaccard(alignments);
  if (labels_a.empty()) {
    report.flags.push_back("no_matched_units");
    return report;
  }
  int agree = 0;
  for (size_t i = 0; i < labels_a.size(); ++i) agree += labels_a[i] == labels_b[i];
  report.label_accuracy = static_cast<double>(agree) / static_cast<double>(labels_a.size());
  report.cohen_kappa = CohenKappa(labels_a, labels_b);
  return report;
}

}  // namespace qstance::triangulate
