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

// Inter-annotator agreement on double-coded articles. Spans of the two
// annotators are aligned one-to-one by character-level Jaccard overlap;
// span agreement is pooled over the union of all segments, and the six-way
// function labels of matched units are compared with accuracy and Cohen's
// kappa.

#ifndef QSTANCE_TRIANGULATE_AGREEMENT_H_
#define QSTANCE_TRIANGULATE_AGREEMENT_H_

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "qstance/stance/labels.h"
#include "qstance/triangulate/gold.h"
#include "qstance/util/io.h"

namespace qstance::triangulate {

// Half-open character range [start, end).
struct Span {
  int start = 0;
  int end = 0;

  int length() const { return end - start; }
  friend bool operator==(const Span &, const Span &) = default;
};

int Overlap(const Span &a, const Span &b);
// |a ∩ b| / |a ∪ b| in characters; 0 for disjoint spans.
double SpanJaccard(const Span &a, const Span &b);

struct AlignedPair {
  size_t a = 0;  // index into the first span list
  size_t b = 0;  // index into the second span list
  double jaccard = 0.0;
};

struct Alignment {
  std::vector<AlignedPair> pairs;  // sorted by index into the first list
  std::vector<size_t> unmatched_a;
  std::vector<size_t> unmatched_b;
};

enum class AlignMode {
  // One-to-one matching in descending order of pairwise Jaccard.
  kGreedy,
  // Matching that maximizes the summed Jaccard.
  kOptimal,
};

// Pairs with zero overlap never match. Greedy ties are broken by the spans
// themselves, not by list order, so swapping the two lists gives the same
// pairs.
Alignment AlignSpans(const std::vector<Span> &a, const std::vector<Span> &b,
                     AlignMode mode = AlignMode::kGreedy);

// Spans of both annotators for one article plus their alignment.
struct ArticleAlignment {
  std::vector<Span> a;
  std::vector<Span> b;
  Alignment alignment;
};

// Σ|intersection| / Σ|union| over all articles; an unmatched unit adds its
// length to the union only. Throws DataError on empty input or when no
// article holds any span.
double CorpusJaccard(const std::vector<ArticleAlignment> &articles);

// κ = (p_o − p_e) / (1 − p_e), with p_e from the product of marginals.
// Returns 1 when p_e = 1 and p_o = 1. Throws DataError on empty or
// mismatched input.
double CohenKappa(const std::vector<stance::StanceLabel> &a,
                  const std::vector<stance::StanceLabel> &b);

// Rows: first annotator's label; columns: second annotator's label; both in
// typology order.
using LabelMatrix = std::array<std::array<int, 6>, 6>;

struct AgreementReport {
  std::string annotator_a;
  std::string annotator_b;
  int n_articles = 0;
  int n_units_a = 0;
  int n_units_b = 0;
  int n_matched_units = 0;
  std::optional<double> jaccard_overlap;
  std::optional<double> label_accuracy;
  std::optional<double> cohen_kappa;
  LabelMatrix confusion{};
  // "insufficient_data" when there is nothing to compare.
  std::vector<std::string> flags;

  Json ToJson() const;
};

// Agreement over the given double-coded articles (both annotators finished
// them; an article may legitimately have no units). Units of other articles
// or other annotators are ignored.
AgreementReport ComputeAgreement(const std::vector<GoldUnit> &units,
                                 const std::vector<std::string> &article_ids,
                                 const std::string &annotator_a, const std::string &annotator_b,
                                 AlignMode mode = AlignMode::kGreedy);

}  // namespace qstance::triangulate

#endif  // QSTANCE_TRIANGULATE_AGREEMENT_H_
