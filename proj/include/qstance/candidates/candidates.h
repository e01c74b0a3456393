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

// High-recall interrogative candidate detection. A sentence is a candidate
// when any rule family fires: a literal "?", a sentence-initial
// interrogative pattern, a question-raising verb pattern or a
// question-raising noun pattern. Pattern inventories live in a plain-text
// rule file so they can be extended without recompiling.

#ifndef QSTANCE_CANDIDATES_CANDIDATES_H_
#define QSTANCE_CANDIDATES_CANDIDATES_H_

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "qstance/corpus/types.h"

namespace qstance::candidates {

enum class RuleFamily { kQmark, kInitialPattern, kVerbPattern, kNounPattern };

std::string_view ToString(RuleFamily family);
RuleFamily ParseRuleFamily(std::string_view name);

struct RuleSet {
  int version = 0;
  std::vector<std::string> initial;
  std::vector<std::string> verb;
  std::vector<std::string> noun;

  // Sections [initial], [verb], [noun]; "#" starts a comment; an optional
  // "#! version N" line sets the version.
  static RuleSet Parse(std::string_view text);
  static RuleSet Load(const std::string &path);
  // The rule file shipped in assets/rules.
  static RuleSet Default();
};

struct CandidateRecord {
  std::string article_id;
  int sent_id = 0;
  bool is_candidate = false;
  std::set<RuleFamily> matched_rules;
  bool calibration_pick = false;

  Json ToJson() const;
  static CandidateRecord FromJson(const Json &j);
};

class CandidateDetector {
 public:
  struct Options {
    // Fold accents on both sides before matching, for noisy corpora.
    bool fold_accents = false;
  };

  explicit CandidateDetector(const RuleSet &rules) : CandidateDetector(rules, Options{}) {}
  CandidateDetector(const RuleSet &rules, Options options);

  std::set<RuleFamily> Match(std::string_view sentence) const;
  CandidateRecord Detect(const corpus::SentenceRecord &sentence) const;

 private:
  std::vector<std::u32string> Normalize(const std::vector<std::string> &patterns) const;

  Options options_;
  std::vector<std::u32string> initial_;
  std::vector<std::u32string> verb_;
  std::vector<std::u32string> noun_;
};

// ceil(fraction * n_candidates) non-candidates drawn uniformly without
// replacement, capped at the population. Keys are sorted before drawing,
// so the result depends only on the key set and the seed.
std::set<corpus::SentenceKey> CalibrationSample(
    std::vector<corpus::SentenceKey> non_candidates, size_t n_candidates,
    uint64_t seed, double fraction = 0.25);

struct SourcePool {
  size_t n_candidates = 0;
  std::vector<corpus::SentenceKey> non_candidates;
};

// Per-source variant: each source contributes ceil(fraction * its own
// candidate count) of its own non-candidates.
std::set<corpus::SentenceKey> CalibrationSamplePerSource(
    const std::map<std::string, SourcePool> &pools, uint64_t seed,
    double fraction = 0.25);

}  // namespace qstance::candidates

#endif  // QSTANCE_CANDIDATES_CANDIDATES_H_
