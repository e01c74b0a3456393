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

#include "qstance/candidates/candidates.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qstance/util/errors.h"
#include "qstance/util/random.h"
#include "qstance/util/utf8.h"

namespace qstance::candidates {

namespace {

bool IsWordChar(char32_t c) { return utf8::IsLetter(c) || utf8::IsDigit(c); }

// Quotes, dashes and brackets skipped before testing initial patterns.
bool IsLeadingNoise(char32_t c) {
  switch (c) {
    case U' ':
    case U'"':
    case U'\'':
    case U'(':
    case U'[':
    case U'-':
    case 0x00AB:
    case 0x00BB:
    case 0x201C:
    case 0x201D:
    case 0x2018:
    case 0x2014:
    case 0x2013:
    case 0x2026:
      return true;
    default:
      return false;
  }
}

bool MatchesAt(std::u32string_view text, size_t pos, std::u32string_view pattern) {
  if (pattern.empty() || pos + pattern.size() > text.size()) return false;
  if (text.compare(pos, pattern.size(), pattern) != 0) return false;
  if (IsWordChar(pattern.front()) && pos > 0 && IsWordChar(text[pos - 1])) return false;
  const size_t end = pos + pattern.size();
  if (IsWordChar(pattern.back()) && end < text.size() && IsWordChar(text[end])) return false;
  return true;
}

bool MatchesAnywhere(std::u32string_view text, std::u32string_view pattern) {
  for (size_t pos = text.find(pattern); pos != std::u32string_view::npos;
       pos = text.find(pattern, pos + 1)) {
    if (MatchesAt(text, pos, pattern)) return true;
  }
  return false;
}

size_t CeilFraction(double fraction, size_t n) {
  // Guards against 0.25 * n landing a hair above an integer.
  const double raw = fraction * static_cast<double>(n);
  const double rounded = std::round(raw);
  if (std::fabs(raw - rounded) < 1e-9) return static_cast<size_t>(rounded);
  return static_cast<size_t>(std::ceil(raw));
}

}  // namespace

std::string_view ToString(RuleFamily family) {
  switch (family) {
    case RuleFamily::kQmark:
      return "qmark";
    case RuleFamily::kInitialPattern:
      return "initial_pattern";
    case RuleFamily::kVerbPattern:
      return "verb_pattern";
    case RuleFamily::kNounPattern:
      return "noun_pattern";
  }
  return "";
}

RuleFamily ParseRuleFamily(std::string_view name) {
  for (RuleFamily f : {RuleFamily::kQmark, RuleFamily::kInitialPattern,
                       RuleFamily::kVerbPattern, RuleFamily::kNounPattern}) {
    if (name == ToString(f)) return f;
  }
  throw DataError("unknown rule family: " + std::string(name));
}

RuleSet RuleSet::Parse(std::string_view text) {
  RuleSet rules;
  std::vector<std::string> *section = nullptr;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (raw.rfind("#! version", 0) == 0) {
      rules.version = std::stoi(raw.substr(10));
      continue;
    }
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    const std::string line = utf8::Trim(raw);
    if (line.empty()) continue;
    if (line == "[initial]") {
      section = &rules.initial;
    } else if (line == "[verb]") {
      section = &rules.verb;
    } else if (line == "[noun]") {
      section = &rules.noun;
    } else if (line.front() == '[') {
      throw DataError("rule file line " + std::to_string(line_no) +
                      ": unknown section " + line);
    } else if (section == nullptr) {
      throw DataError("rule file line " + std::to_string(line_no) +
                      ": pattern outside a section");
    } else {
      section->push_back(line);
    }
  }
  return rules;
}

RuleSet RuleSet::Load(const std::string &path) { return Parse(ReadFile(path)); }

RuleSet RuleSet::Default() {
  return Load(std::string(QSTANCE_ASSET_DIR) + "/rules/candidates.rules");
}

Json CandidateRecord::ToJson() const {
  Json rules = Json::array();
  for (RuleFamily f : matched_rules) rules.push_back(std::string(ToString(f)));
  return Json{{"article_id", article_id},
              {"sent_id", sent_id},
              {"is_candidate", is_candidate},
              {"matched_rules", rules},
              {"calibration_pick", calibration_pick}};
}

CandidateRecord CandidateRecord::FromJson(const Json &j) {
  CandidateRecord r;
  try {
    r.article_id = j.at("article_id").get<std::string>();
    r.sent_id = j.at("sent_id").get<int>();
    r.is_candidate = j.at("is_candidate").get<bool>();
    for (const auto &name : j.at("matched_rules")) {
      r.matched_rules.insert(ParseRuleFamily(name.get<std::string>()));
    }
    r.calibration_pick = j.value("calibration_pick", false);
  } catch (const Json::exception &e) {
    throw DataError(std::string("malformed candidate record: ") + e.what());
  }
  if (r.is_candidate != !r.matched_rules.empty()) {
    throw DataError("candidate flag disagrees with matched_rules for " + r.article_id);
  }
  return r;
}

CandidateDetector::CandidateDetector(const RuleSet &rules, Options options)
    : options_(options),
      initial_(Normalize(rules.initial)),
      verb_(Normalize(rules.verb)),
      noun_(Normalize(rules.noun)) {}

std::vector<std::u32string> CandidateDetector::Normalize(
    const std::vector<std::string> &patterns) const {
  std::vector<std::u32string> out;
  for (const auto &p : patterns) {
    auto normalized = utf8::NormalizeForMatch(utf8::Decode(p), options_.fold_accents);
    if (!normalized.empty()) out.push_back(std::move(normalized));
  }
  return out;
}

std::set<RuleFamily> CandidateDetector::Match(std::string_view sentence) const {
  std::set<RuleFamily> rules;
  if (sentence.find('?') != std::string_view::npos) rules.insert(RuleFamily::kQmark);

  const std::u32string text =
      utf8::NormalizeForMatch(utf8::Decode(sentence), options_.fold_accents);
  size_t head = 0;
  while (head < text.size() && IsLeadingNoise(text[head])) ++head;
  for (const auto &p : initial_) {
    if (MatchesAt(text, head, p)) {
      rules.insert(RuleFamily::kInitialPattern);
      break;
    }
  }
  for (const auto &p : verb_) {
    if (MatchesAnywhere(text, p)) {
      rules.insert(RuleFamily::kVerbPattern);
      break;
    }
  }
  for (const auto &p : noun_) {
    if (MatchesAnywhere(text, p)) {
      rules.insert(RuleFamily::kNounPattern);
      break;
    }
  }
  return rules;
}

CandidateRecord CandidateDetector::Detect(const corpus::SentenceRecord &sentence) const {
  CandidateRecord r;
  r.article_id = sentence.article_id;
  r.sent_id = sentence.sent_id;
  r.matched_rules = Match(sentence.text);
  r.is_candidate = !r.matched_rules.empty();
  return r;
}

std::set<corpus::SentenceKey> CalibrationSample(
    std::vector<corpus::SentenceKey> non_candidates, size_t n_candidates,
    uint64_t seed, double fraction) {
  std::sort(non_candidates.begin(), non_candidates.end());
  non_candidates.erase(std::unique(non_candidates.begin(), non_candidates.end()),
                       non_candidates.end());
  const size_t k = std::min(CeilFraction(fraction, n_candidates), non_candidates.size());
  SeededRng rng(seed);
  std::set<corpus::SentenceKey> picked;
  for (size_t index : rng.SampleIndices(non_candidates.size(), k)) {
    picked.insert(non_candidates[index]);
  }
  return picked;
}

std::set<corpus::SentenceKey> CalibrationSamplePerSource(
    const std::map<std::string, SourcePool> &pools, uint64_t seed, double fraction) {
  std::set<corpus::SentenceKey> picked;
  for (const auto &[source, pool] : pools) {
    const uint64_t source_seed = Mix64(seed ^ Fnv1a64(source));
    auto part = CalibrationSample(pool.non_candidates, pool.n_candidates, source_seed,
                                  fraction);
    picked.insert(part.begin(), part.end());
  }
  return picked;
}

}  // namespace qstance::candidates
