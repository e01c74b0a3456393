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

// Deterministic rule-based sentence segmenter for French news prose.
//
// A boundary is placed after a run of terminal punctuation (. ! ? … and
// "..."), together with any closing quotes or brackets that follow it, when
// the next non-space character opens a new sentence: an uppercase letter, a
// digit, an opening quote or a dialogue dash. A lowercase continuation keeps
// the sentence open, which is what makes « Pourquoi ? » a-t-il demandé stay
// in one piece. A single period after a known abbreviation (M., Mme, av.)
// or after a lone capital initial never ends a sentence. Line breaks always
// end a sentence, so headlines on their own line are separated.

#ifndef QSTANCE_CORPUS_SEGMENTER_H_
#define QSTANCE_CORPUS_SEGMENTER_H_

#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "qstance/corpus/types.h"

namespace qstance::corpus {

struct TextSpan {
  size_t start = 0;  // code points
  size_t end = 0;
};

class Segmenter {
 public:
  struct Options {
    std::set<std::u32string> abbreviations;
    bool split_on_newline = true;
  };

  // Uses the built-in French abbreviation list.
  Segmenter();
  explicit Segmenter(Options options);

  static std::set<std::u32string> DefaultAbbreviations();

  // Sentence spans over `text`, trimmed, never empty. A whitespace-only
  // text yields no spans.
  std::vector<TextSpan> Split(std::string_view text) const;

  // Always yields at least one sentence for a valid article.
  std::vector<SentenceRecord> Segment(const ArticleRecord &article) const;

 private:
  bool IsGuardedPeriod(const std::u32string &text, size_t dot) const;

  Options options_;
};

}  // namespace qstance::corpus

#endif  // QSTANCE_CORPUS_SEGMENTER_H_
