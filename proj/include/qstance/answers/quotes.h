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

// Direct-speech marker detection, driven by a small marker list (see
// assets/quotes/markers.txt).

#ifndef QSTANCE_ANSWERS_QUOTES_H_
#define QSTANCE_ANSWERS_QUOTES_H_

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace qstance::answers {

class QuoteMarkers {
 public:
  static QuoteMarkers Parse(std::string_view text);
  static QuoteMarkers Load(const std::string &path);
  static QuoteMarkers Default();

  // True iff `sentence` contains any configured marker. Line-initial
  // markers are checked at the start of the text (after whitespace).
  bool Detect(std::string_view sentence) const;

 private:
  std::vector<char32_t> chars_;
  std::vector<std::pair<char32_t, char32_t>> pairs_;
  std::vector<char32_t> line_initial_;
};

}  // namespace qstance::answers

#endif  // QSTANCE_ANSWERS_QUOTES_H_
