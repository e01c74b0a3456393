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

#include "qstance/answers/quotes.h"

#include <algorithm>
#include <sstream>

#include "qstance/util/errors.h"
#include "qstance/util/io.h"
#include "qstance/util/utf8.h"

namespace qstance::answers {

namespace {

char32_t SingleChar(const std::string &token, int line_no) {
  const std::u32string decoded = utf8::Decode(token);
  if (decoded.size() != 1) {
    throw DataError("quote marker line " + std::to_string(line_no) +
                    ": expected a single character, got '" + token + "'");
  }
  return decoded[0];
}

}  // namespace

QuoteMarkers QuoteMarkers::Parse(std::string_view text) {
  QuoteMarkers markers;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string trimmed = utf8::Trim(line);
    if (trimmed.empty() || trimmed[0] == '#') continue;
    std::istringstream fields(trimmed);
    std::string kind, a, b;
    fields >> kind >> a >> b;
    if (kind == "char" && !a.empty()) {
      markers.chars_.push_back(SingleChar(a, line_no));
    } else if (kind == "pair" && !b.empty()) {
      markers.pairs_.push_back({SingleChar(a, line_no), SingleChar(b, line_no)});
    } else if (kind == "line-initial" && !a.empty()) {
      markers.line_initial_.push_back(SingleChar(a, line_no));
    } else {
      throw DataError("quote marker line " + std::to_string(line_no) + ": cannot parse '" +
                      trimmed + "'");
    }
  }
  return markers;
}

QuoteMarkers QuoteMarkers::Load(const std::string &path) { return Parse(ReadFile(path)); }

QuoteMarkers QuoteMarkers::Default() {
  static const QuoteMarkers markers =
      Load(std::string(QSTANCE_ASSET_DIR) + "/quotes/markers.txt");
  return markers;
}

bool QuoteMarkers::Detect(std::string_view sentence) const {
  const std::u32string text = utf8::Decode(sentence);
  for (char32_t c : text) {
    if (std::find(chars_.begin(), chars_.end(), c) != chars_.end()) return true;
  }
  for (const auto &[open, close] : pairs_) {
    const size_t a = text.find(open);
    if (a != std::u32string::npos && text.find(close, a + 1) != std::u32string::npos) return true;
  }
  size_t head = 0;
  while (head < text.size() && utf8::IsSpace(text[head])) ++head;
  if (head < text.size() &&
      std::find(line_initial_.begin(), line_initial_.end(), text[head]) != line_initial_.end()) {
    return true;
  }
  return false;
}

}  // namespace qstance::answers
