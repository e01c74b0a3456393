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

#include "qstance/corpus/context.h"

#include <algorithm>

#include "qstance/util/errors.h"

namespace qstance::corpus {

ContextWindow BuildContext(std::span<const SentenceRecord> sentences, int sent_id,
                           int radius) {
  if (radius < 0) throw DataError("context radius must be >= 0");
  const int n = static_cast<int>(sentences.size());
  if (sent_id < 0 || sent_id >= n || sentences[sent_id].sent_id != sent_id) {
    const std::string article = sentences.empty() ? "" : sentences.front().article_id;
    throw DataError("unknown sent_id " + std::to_string(sent_id) + " in article " +
                    article);
  }
  const int first = std::max(0, sent_id - radius);
  const int last = std::min(n - 1, sent_id + radius);

  ContextWindow window;
  window.article_id = sentences[sent_id].article_id;
  window.sent_id = sent_id;
  window.radius = radius;
  for (int i = first; i <= last; ++i) {
    if (i > first) window.context_text += kSentenceDelimiter;
    if (i == sent_id) {
      window.context_text += kTargetOpen;
      window.context_text += sentences[i].text;
      window.context_text += kTargetClose;
    } else {
      window.context_text += sentences[i].text;
    }
  }
  return window;
}

std::string ExtractTarget(std::string_view context_text) {
  const size_t open = context_text.find(kTargetOpen);
  if (open == std::string_view::npos) return std::string(context_text);
  const size_t begin = open + kTargetOpen.size();
  const size_t close = context_text.find(kTargetClose, begin);
  if (close == std::string_view::npos) return std::string(context_text.substr(begin));
  return std::string(context_text.substr(begin, close - begin));
}

}  // namespace qstance::corpus
