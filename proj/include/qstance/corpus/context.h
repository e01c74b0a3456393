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

#ifndef QSTANCE_CORPUS_CONTEXT_H_
#define QSTANCE_CORPUS_CONTEXT_H_

#include <span>
#include <string>
#include <string_view>

#include "qstance/corpus/types.h"

namespace qstance::corpus {

inline constexpr std::string_view kTargetOpen = "<tgt>";
inline constexpr std::string_view kTargetClose = "</tgt>";
inline constexpr std::string_view kSentenceDelimiter = " </s> ";

// Radius used for classifier inputs and for embedding inputs.
inline constexpr int kClassificationRadius = 3;
inline constexpr int kEmbeddingRadius = 1;

// Joins up to `radius` sentences on each side of `sent_id` (same article
// only, clamped at the article edges) and wraps the target in <tgt> markers:
//   "S1 </s> <tgt>S2</tgt> </s> S3"
// `sentences` must be one article in sent_id order. Throws DataError for an
// unknown sent_id.
ContextWindow BuildContext(std::span<const SentenceRecord> sentences, int sent_id,
                           int radius);

// Returns the text between the markers, or the whole input if none.
std::string ExtractTarget(std::string_view context_text);

}  // namespace qstance::corpus

#endif  // QSTANCE_CORPUS_CONTEXT_H_
