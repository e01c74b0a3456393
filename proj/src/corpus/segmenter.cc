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

#include "qstance/corpus/segmenter.h"

#include "qstance/util/utf8.h"

namespace qstance::corpus {

namespace {

bool IsTerminal(char32_t c) {
  return c == U'.' || c == U'!' || c == U'?' || c == 0x2026;  // …
}

bool IsCloser(char32_t c) {
  switch (c) {
    case 0x00BB:  // »
    case 0x201D:  // ”
    case 0x2019:  // ’
    case U'"':
    case U'\'':
    case U')':
    case U']':
      return true;
    default:
      return false;
  }
}

bool IsOpener(char32_t c) {
  switch (c) {
    case 0x00AB:  // «
    case 0x201C:  // “
    case 0x2018:  // ‘
    case U'"':
    case U'\'':
    case U'(':
    case U'[':
    case 0x2014:  // —
    case 0x2013:  // –
    case U'-':
    case 0x00BF:  // ¿
    case 0x00A1:  // ¡
      return true;
    default:
      return false;
  }
}

bool IsLineBreak(char32_t c) {
  return c == U'\n' || c == U'\r' || c == 0x2028 || c == 0x2029;
}

}  // namespace

std::set<std::u32string> Segmenter::DefaultAbbreviations() {
  return {U"M",   U"MM",  U"Mme", U"Mmes", U"Mlle", U"Mlles", U"Dr",  U"Drs",
          U"Pr",  U"Me",  U"Mgr", U"St",   U"Ste",  U"Sts",   U"av",  U"apr",
          U"cf",  U"p",   U"pp",  U"ex",   U"al",   U"env",   U"art", U"vol",
          U"chap", U"fig", U"tél", U"n°",  U"no",   U"Cie",   U"cie", U"éd",
          U"coll", U"hab", U"réf", U"dép", U"ch",   U"resp",  U"ibid", U"op",
          U"cit", U"min", U"sq",  U"Jr",   U"Sr",   U"Gén",   U"Col", U"Cdt",
          U"Lt",  U"Sgt", U"Mgrs"};
}

Segmenter::Segmenter() : Segmenter(Options{DefaultAbbreviations(), true}) {}

Segmenter::Segmenter(Options options) : options_(std::move(options)) {}

bool Segmenter::IsGuardedPeriod(const std::u32string &text, size_t dot) const {
  size_t b = dot;
  while (b > 0 && (utf8::IsLetter(text[b - 1]) || text[b - 1] == 0x00B0)) --b;
  if (b == dot) return false;
  const std::u32string token = text.substr(b, dot - b);
  if (token.size() == 1 && utf8::IsUpper(token[0])) return true;  // initial
  return options_.abbreviations.count(token) > 0;
}

std::vector<TextSpan> Segmenter::Split(std::string_view utf8_text) const {
  const std::u32string text = utf8::Decode(utf8_text);
  const size_t n = text.size();
  std::vector<TextSpan> spans;

  auto emit = [&](size_t begin, size_t end) {
    while (begin < end && utf8::IsSpace(text[begin])) ++begin;
    while (end > begin && utf8::IsSpace(text[end - 1])) --end;
    if (begin < end) spans.push_back({begin, end});
  };

  size_t start = 0;
  size_t i = 0;
  while (i < n) {
    const char32_t c = text[i];
    if (options_.split_on_newline && IsLineBreak(c)) {
      emit(start, i);
      start = ++i;
      continue;
    }
    if (!IsTerminal(c)) {
      ++i;
      continue;
    }

    // Terminal cluster, e.g. "?!", "...", "…".
    size_t j = i;
    while (j < n && IsTerminal(text[j])) ++j;
    const bool single_period = (j - i == 1) && c == U'.';

    // Closing quotes and brackets, allowing French spacing before them.
    size_t k = j;
    for (;;) {
      size_t m = k;
      while (m < n && utf8::IsSpace(text[m]) && !IsLineBreak(text[m])) ++m;
      if (m < n && IsCloser(text[m]) && !IsOpener(text[m])) {
        k = m + 1;
        continue;
      }
      // Straight quotes are ambiguous: treat one as closing only when it is
      // glued to the punctuation and followed by space or end of text.
      if (m == k && m < n && (text[m] == U'"' || text[m] == U'\'') &&
          (m + 1 == n || utf8::IsSpace(text[m + 1]))) {
        k = m + 1;
        continue;
      }
      break;
    }

    size_t next = k;
    while (next < n && utf8::IsSpace(text[next]) && !IsLineBreak(text[next])) ++next;

    bool boundary = false;
    if (next >= n || IsLineBreak(text[next])) {
      boundary = true;
    } else if (next > k) {
      const char32_t follower = text[next];
      boundary = utf8::IsUpper(follower) || utf8::IsDigit(follower) ||
                 IsOpener(follower);
    }
    if (boundary && single_period && IsGuardedPeriod(text, i)) boundary = false;

    if (boundary) {
      emit(start, k);
      start = k;
    }
    i = k > i ? k : i + 1;
  }
  emit(start, n);
  return spans;
}

std::vector<SentenceRecord> Segmenter::Segment(const ArticleRecord &article) const {
  const std::u32string text = utf8::Decode(article.text);
  std::vector<SentenceRecord> out;
  for (const TextSpan &span : Split(article.text)) {
    SentenceRecord s;
    s.article_id = article.article_id;
    s.sent_id = static_cast<int>(out.size());
    s.text = utf8::Encode(std::u32string_view(text).substr(span.start, span.end - span.start));
    s.start = span.start;
    s.end = span.end;
    out.push_back(std::move(s));
  }
  if (out.empty()) {
    // Ingestion rejects blank texts, so this only guards direct callers.
    SentenceRecord s;
    s.article_id = article.article_id;
    s.text = article.text;
    s.end = text.size();
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace qstance::corpus
