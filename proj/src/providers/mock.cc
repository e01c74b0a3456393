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

#include "qstance/providers/mock.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <string_view>
#include <utility>

#include "qstance/candidates/candidates.h"
#include "qstance/corpus/context.h"
#include "qstance/util/errors.h"
#include "qstance/util/random.h"
#include "qstance/util/utf8.h"

namespace qstance::providers {

namespace {

const candidates::CandidateDetector &Detector() {
  static const candidates::CandidateDetector detector(candidates::RuleSet::Default());
  return detector;
}

// Hash of a text under a purpose-specific salt, as a uniform in [0, 1).
double Draw(std::string_view text, std::string_view salt) {
  return UnitInterval(Mix64(Fnv1a64(text, Fnv1a64(salt))));
}

std::string Lowered(std::string_view text) {
  return utf8::Encode(utf8::NormalizeForMatch(utf8::Decode(text), false));
}

bool StartsWith(std::string_view text, std::string_view prefix) {
  return text.substr(0, prefix.size()) == prefix;
}

// Strips trailing spaces and terminal punctuation.
std::string_view StripTail(std::string_view text) {
  while (!text.empty()) {
    const char c = text.back();
    if (c == ' ' || c == '?' || c == '!' || c == '.' || c == '"') {
      text.remove_suffix(1);
    } else if (text.size() >= 2 && (text.substr(text.size() - 2) == "\xC2\xBB")) {
      text.remove_suffix(2);  // »
    } else {
      break;
    }
  }
  return text;
}

size_t WordCount(std::string_view text) {
  size_t words = 0;
  bool in_word = false;
  for (char32_t c : utf8::Decode(text)) {
    const bool w = utf8::IsLetter(c) || utf8::IsDigit(c);
    if (w && !in_word) ++words;
    in_word = w;
  }
  return words;
}

std::string_view StanceCue(std::string_view lowered) {
  // Skip opening quotes and dashes.
  while (!lowered.empty() && (lowered.front() == ' ' || lowered.front() == '-' ||
                              lowered.front() == '"')) {
    lowered.remove_prefix(1);
  }
  for (std::string_view opener : {"\xC2\xAB ", "\xC2\xAB", "\xE2\x80\x94 "}) {
    if (StartsWith(lowered, opener)) lowered.remove_prefix(opener.size());
  }
  const std::string_view tail = StripTail(lowered);
  for (std::string_view tag : {"n'est-ce pas", ", non", ", hein", ", pas vrai", ", d'accord"}) {
    if (tail.size() >= tag.size() && tail.substr(tail.size() - tag.size()) == tag) return "tag";
  }
  if (WordCount(lowered) <= 3) return "echo-clarification";
  for (std::string_view p : {"n'est-il pas", "n'est-elle pas", "ne faut-il pas", "ne serait-il pas",
                             "ne devrait-on pas", "ne faudrait-il pas", "n'y a-t-il pas",
                             "n'était-ce pas", "ne vaudrait-il pas"}) {
    if (StartsWith(lowered, p)) return "leading";
  }
  for (std::string_view p : {"comment ne pas", "qui peut", "qui pourrait", "à quoi bon",
                             "faut-il vraiment", "qui oserait", "comment croire"}) {
    if (StartsWith(lowered, p)) return "rhetorical";
  }
  if (lowered.find("vraiment") != std::string_view::npos) return "rhetorical";
  for (std::string_view p : {"qui ", "quand", "où", "combien", "quel", "pourquoi", "comment",
                             "qu'est-ce", "que ", "qu'", "est-ce qu"}) {
    if (StartsWith(lowered, p)) return "information-seeking";
  }
  return "framing-procedural";
}

double TeacherScale(double u, double p50, double p80) {
  if (u < p50) return 0.5;
  if (u < p80) return 0.8;
  return 0.95;
}

constexpr std::string_view kStopwords[] = {
    "les", "des", "une", "est", "pas", "que", "qui", "pour", "dans", "par", "sur", "avec",
    "son", "ses", "sont", "mais", "plus", "leur", "leurs", "aux", "cette", "ces", "ont",
    "été", "elle", "ils", "elles", "nous", "vous", "tout", "fait", "comme", "aussi", "entre",
    "être", "avoir", "sans", "sous", "dont", "même", "très", "bien", "peut", "encore", "tgt"};

bool IsStopword(std::string_view token) {
  return std::find(std::begin(kStopwords), std::end(kStopwords), token) != std::end(kStopwords);
}

void AddTokens(std::u32string_view text, double weight, int dim, std::vector<double> &v) {
  std::u32string token;
  auto flush = [&] {
    if (token.size() >= 3) {
      const std::string t = utf8::Encode(token);
      if (!IsStopword(t)) {
        // Fold accents for the bucket so "elections"/"élections" collide.
        std::u32string folded;
        for (char32_t c : token) folded.push_back(utf8::FoldAccent(c));
        const uint64_t h = Mix64(Fnv1a64(utf8::Encode(folded)));
        const size_t index = static_cast<size_t>(h % static_cast<uint64_t>(dim));
        v[index] += ((h >> 63) != 0U ? -weight : weight);
      }
    }
    token.clear();
  };
  for (char32_t c : text) {
    if (utf8::IsLetter(c) || utf8::IsDigit(c)) {
      token.push_back(utf8::ToLower(c));
    } else {
      flush();
    }
  }
  flush();
}

struct GazetteerEntry {
  std::u32string surface;
  std::string label;
};

const std::vector<GazetteerEntry> &Gazetteer() {
  static const std::vector<GazetteerEntry> entries = [] {
    const std::vector<std::pair<std::string, std::vector<std::string>>> raw = {
        {"person",
         {"emmanuel macron", "macron", "donald trump", "trump", "justin trudeau", "marine le pen",
          "kylian mbappé", "mbappé", "alain berset", "viola amherd", "gabriel attal",
          "vladimir poutine", "poutine", "volodymyr zelensky", "zelensky", "françois legault"}},
        {"organization",
         {"union européenne", "commission européenne", "onu", "otan", "conseil fédéral",
          "conseil d'état", "assemblée nationale", "sénat", "banque nationale suisse", "bns",
          "psg", "fc sion", "cff", "sncf", "hydro-québec", "ofs", "servette fc"}},
        {"location",
         {"paris", "genève", "lausanne", "sion", "valais", "québec", "montréal", "canada",
          "france", "suisse", "belgique", "bruxelles", "sénégal", "dakar", "ukraine", "russie",
          "gaza", "israël", "neuchâtel", "fribourg", "marseille", "lyon", "toulouse",
          "washington", "europe"}},
        {"nationality or religious or political group",
         {"français", "suisses", "belges", "québécois", "musulmans", "catholiques", "socialistes",
          "écologistes", "républicains", "sénégalais"}},
        {"generic social group",
         {"agriculteurs", "habitants", "riverains", "familles", "jeunes", "retraités",
          "médecins", "enseignants", "élèves", "commerçants", "salariés", "patients",
          "locataires", "parents"}},
        {"public or audience",
         {"le public", "les lecteurs", "les téléspectateurs", "les spectateurs", "les citoyens",
          "les contribuables", "les électeurs", "les supporters", "les fans", "les auditeurs"}},
        {"event",
         {"jeux olympiques", "coupe du monde", "ligue des champions", "élection présidentielle",
          "élections", "votation", "festival", "sommet", "cop28", "tour de france"}},
    };
    std::vector<GazetteerEntry> out;
    for (const auto &[label, surfaces] : raw) {
      for (const auto &s : surfaces) out.push_back({utf8::Decode(s), label});
    }
    // Longest surface first so "emmanuel macron" wins over "macron".
    std::stable_sort(out.begin(), out.end(), [](const auto &a, const auto &b) {
      return a.surface.size() > b.surface.size();
    });
    return out;
  }();
  return entries;
}

bool IsWordChar(char32_t c) { return utf8::IsLetter(c) || utf8::IsDigit(c); }

// Lowercases one code point at a time, keeping offsets aligned.
std::u32string LowerAligned(std::u32string_view text) {
  std::u32string out(text);
  for (char32_t &c : out) {
    c = utf8::ToLower(c);
    if (c == 0x2019 || c == 0x2018 || c == 0x02BC) c = U'\'';
  }
  return out;
}

}  // namespace

Json MockTransport::Post(const std::string &endpoint, const Json &body) {
  try {
    if (endpoint == kBinaryEndpoint || endpoint == kStanceEndpoint) {
      const bool binary = endpoint == kBinaryEndpoint;
      Json results = Json::array();
      for (const auto &item : body.at("items")) {
        const std::string text = item.at("context_text").get<std::string>();
        results.push_back(binary ? LabelBinary(text) : LabelStance(text));
      }
      return Json{{"results", results}};
    }
    if (endpoint == kEmbedEndpoint) {
      Json vectors = Json::array();
      for (const auto &text : body.at("texts")) vectors.push_back(Embed(text.get<std::string>()));
      return Json{{"dim", embedding_dim_}, {"vectors", vectors}};
    }
    if (endpoint == kNerEndpoint) {
      Json results = Json::array();
      for (const auto &item : body.at("items")) {
        results.push_back(Ner(item.at("text").get<std::string>(),
                              item.at("labels").get<std::vector<std::string>>()));
      }
      return Json{{"results", results}};
    }
  } catch (const Json::exception &e) {
    throw ProviderError(std::string("mock provider: malformed request: ") + e.what());
  }
  throw ProviderError("mock provider: unknown endpoint " + endpoint);
}

Json MockTransport::LabelBinary(const std::string &context_text) const {
  const std::string target = corpus::ExtractTarget(context_text);
  const auto rules = Detector().Match(target);
  const bool teacher = flavor_ == MockFlavor::kTeacher;
  const std::string salt = teacher ? "teacher-binary" : "student-binary";
  const double u = Draw(target, salt);
  const double u2 = Draw(target, salt + "/2");
  bool label = false;
  double confidence = 0.0;
  if (rules.count(candidates::RuleFamily::kQmark) != 0) {
    label = true;
    if (teacher) {
      confidence = u < 0.8 ? 0.95 : 0.8;
    } else {
      confidence = u < 0.08 ? 0.55 + 0.1 * u2 : 0.72 + 0.27 * u2;
    }
  } else if (!rules.empty()) {
    label = u < 0.55;
    confidence = teacher ? TeacherScale(u2, 0.3, 0.7) : 0.5 + 0.45 * u2;
  } else {
    label = false;
    confidence = teacher ? (u < 0.9 ? 0.95 : 0.8) : 0.8 + 0.19 * u2;
  }
  return Json{{"is_interrogative", label}, {"confidence", confidence}};
}

Json MockTransport::LabelStance(const std::string &context_text) const {
  const std::string target = corpus::ExtractTarget(context_text);
  const std::string lowered = Lowered(target);
  const bool teacher = flavor_ == MockFlavor::kTeacher;
  const double u = Draw(target, teacher ? "teacher-stance" : "student-stance");
  const double confidence = teacher ? TeacherScale(u, 0.1, 0.45) : 0.55 + 0.44 * u;
  return Json{{"label", std::string(StanceCue(lowered))}, {"confidence", confidence}};
}

std::vector<double> MockTransport::Embed(const std::string &text) const {
  const int dim = embedding_dim_;
  std::vector<double> v(static_cast<size_t>(dim), 0.0);
  const std::u32string all = utf8::Decode(text);
  const std::u32string open = utf8::Decode(corpus::kTargetOpen);
  const std::u32string close = utf8::Decode(corpus::kTargetClose);
  const size_t a = all.find(open);
  const size_t b = a == std::u32string::npos ? std::u32string::npos : all.find(close, a);
  if (a == std::u32string::npos || b == std::u32string::npos) {
    AddTokens(all, 1.0, dim, v);
  } else {
    const std::u32string_view view(all);
    AddTokens(view.substr(0, a), 0.15, dim, v);
    AddTokens(view.substr(a + open.size(), b - a - open.size()), 1.0, dim, v);
    AddTokens(view.substr(b + close.size()), 0.15, dim, v);
  }
  // Small jitter keeps token-free texts away from the zero vector.
  SeededRng rng(Fnv1a64(text, Fnv1a64("embed-jitter")));
  for (double &x : v) x += 0.05 * (rng.UniformUnit() - 0.5);
  double norm = 0.0;
  for (double x : v) norm += x * x;
  norm = std::sqrt(norm);
  for (double &x : v) x /= norm;
  return v;
}

Json MockTransport::Ner(const std::string &text, const std::vector<std::string> &labels) const {
  const std::set<std::string> wanted(labels.begin(), labels.end());
  const std::u32string original = utf8::Decode(text);
  const std::u32string lower = LowerAligned(original);
  std::vector<bool> taken(lower.size(), false);
  struct Hit {
    size_t start;
    size_t end;
    std::string label;
    double score;
  };
  std::vector<Hit> hits;
  auto free_range = [&](size_t s, size_t e) {
    for (size_t i = s; i < e; ++i) {
      if (taken[i]) return false;
    }
    return true;
  };
  auto add_hit = [&](size_t s, size_t e, const std::string &label, double score) {
    for (size_t i = s; i < e; ++i) taken[i] = true;
    if (wanted.count(label) != 0) hits.push_back({s, e, label, score});
  };

  for (const auto &entry : Gazetteer()) {
    const size_t n = entry.surface.size();
    for (size_t pos = lower.find(entry.surface); pos != std::u32string::npos;
         pos = lower.find(entry.surface, pos + 1)) {
      if (pos > 0 && IsWordChar(lower[pos - 1])) continue;
      if (pos + n < lower.size() && IsWordChar(lower[pos + n])) continue;
      if (!free_range(pos, pos + n)) continue;
      const std::string surface = utf8::Encode(original.substr(pos, n));
      add_hit(pos, pos + n, entry.label, 0.55 + 0.44 * Draw(surface + "|" + text, "ner"));
    }
  }

  // Runs of two or more capitalized words outside the gazetteer: guessed
  // persons with a wide score range, so some fall below any threshold.
  size_t i = 0;
  while (i < original.size()) {
    if (!utf8::IsUpper(original[i]) || (i > 0 && IsWordChar(original[i - 1]))) {
      ++i;
      continue;
    }
    size_t run_start = i;
    size_t run_end = i;
    int words = 0;
    size_t j = i;
    while (j < original.size() && utf8::IsUpper(original[j])) {
      size_t k = j;
      while (k < original.size() && (IsWordChar(original[k]) || original[k] == U'-')) ++k;
      if (k - j < 2) break;
      run_end = k;
      ++words;
      if (k < original.size() && original[k] == U' ' && k + 1 < original.size() &&
          utf8::IsUpper(original[k + 1])) {
        j = k + 1;
      } else {
        break;
      }
    }
    // Sentence-initial capitals are not evidence of a name.
    size_t p = run_start;
    while (p > 0 && original[p - 1] == U' ') --p;
    const bool sentence_initial =
        p == 0 || original[p - 1] == U'.' || original[p - 1] == U'?' || original[p - 1] == U'!' ||
        original[p - 1] == 0x00AB || original[p - 1] == U'"' || original[p - 1] == U'>';
    if (words >= 2 && !sentence_initial && free_range(run_start, run_end)) {
      const std::string surface = utf8::Encode(original.substr(run_start, run_end - run_start));
      add_hit(run_start, run_end, "person", 0.3 + 0.65 * Draw(surface + "|" + text, "ner-cap"));
    }
    i = std::max(run_end, i + 1);
  }

  std::sort(hits.begin(), hits.end(),
            [](const Hit &a, const Hit &b) { return a.start < b.start; });
  Json out = Json::array();
  for (const auto &h : hits) {
    out.push_back(Json{{"text", utf8::Encode(original.substr(h.start, h.end - h.start))},
                       {"label", h.label},
                       {"score", h.score},
                       {"start", h.start},
                       {"end", h.end}});
  }
  return out;
}

}  // namespace qstance::providers
