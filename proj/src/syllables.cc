// Copyright 2026 The vapeval Authors.
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

#include "vapeval/syllables.h"

#include <cctype>
#include <charconv>
#include <cstdlib>

#include "vapeval/csv.h"
#include "vapeval/errors.h"

namespace vapeval {

namespace {

bool is_vowel(char c) {
  switch (c) {
    case 'a': case 'e': case 'i': case 'o': case 'u': case 'y':
      return true;
    default:
      return false;
  }
}

}  // namespace

SyllableLexicon SyllableLexicon::Load(const std::string& path) {
  try {
    return Parse(read_file(path));
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
}

SyllableLexicon SyllableLexicon::Parse(std::string_view text) {
  SyllableLexicon lex;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;
    const auto tab = line.find('\t');
    int count = 0;
    if (tab != std::string_view::npos) {
      const auto num = line.substr(tab + 1);
      const auto res = std::from_chars(num.data(), num.data() + num.size(), count);
      if (res.ec != std::errc() || res.ptr != num.data() + num.size()) count = 0;
    }
    if (tab == std::string_view::npos || tab == 0 || count <= 0) {
      throw InputError("lexicon line " + std::to_string(line_no) +
                       " is not 'word<TAB>count'");
    }
    lex.add(normalize_word(line.substr(0, tab)), count);
  }
  return lex;
}

const SyllableLexicon& SyllableLexicon::Bundled() {
  static const SyllableLexicon lex = [] {
    const char* env = std::getenv("VAPEVAL_LEXICON");
    return Load(env ? env : VAPEVAL_DATA_DIR "/syllables.tsv");
  }();
  return lex;
}

void SyllableLexicon::add(std::string word, int syllables) {
  counts_.insert_or_assign(std::move(word), syllables);
}

int SyllableLexicon::lookup(std::string_view word) const {
  const auto it = counts_.find(std::string(word));
  return it == counts_.end() ? 0 : it->second;
}

std::string normalize_word(std::string_view word) {
  std::size_t b = 0, e = word.size();
  while (b < e && !std::isalnum(static_cast<unsigned char>(word[b]))) ++b;
  while (e > b && !std::isalnum(static_cast<unsigned char>(word[e - 1]))) --e;
  std::string out;
  out.reserve(e - b);
  for (std::size_t i = b; i < e; ++i) {
    out += static_cast<char>(std::tolower(static_cast<unsigned char>(word[i])));
  }
  return out;
}

int heuristic_syllables(std::string_view w) {
  int groups = 0;
  bool prev_vowel = false;
  for (char c : w) {
    const bool v = is_vowel(c);
    if (v && !prev_vowel) ++groups;
    prev_vowel = v;
  }
  const std::size_t n = w.size();
  const bool silent_e = n >= 2 && w[n - 1] == 'e' && !is_vowel(w[n - 2]);
  if (silent_e && groups > 1) --groups;
  return groups < 1 ? 1 : groups;
}

int count_syllables(std::string_view word, const SyllableLexicon& lexicon) {
  const auto w = normalize_word(word);
  if (w.empty()) throw ValidationError("cannot count syllables of an empty word");
  for (char c : w) {
    if (!std::isalpha(static_cast<unsigned char>(c)) && c != '\'') {
      throw ValidationError("word '" + std::string(word) +
                            "' is not alphabetic");
    }
  }
  if (const int n = lexicon.lookup(w); n > 0) return n;
  return heuristic_syllables(w);
}

}  // namespace vapeval
