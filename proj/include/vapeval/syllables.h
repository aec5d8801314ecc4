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

#ifndef VAPEVAL_SYLLABLES_H_
#define VAPEVAL_SYLLABLES_H_

#include <string>
#include <string_view>
#include <unordered_map>

namespace vapeval {

// Word -> syllable count, keyed by lowercase spelling.
class SyllableLexicon {
 public:
  SyllableLexicon() = default;

  // Reads "word<TAB>count" lines; '#' starts a comment line. Throws
  // InputError on unreadable files or malformed lines.
  static SyllableLexicon Load(const std::string& path);
  static SyllableLexicon Parse(std::string_view text);

  // The lexicon shipped in data/syllables.tsv (loaded once).
  static const SyllableLexicon& Bundled();

  void add(std::string word, int syllables);
  // 0 when the word is unknown.
  int lookup(std::string_view word) const;
  std::size_t size() const { return counts_.size(); }

 private:
  std::unordered_map<std::string, int> counts_;
};

// Lowercases and strips surrounding punctuation; keeps inner apostrophes.
std::string normalize_word(std::string_view word);

// Vowel-group heuristic: contiguous runs of a/e/i/o/u/y, minus one for a
// final 'e' that forms its own group (silent 'e') unless it is the only
// group; never less than 1.
int heuristic_syllables(std::string_view normalized_word);

// Lexicon count when known, heuristic otherwise. Throws ValidationError if
// the word is empty or not alphabetic after normalization.
int count_syllables(std::string_view word, const SyllableLexicon& lexicon);

}  // namespace vapeval

#endif  // VAPEVAL_SYLLABLES_H_
