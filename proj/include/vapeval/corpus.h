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

#ifndef VAPEVAL_CORPUS_H_
#define VAPEVAL_CORPUS_H_

// Statement + question extraction from task-oriented dialog corpora, and
// the punctuation permutations used as TTS prompts.
//
// Accepted inputs:
//   * MultiWOZ 2.0/2.1 data.json: {"<id>": {"log": [{"text": ...}, ...]}},
//     turns alternate user/agent starting with the user.
//   * MultiWOZ 2.2 style: [{"dialogue_id": ..., "turns": [{"speaker":
//     "SYSTEM", "utterance": ...}, ...]}, ...]
//   * Either of the above with turns carrying "speaker"/"role" and
//     "text"/"utterance" keys.

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "vapeval/syllables.h"

namespace vapeval {

enum class Role { kUser, kAgent };

struct Turn {
  Role role = Role::kUser;
  std::string text;
};

struct Dialog {
  std::string id;
  std::vector<Turn> turns;
};

// Throws InputError naming source, line and column on malformed JSON, and
// the dialog on structural problems.
std::vector<Dialog> parse_dialogs(std::string_view json_text,
                                  std::string_view source = "<input>");
// A single file, or every *.json file in a directory (sorted by name).
std::vector<Dialog> load_dialogs(const std::string& path);

struct FilterConfig {
  int min_words = 5;     // per sentence
  int min_chars = 50;    // statement + " " + question
  int max_chars = 250;
  bool forbid_commas = true;
  bool forbid_digits = true;
  bool monosyllabic_final_word = true;  // in both sentences

  // Throws ValidationError unless bounds are positive and min < max.
  void validate() const;
};

enum class RejectReason {
  kComma,
  kDigit,
  kMinWords,
  kMinChars,
  kMaxChars,
  kFinalSyllable,
};

std::string_view to_string(RejectReason r);

struct SentencePair {
  std::string dialog_id;
  int turn_index = 0;
  int sentence_index = 0;  // index of the statement within its turn
  std::string statement;   // ends with '.'
  std::string question;    // ends with '?'

  bool operator==(const SentencePair&) const = default;
};

struct Rejection {
  SentencePair pair;
  RejectReason reason;
};

struct ExtractionResult {
  std::vector<SentencePair> pairs;
  std::vector<Rejection> rejections;
};

// Splits on '.', '?' or '!' followed by whitespace or end of text.
std::vector<std::string> split_sentences(std::string_view text);

int count_words(std::string_view sentence);

// First failing rule in declaration order of RejectReason, or nullopt.
std::optional<RejectReason> check_pair(std::string_view statement,
                                       std::string_view question,
                                       const FilterConfig& f,
                                       const SyllableLexicon& lexicon);

// Every adjacent statement/question pair inside an agent turn, classified.
// Output is sorted by (dialog_id, turn_index, sentence_index).
ExtractionResult extract_pairs(std::span<const Dialog> dialogs,
                               const FilterConfig& f,
                               const SyllableLexicon& lexicon);

enum class Condition { kOriginal, kComma, kFiller };

inline constexpr Condition kAllConditions[] = {
    Condition::kOriginal, Condition::kComma, Condition::kFiller};

std::string_view to_string(Condition c);
// "original", "comma" or "filler"; throws ValidationError otherwise.
Condition parse_condition(std::string_view s);

// original: "<statement> <question>"; comma: final '.' -> ','; filler: final
// '.' -> " um,". The question is never altered.
std::string permute(const SentencePair& p, Condition c);

// Columns: dialog_id,turn_index,sentence_index,statement,question,original,
// comma,filler.
void write_manifest_csv(std::span<const SentencePair> pairs, std::ostream& out);
nlohmann::json manifest_to_json(std::span<const SentencePair> pairs);

}  // namespace vapeval

#endif  // VAPEVAL_CORPUS_H_
