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

#ifndef VAPEVAL_ALIGNMENT_H_
#define VAPEVAL_ALIGNMENT_H_

// Word-level forced alignment of a statement + question turn.
//
// JSON form:
//   { "words": [{"w": "Yes", "on": 0.10, "off": 0.32}, ...],
//     "statement_end": 1.21, "question_start": 1.61, "question_end": 3.40 }
//
// statement_end and question_start may be omitted, in which case they are
// derived from the first word whose text ends in '.', ',' or '!' (the last
// word of the statement).

#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace vapeval {

struct AlignedWord {
  std::string word;
  double onset = 0.0;
  double offset = 0.0;

  bool operator==(const AlignedWord&) const = default;
};

// Times of the three turn boundaries, in seconds.
struct TurnMarkers {
  double statement_end = 0.0;
  double question_start = 0.0;
  double question_end = 0.0;
};

class Alignment {
 public:
  // Tolerance when matching markers against word boundaries.
  static constexpr double kMarkerTolerance = 1e-3;

  // Throws ValidationError if the words are empty or non-monotone, or the
  // markers do not line up with a statement/question word boundary.
  Alignment(std::vector<AlignedWord> words, TurnMarkers markers);

  const std::vector<AlignedWord>& words() const { return words_; }
  const TurnMarkers& markers() const { return markers_; }
  double statement_end() const { return markers_.statement_end; }
  double question_start() const { return markers_.question_start; }
  double question_end() const { return markers_.question_end; }

  // Index of the final word of the statement.
  std::size_t last_statement_word() const { return last_statement_word_; }

 private:
  std::vector<AlignedWord> words_;
  TurnMarkers markers_;
  std::size_t last_statement_word_ = 0;
};

// Throws InputError on malformed JSON or missing fields, ValidationError on
// inconsistent timing.
Alignment alignment_from_json(const nlohmann::json& j);
Alignment parse_alignment_text(std::string_view json_text);
Alignment parse_alignment(const std::string& path);

nlohmann::json alignment_to_json(const Alignment& al);
void write_alignment(const Alignment& al, const std::string& path);

// Builds an alignment from the word tier of a Praat TextGrid (long or short
// text format). Empty intervals are treated as silence. statement_words is
// the number of words in the statement sentence; the remaining words form
// the question.
Alignment alignment_from_textgrid(std::string_view textgrid,
                                  std::size_t statement_words,
                                  std::string_view tier_name = "words");

}  // namespace vapeval

#endif  // VAPEVAL_ALIGNMENT_H_
