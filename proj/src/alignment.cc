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

#include "vapeval/alignment.h"

#include <cctype>
#include <cmath>
#include <optional>
#include <string>
#include <variant>

#include "vapeval/csv.h"
#include "vapeval/errors.h"

namespace vapeval {

namespace {

bool near(double a, double b) {
  return std::abs(a - b) <= Alignment::kMarkerTolerance;
}

bool ends_statement(std::string_view w) {
  return !w.empty() && (w.back() == '.' || w.back() == ',' || w.back() == '!');
}

double require_number(const nlohmann::json& j, const char* key,
                      const std::string& where) {
  if (!j.contains(key)) throw InputError(where + ": missing field '" + key + "'");
  const auto& v = j.at(key);
  if (!v.is_number()) {
    throw InputError(where + ": field '" + key + "' is not a number");
  }
  return v.get<double>();
}

}  // namespace

Alignment::Alignment(std::vector<AlignedWord> words, TurnMarkers markers)
    : words_(std::move(words)), markers_(markers) {
  if (words_.size() < 2) {
    throw ValidationError(
        "alignment needs at least one statement and one question word");
  }
  for (std::size_t i = 0; i < words_.size(); ++i) {
    const auto& w = words_[i];
    if (!std::isfinite(w.onset) || !std::isfinite(w.offset) || w.onset < 0.0) {
      throw ValidationError("word " + std::to_string(i) +
                            " has an invalid timestamp");
    }
    if (w.offset < w.onset) {
      throw ValidationError("word " + std::to_string(i) + " ('" + w.word +
                            "') ends before it starts");
    }
    if (i > 0 && (w.onset < words_[i - 1].onset ||
                  w.offset < words_[i - 1].offset)) {
      throw ValidationError("timestamps decrease at word " + std::to_string(i) +
                            " ('" + w.word + "')");
    }
  }
  const auto& m = markers_;
  if (!(m.statement_end <= m.question_start + kMarkerTolerance) ||
      !(m.question_start < m.question_end)) {
    throw ValidationError(
        "markers must satisfy statement_end <= question_start < question_end");
  }
  if (m.question_end < words_.back().offset - kMarkerTolerance) {
    throw ValidationError("question_end precedes the last aligned word");
  }
  bool found = false;
  for (std::size_t k = 0; k + 1 < words_.size(); ++k) {
    if (near(words_[k].offset, m.statement_end) &&
        near(words_[k + 1].onset, m.question_start)) {
      last_statement_word_ = k;
      found = true;
      break;
    }
  }
  if (!found) {
    throw ValidationError(
        "statement_end/question_start do not match any pair of adjacent word "
        "boundaries");
  }
}

Alignment alignment_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw InputError("alignment must be a JSON object");
  if (!j.contains("words") || !j.at("words").is_array()) {
    throw InputError("alignment: missing 'words' array");
  }
  std::vector<AlignedWord> words;
  std::size_t i = 0;
  for (const auto& entry : j.at("words")) {
    const std::string where = "alignment word " + std::to_string(i++);
    if (!entry.is_object() || !entry.contains("w") || !entry.at("w").is_string()) {
      throw InputError(where + ": missing string field 'w'");
    }
    words.push_back({entry.at("w").get<std::string>(),
                     require_number(entry, "on", where),
                     require_number(entry, "off", where)});
  }
  if (words.empty()) throw ValidationError("alignment has no words");

  TurnMarkers m;
  m.question_end = require_number(j, "question_end", "alignment");
  const bool has_se = j.contains("statement_end");
  const bool has_qs = j.contains("question_start");
  if (has_se && has_qs) {
    m.statement_end = require_number(j, "statement_end", "alignment");
    m.question_start = require_number(j, "question_start", "alignment");
  } else if (has_se || has_qs) {
    throw InputError(
        "alignment: statement_end and question_start must be given together");
  } else {
    std::optional<std::size_t> last;
    for (std::size_t k = 0; k + 1 < words.size(); ++k) {
      if (ends_statement(words[k].word)) {
        last = k;
        break;
      }
    }
    if (!last) {
      throw InputError(
          "alignment: no statement_end given and no word ends the statement");
    }
    m.statement_end = words[*last].offset;
    m.question_start = words[*last + 1].onset;
  }
  return Alignment(std::move(words), m);
}

Alignment parse_alignment_text(std::string_view json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(std::string("alignment JSON: ") + e.what());
  }
  return alignment_from_json(j);
}

Alignment parse_alignment(const std::string& path) {
  try {
    return parse_alignment_text(read_file(path));
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  } catch (const ValidationError& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

nlohmann::json alignment_to_json(const Alignment& al) {
  nlohmann::json words = nlohmann::json::array();
  for (const auto& w : al.words()) {
    words.push_back({{"w", w.word}, {"on", w.onset}, {"off", w.offset}});
  }
  return {{"words", std::move(words)},
          {"statement_end", al.statement_end()},
          {"question_start", al.question_start()},
          {"question_end", al.question_end()}};
}

void write_alignment(const Alignment& al, const std::string& path) {
  write_file(path, alignment_to_json(al).dump(2) + "\n");
}

namespace {

// Token stream of a TextGrid file: quoted strings and numbers, in order.
// Keys ("xmin =", "intervals:") and bracketed indices are skipped, which
// makes the long and short text formats read identically.
using TgToken = std::variant<double, std::string>;

std::vector<TgToken> tokenize_textgrid(std::string_view text) {
  std::vector<TgToken> out;
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (c == '"') {
      std::string s;
      ++i;
      while (true) {
        if (i >= text.size()) throw InputError("TextGrid: unterminated string");
        if (text[i] == '"') {
          if (i + 1 < text.size() && text[i + 1] == '"') {
            s += '"';
            i += 2;
            continue;
          }
          ++i;
          break;
        }
        s += text[i++];
      }
      out.emplace_back(std::move(s));
    } else if (c == '[') {
      while (i < text.size() && text[i] != ']') ++i;
      ++i;
    } else if (c == '!') {  // comment to end of line
      while (i < text.size() && text[i] != '\n') ++i;
    } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '-' ||
               c == '.') {
      std::size_t j = i;
      while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j])))
        ++j;
      const std::string num(text.substr(i, j - i));
      try {
        std::size_t used = 0;
        const double v = std::stod(num, &used);
        if (used != num.size()) throw std::invalid_argument(num);
        out.emplace_back(v);
      } catch (const std::exception&) {
        throw InputError("TextGrid: bad number '" + num + "'");
      }
      i = j;
    } else {
      ++i;
    }
  }
  return out;
}

class TgReader {
 public:
  explicit TgReader(std::vector<TgToken> tokens) : tokens_(std::move(tokens)) {}

  bool done() const { return pos_ >= tokens_.size(); }

  double number() {
    if (done() || !std::holds_alternative<double>(tokens_[pos_])) {
      throw InputError("TextGrid: expected a number at token " +
                       std::to_string(pos_));
    }
    return std::get<double>(tokens_[pos_++]);
  }

  std::string str() {
    if (done() || !std::holds_alternative<std::string>(tokens_[pos_])) {
      throw InputError("TextGrid: expected a string at token " +
                       std::to_string(pos_));
    }
    return std::get<std::string>(tokens_[pos_++]);
  }

 private:
  std::vector<TgToken> tokens_;
  std::size_t pos_ = 0;
};

bool is_silence(std::string_view label) {
  std::string t;
  for (char c : label) {
    if (!std::isspace(static_cast<unsigned char>(c))) t += c;
  }
  return t.empty() || t == "sil" || t == "sp" || t == "spn" || t == "<sil>" ||
         t == "<eps>";
}

}  // namespace

Alignment alignment_from_textgrid(std::string_view textgrid,
                                  std::size_t statement_words,
                                  std::string_view tier_name) {
  TgReader r(tokenize_textgrid(textgrid));
  if (r.str() != "ooTextFile" || r.str() != "TextGrid") {
    throw InputError("TextGrid: missing ooTextFile/TextGrid header");
  }
  r.number();  // xmin
  r.number();  // xmax
  const int tiers = static_cast<int>(r.number());

  std::optional<std::vector<AlignedWord>> words;
  for (int t = 0; t < tiers; ++t) {
    const std::string cls = r.str();
    const std::string name = r.str();
    r.number();
    r.number();
    const int n = static_cast<int>(r.number());
    const bool wanted = cls == "IntervalTier" && name == tier_name;
    std::vector<AlignedWord> tier;
    for (int k = 0; k < n; ++k) {
      if (cls == "IntervalTier") {
        const double lo = r.number();
        const double hi = r.number();
        std::string label = r.str();
        if (wanted && !is_silence(label)) tier.push_back({label, lo, hi});
      } else if (cls == "TextTier") {
        r.number();
        r.str();
      } else {
        throw InputError("TextGrid: unknown tier class '" + cls + "'");
      }
    }
    if (wanted) words = std::move(tier);
  }
  if (!words) {
    throw InputError("TextGrid: no interval tier named '" +
                     std::string(tier_name) + "'");
  }
  if (statement_words == 0 || statement_words >= words->size()) {
    throw ValidationError("TextGrid has " + std::to_string(words->size()) +
                          " words; cannot split after " +
                          std::to_string(statement_words));
  }
  TurnMarkers m;
  m.statement_end = (*words)[statement_words - 1].offset;
  m.question_start = (*words)[statement_words].onset;
  m.question_end = words->back().offset;
  return Alignment(std::move(*words), m);
}

}  // namespace vapeval
