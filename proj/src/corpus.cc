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

#include "vapeval/corpus.h"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <ostream>
#include <tuple>

#include "vapeval/csv.h"
#include "vapeval/errors.h"

namespace vapeval {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

std::pair<std::size_t, std::size_t> line_col(std::string_view text,
                                              std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

std::optional<Role> role_from_string(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (s == "system" || s == "sys" || s == "agent" || s == "clerk" ||
      s == "wizard") {
    return Role::kAgent;
  }
  if (s == "user" || s == "usr" || s == "customer") return Role::kUser;
  return std::nullopt;
}

const json* first_of(const json& obj, std::initializer_list<const char*> keys) {
  for (const char* k : keys) {
    if (obj.contains(k)) return &obj.at(k);
  }
  return nullptr;
}

// Turns from a "log" (parity roles) or "turns" (explicit roles) array.
std::vector<Turn> parse_turns(const json& arr, bool parity_roles,
                              const std::string& where) {
  if (!arr.is_array()) throw InputError(where + ": turns must be an array");
  std::vector<Turn> turns;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const auto& t = arr[i];
    const std::string at = where + " turn " + std::to_string(i);
    if (!t.is_object()) throw InputError(at + ": not an object");
    const json* text = first_of(t, {"text", "utterance"});
    if (!text || !text->is_string()) {
      throw InputError(at + ": missing text/utterance string");
    }
    Turn turn;
    turn.text = text->get<std::string>();
    const json* speaker = first_of(t, {"speaker", "role"});
    if (speaker && speaker->is_string()) {
      const auto r = role_from_string(speaker->get<std::string>());
      if (!r) {
        throw InputError(at + ": unknown speaker '" +
                         speaker->get<std::string>() + "'");
      }
      turn.role = *r;
    } else if (parity_roles) {
      turn.role = i % 2 == 0 ? Role::kUser : Role::kAgent;
    } else {
      throw InputError(at + ": missing speaker");
    }
    turns.push_back(std::move(turn));
  }
  return turns;
}

Dialog parse_dialog(const json& d, std::string id, const std::string& where) {
  if (!d.is_object()) throw InputError(where + ": dialog is not an object");
  Dialog out;
  out.id = std::move(id);
  if (d.contains("log")) {
    out.turns = parse_turns(d.at("log"), true, where);
  } else if (d.contains("turns")) {
    out.turns = parse_turns(d.at("turns"), false, where);
  } else {
    throw InputError(where + ": dialog has neither 'log' nor 'turns'");
  }
  return out;
}

bool has_comma(std::string_view s) { return s.find(',') != s.npos; }

bool has_digit(std::string_view s) {
  return std::any_of(s.begin(), s.end(),
                     [](unsigned char c) { return std::isdigit(c); });
}

std::string_view last_word(std::string_view sentence) {
  sentence = trim(sentence);
  const auto sp = sentence.find_last_of(" \t\n\r");
  return sp == sentence.npos ? sentence : sentence.substr(sp + 1);
}

bool final_word_monosyllabic(std::string_view sentence,
                             const SyllableLexicon& lexicon) {
  try {
    return count_syllables(last_word(sentence), lexicon) == 1;
  } catch (const ValidationError&) {
    return false;
  }
}

std::string replace_final_period(std::string_view statement,
                                 std::string_view with) {
  std::string s(trim(statement));
  if (!s.empty() && s.back() == '.') s.pop_back();
  s += with;
  return s;
}

}  // namespace

std::vector<Dialog> parse_dialogs(std::string_view json_text,
                                  std::string_view source) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_col(json_text, e.byte == 0 ? 0 : e.byte - 1);
    throw InputError(std::string(source) + ":" + std::to_string(line) + ":" +
                     std::to_string(col) + ": JSON parse error: " + e.what());
  }
  std::vector<Dialog> dialogs;
  const std::string src(source);
  if (root.is_object()) {
    for (const auto& [id, d] : root.items()) {
      dialogs.push_back(parse_dialog(d, id, src + ": dialog " + id));
    }
  } else if (root.is_array()) {
    for (std::size_t i = 0; i < root.size(); ++i) {
      const auto& d = root[i];
      const json* id = d.is_object() ? first_of(d, {"dialogue_id", "dialog_id", "id"})
                                     : nullptr;
      if (!id || !id->is_string()) {
        throw InputError(src + ": dialog " + std::to_string(i) +
                         " has no string dialogue_id");
      }
      const auto name = id->get<std::string>();
      dialogs.push_back(parse_dialog(d, name, src + ": dialog " + name));
    }
  } else {
    throw InputError(src + ": top level must be an object or array of dialogs");
  }
  return dialogs;
}

std::vector<Dialog> load_dialogs(const std::string& path) {
  if (!fs::exists(path)) throw InputError("corpus path does not exist: " + path);
  std::vector<std::string> files;
  if (fs::is_directory(path)) {
    for (const auto& e : fs::directory_iterator(path)) {
      if (e.is_regular_file() && e.path().extension() == ".json") {
        files.push_back(e.path().string());
      }
    }
    std::sort(files.begin(), files.end());
  } else {
    files.push_back(path);
  }
  std::vector<Dialog> all;
  for (const auto& f : files) {
    auto ds = parse_dialogs(read_file(f), f);
    std::move(ds.begin(), ds.end(), std::back_inserter(all));
  }
  return all;
}

void FilterConfig::validate() const {
  if (min_words <= 0 || min_chars <= 0 || max_chars <= 0) {
    throw ValidationError("filter bounds must be positive");
  }
  if (min_chars >= max_chars) {
    throw ValidationError("filter min_chars must be below max_chars");
  }
}

std::string_view to_string(RejectReason r) {
  switch (r) {
    case RejectReason::kComma: return "comma";
    case RejectReason::kDigit: return "digit";
    case RejectReason::kMinWords: return "min_words";
    case RejectReason::kMinChars: return "min_chars";
    case RejectReason::kMaxChars: return "max_chars";
    case RejectReason::kFinalSyllable: return "final_syllable";
  }
  return "unknown";
}

std::vector<std::string> split_sentences(std::string_view text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c != '.' && c != '?' && c != '!') continue;
    const bool boundary = i + 1 == text.size() ||
                          std::isspace(static_cast<unsigned char>(text[i + 1]));
    if (!boundary) continue;
    const auto s = trim(text.substr(start, i + 1 - start));
    if (!s.empty()) out.emplace_back(s);
    start = i + 1;
  }
  const auto rest = trim(text.substr(std::min(start, text.size())));
  if (!rest.empty()) out.emplace_back(rest);
  return out;
}

int count_words(std::string_view sentence) {
  int n = 0;
  bool in_word = false, has_alnum = false;
  for (char c : sentence) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (in_word && has_alnum) ++n;
      in_word = has_alnum = false;
    } else {
      in_word = true;
      has_alnum = has_alnum || std::isalnum(static_cast<unsigned char>(c));
    }
  }
  if (in_word && has_alnum) ++n;
  return n;
}

std::optional<RejectReason> check_pair(std::string_view statement,
                                       std::string_view question,
                                       const FilterConfig& f,
                                       const SyllableLexicon& lexicon) {
  if (f.forbid_commas && (has_comma(statement) || has_comma(question))) {
    return RejectReason::kComma;
  }
  if (f.forbid_digits && (has_digit(statement) || has_digit(question))) {
    return RejectReason::kDigit;
  }
  if (count_words(statement) < f.min_words ||
      count_words(question) < f.min_words) {
    return RejectReason::kMinWords;
  }
  const auto chars = static_cast<int>(statement.size() + 1 + question.size());
  if (chars < f.min_chars) return RejectReason::kMinChars;
  if (chars > f.max_chars) return RejectReason::kMaxChars;
  if (f.monosyllabic_final_word &&
      (!final_word_monosyllabic(statement, lexicon) ||
       !final_word_monosyllabic(question, lexicon))) {
    return RejectReason::kFinalSyllable;
  }
  return std::nullopt;
}

ExtractionResult extract_pairs(std::span<const Dialog> dialogs,
                               const FilterConfig& f,
                               const SyllableLexicon& lexicon) {
  f.validate();
  ExtractionResult result;
  for (const auto& d : dialogs) {
    for (std::size_t t = 0; t < d.turns.size(); ++t) {
      const auto& turn = d.turns[t];
      if (turn.role != Role::kAgent) continue;
      const auto sentences = split_sentences(turn.text);
      for (std::size_t i = 0; i + 1 < sentences.size(); ++i) {
        const auto& s = sentences[i];
        const auto& q = sentences[i + 1];
        if (s.back() != '.' || q.back() != '?') continue;
        SentencePair p{d.id, static_cast<int>(t), static_cast<int>(i), s, q};
        if (const auto reason = check_pair(s, q, f, lexicon)) {
          result.rejections.push_back({std::move(p), *reason});
        } else {
          result.pairs.push_back(std::move(p));
        }
      }
    }
  }
  auto key = [](const SentencePair& p) {
    return std::tie(p.dialog_id, p.turn_index, p.sentence_index);
  };
  std::stable_sort(result.pairs.begin(), result.pairs.end(),
                   [&](const auto& a, const auto& b) { return key(a) < key(b); });
  std::stable_sort(result.rejections.begin(), result.rejections.end(),
                   [&](const auto& a, const auto& b) {
                     return key(a.pair) < key(b.pair);
                   });
  return result;
}

std::string_view to_string(Condition c) {
  switch (c) {
    case Condition::kOriginal: return "original";
    case Condition::kComma: return "comma";
    case Condition::kFiller: return "filler";
  }
  return "unknown";
}

Condition parse_condition(std::string_view s) {
  for (auto c : kAllConditions) {
    if (to_string(c) == s) return c;
  }
  throw ValidationError("unknown condition '" + std::string(s) +
                        "' (expected original, comma or filler)");
}

std::string permute(const SentencePair& p, Condition c) {
  std::string head;
  switch (c) {
    case Condition::kOriginal:
      head = std::string(trim(p.statement));
      break;
    case Condition::kComma:
      head = replace_final_period(p.statement, ",");
      break;
    case Condition::kFiller:
      head = replace_final_period(p.statement, " um,");
      break;
  }
  return head + " " + p.question;
}

void write_manifest_csv(std::span<const SentencePair> pairs,
                        std::ostream& out) {
  write_csv_row(out, {"dialog_id", "turn_index", "sentence_index", "statement",
                      "question", "original", "comma", "filler"});
  for (const auto& p : pairs) {
    write_csv_row(out, {p.dialog_id, std::to_string(p.turn_index),
                        std::to_string(p.sentence_index), p.statement,
                        p.question, permute(p, Condition::kOriginal),
                        permute(p, Condition::kComma),
                        permute(p, Condition::kFiller)});
  }
}

nlohmann::json manifest_to_json(std::span<const SentencePair> pairs) {
  json arr = json::array();
  for (const auto& p : pairs) {
    json prompts;
    for (auto c : kAllConditions) prompts[std::string(to_string(c))] = permute(p, c);
    arr.push_back({{"dialog_id", p.dialog_id},
                   {"turn_index", p.turn_index},
                   {"sentence_index", p.sentence_index},
                   {"statement", p.statement},
                   {"question", p.question},
                   {"prompts", std::move(prompts)}});
  }
  return arr;
}

}  // namespace vapeval
