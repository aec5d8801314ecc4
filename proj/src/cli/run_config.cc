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

#include "vapeval/cli/run_config.h"

#include <openssl/evp.h>

#include <algorithm>
#include <filesystem>
#include <thread>

#include "vapeval/csv.h"
#include "vapeval/errors.h"

namespace vapeval::cli {

namespace fs = std::filesystem;

namespace {

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) {
    if (!out.empty()) out += ',';
    out += s;
  }
  return out;
}

std::string b(bool v) { return v ? "true" : "false"; }

}  // namespace

std::vector<std::pair<std::string, std::string>> RunConfig::entries() const {
  std::vector<std::string> conds;
  for (auto c : conditions) conds.emplace_back(to_string(c));
  std::string pitch = prosody.pitch_target.kind == PitchTarget::Kind::kFixed
                          ? format_number(prosody.pitch_target.hz)
                          : "span-mean";
  std::vector<std::pair<std::string, std::string>> e = {
      {"alignment", alignment},
      {"alignment_dir", alignment_dir},
      {"audio", audio},
      {"audio_dir", audio_dir},
      {"bin_weighting", std::string(to_string(weighting))},
      {"conditions", join(conds)},
      {"corpus", corpus},
      {"early_window", format_number(regions.early_window)},
      {"external_metrics", external_metrics},
      {"filter.forbid_commas", b(filter.forbid_commas)},
      {"filter.forbid_digits", b(filter.forbid_digits)},
      {"filter.max_chars", std::to_string(filter.max_chars)},
      {"filter.min_chars", std::to_string(filter.min_chars)},
      {"filter.min_words", std::to_string(filter.min_words)},
      {"filter.monosyllabic_final_word", b(filter.monosyllabic_final_word)},
      {"frame_rate", format_number(frame_rate)},
      {"manifest", manifest},
      {"pause", format_number(silence.pause)},
      {"preserve_gap_audio", b(silence.preserve_gap_audio)},
      {"prosody.gain_db", format_number(prosody.gain_db)},
      {"prosody.pitch_target", pitch},
      {"prosody.stretch", format_number(prosody.stretch_factor)},
      {"report_json", report_json},
      {"rule", std::string(to_string(rule))},
      {"scenario", scenario},
      {"stereo", b(stereo)},
      {"systems", join(systems)},
      {"tail", format_number(regions.tail)},
      {"threshold", format_number(threshold)},
      {"trace", trace},
      {"trace_dir", trace_dir},
  };
  std::sort(e.begin(), e.end());
  return e;
}

std::string RunConfig::canonical_text() const {
  std::string out;
  for (const auto& [k, v] : entries()) out += k + "=" + v + "\n";
  return out;
}

std::string RunConfig::digest() const { return sha256_hex(canonical_text()); }

nlohmann::json RunConfig::to_json() const {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [k, v] : entries()) j[k] = v;
  return j;
}

int RunConfig::worker_count() const {
  if (jobs > 0) return jobs;
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

void require_path(const std::string& path, const char* what, bool dir) {
  if (path.empty()) throw InputError(std::string(what) + " is not set");
  std::error_code ec;
  const bool ok = dir ? fs::is_directory(path, ec) : fs::is_regular_file(path, ec);
  if (!ok) {
    throw InputError(std::string(what) + ": " + path + " is not an existing " +
                     (dir ? "directory" : "file"));
  }
}

std::string sha256_hex(std::string_view data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr)) {
    throw std::runtime_error("SHA-256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[md[i] >> 4];
    out += kHex[md[i] & 15];
  }
  return out;
}

}  // namespace vapeval::cli
