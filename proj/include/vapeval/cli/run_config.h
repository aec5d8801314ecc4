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

#ifndef VAPEVAL_CLI_RUN_CONFIG_H_
#define VAPEVAL_CLI_RUN_CONFIG_H_

// Settings shared by all subcommands. Every field maps to one command-line
// flag and one key in the matching INI section; see tools/vapeval_main.cc.

#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "vapeval/aggregation.h"
#include "vapeval/audio_ops.h"
#include "vapeval/corpus.h"
#include "vapeval/prosody.h"
#include "vapeval/turn_metrics.h"

namespace vapeval::cli {

struct RunConfig {
  // Inputs.
  std::string corpus;
  std::string manifest;
  std::string audio_dir;
  std::string alignment_dir;
  std::string trace_dir;
  std::string scenario;
  std::string external_metrics;  // optional MOS/WER CSV for `report`
  std::string report_json;       // input of `report`
  // Single-sample inputs of `plot`.
  std::string audio;
  std::string alignment;
  std::string trace;

  // Where results go. Not part of the digest.
  std::string output_dir;

  double frame_rate = 50.0;
  BinWeighting weighting = BinWeighting::kDuration;
  DecisionRule rule = DecisionRule::kMean;
  double threshold = 0.5;
  RegionConfig regions;
  SilenceOptions silence;
  ManipulationParams prosody;
  FilterConfig filter;
  std::vector<Condition> conditions{std::begin(kAllConditions),
                                    std::end(kAllConditions)};
  std::vector<std::string> systems;  // empty: every subdirectory
  bool stereo = true;
  int jobs = 0;  // 0: hardware concurrency

  // Sorted key/value pairs describing every setting that can change an
  // output; paths are recorded as given.
  std::vector<std::pair<std::string, std::string>> entries() const;
  std::string canonical_text() const;
  // Hex SHA-256 of canonical_text().
  std::string digest() const;
  nlohmann::json to_json() const;

  int worker_count() const;
};

// Throws InputError unless `path` names an existing file (or directory when
// `dir` is true). `what` names the setting in the message.
void require_path(const std::string& path, const char* what, bool dir = false);

std::string sha256_hex(std::string_view data);

}  // namespace vapeval::cli

#endif  // VAPEVAL_CLI_RUN_CONFIG_H_
