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

#ifndef VAPEVAL_CLI_COMMANDS_H_
#define VAPEVAL_CLI_COMMANDS_H_

// Subcommand bodies. Each reads its inputs from a RunConfig, writes into
// config.output_dir and reports progress on `log`. Failures are thrown as
// InputError (exit 1) or ValidationError (exit 2).
//
// Directory conventions:
//   normalize / manipulate   <alignment_dir>/<rel>.json + <audio_dir>/<rel>.wav
//                            -> <output_dir>/<rel>.wav + <rel>.json
//   oracle-sim               <scenario>/<rel>.json -> <output_dir>/<rel>.vapt
//                            (+ <rel>.json when the scenario has an alignment)
//   evaluate                 <alignment_dir>/<system>/<condition>/<id>.json
//                            <trace_dir>/<system>/<condition>/<id>.vapt
//                            (or .trace / .ptrace)

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "vapeval/cli/run_config.h"
#include "vapeval/corpus.h"

namespace vapeval::cli {

// "<dialog stem>_t<turn>_s<sentence>", used to name prompts and audio.
std::string sample_id(const SentencePair& p);

// Runs fn(i) for i in [0, n) on up to `workers` threads. The exception of
// the lowest failing index, if any, is rethrown after all work finishes.
void parallel_for(std::size_t n, int workers,
                  const std::function<void(std::size_t)>& fn);

// Files under `root` with the given extension, as paths relative to root
// without the extension, sorted.
std::vector<std::string> list_stems(const std::string& root,
                                    const std::string& extension);

void cmd_extract(const RunConfig& cfg, std::ostream& log);
void cmd_permute(const RunConfig& cfg, std::ostream& log);
void cmd_normalize(const RunConfig& cfg, std::ostream& log);
void cmd_manipulate(const RunConfig& cfg, std::ostream& log);
void cmd_oracle_sim(const RunConfig& cfg, std::ostream& log);

struct EvaluateSummary {
  std::size_t evaluated = 0;
  std::size_t skipped = 0;
};
EvaluateSummary cmd_evaluate(const RunConfig& cfg, std::ostream& log);

void cmd_plot(const RunConfig& cfg, std::ostream& log);
void cmd_report(const RunConfig& cfg, std::ostream& log);

}  // namespace vapeval::cli

#endif  // VAPEVAL_CLI_COMMANDS_H_
