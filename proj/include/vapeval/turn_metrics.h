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

#ifndef VAPEVAL_TURN_METRICS_H_
#define VAPEVAL_TURN_METRICS_H_

// Hold/yield classification of a statement + question turn.
//
//   weak_hold    pause:        p_fut favours the agent
//   strong_hold  pause:        p_now and p_fut favour the agent
//   early_yield  last 600 ms:  p_fut favours the user
//   late_yield   tail silence: p_now and p_fut favour the user
//
// "Favours the agent" means above the threshold (0.5); "favours the user"
// means below it. Equality favours neither.

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "vapeval/aggregation.h"
#include "vapeval/alignment.h"
#include "vapeval/codec.h"

namespace vapeval {

struct RegionConfig {
  double early_window = 0.6;  // seconds of speech before question end
  double tail = 0.4;          // seconds of silence after question end
};

struct TurnRegions {
  FrameSpan pause;
  FrameSpan early_yield;
  FrameSpan late_yield;
};

// pause = [statement_end, question_start), early = [question_end - early,
// question_end), late = [question_end, question_end + tail), each rounded to
// the nearest frame. Throws ValidationError when the question is shorter than
// the early window, the pause is empty, or the tail is not positive.
TurnRegions derive_regions(const TurnMarkers& markers, double frame_rate,
                           const RegionConfig& cfg = {});
TurnRegions derive_regions(const Alignment& alignment, double frame_rate,
                           const RegionConfig& cfg = {});

enum class DecisionRule {
  kMean,       // region mean beyond the threshold
  kAllFrames,  // every frame in the region beyond the threshold
};

std::string_view to_string(DecisionRule rule);
DecisionRule parse_decision_rule(std::string_view s);

struct ClassifyOptions {
  DecisionRule rule = DecisionRule::kMean;
  double threshold = 0.5;
};

struct TurnMetrics {
  bool weak_hold = false;
  bool strong_hold = false;
  bool early_yield = false;
  bool late_yield = false;

  bool operator==(const TurnMetrics&) const = default;
};

// Region means, recorded alongside the booleans in per-sample output.
struct RegionMeans {
  double pause_now = 0.0;
  double pause_fut = 0.0;
  double early_fut = 0.0;
  double tail_now = 0.0;
  double tail_fut = 0.0;
};

struct Classification {
  TurnMetrics metrics;
  RegionMeans means;
};

// Throws ValidationError if a region is empty or extends past the trace.
Classification classify_detailed(const ProbTrace& trace,
                                 const TurnRegions& regions,
                                 const ClassifyOptions& opts = {});
TurnMetrics classify(const ProbTrace& trace, const TurnRegions& regions,
                     const ClassifyOptions& opts = {});

// Percentages (0-100, full precision) of samples for which each metric holds.
struct MetricPercentages {
  std::string system;
  std::string condition;
  int n = 0;
  double weak_hold = 0.0;
  double strong_hold = 0.0;
  double early_yield = 0.0;
  double late_yield = 0.0;
};

// Throws ValidationError on an empty sample list.
MetricPercentages aggregate_corpus(std::span<const TurnMetrics> samples,
                                   std::string system = "",
                                   std::string condition = "");

// Integer percentage shown in tables: round half away from zero.
int display_percent(double percent);

struct CorpusReport {
  DecisionRule rule = DecisionRule::kMean;
  std::vector<MetricPercentages> groups;
};

// Columns: system,condition,weak_hold,strong_hold,early_yield,late_yield,n.
// A non-empty digest is written as a leading "# config_sha256=" comment.
void write_report_csv(const CorpusReport& report, std::ostream& out,
                      std::string_view config_digest = {});
nlohmann::json report_to_json(const CorpusReport& report);
// Reads the JSON produced by report_to_json. Throws InputError.
CorpusReport report_from_json(const nlohmann::json& j);

}  // namespace vapeval

#endif  // VAPEVAL_TURN_METRICS_H_
