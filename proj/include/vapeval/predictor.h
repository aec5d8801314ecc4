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

#ifndef VAPEVAL_PREDICTOR_H_
#define VAPEVAL_PREDICTOR_H_

// Sources of per-frame label distributions: trace files exported from a
// projection model, and a future-leak oracle that encodes the true upcoming
// voice activity of a constructed scenario.
//
// Binary trace layout (all little-endian):
//   "VAPT" | u8 version=1 | f32 frame_rate | u32 frames | frames x 256 f32
//
// Text distribution trace: a "frame_rate=<Hz>" line (optionally also
// "frames=<N>"), then one row of 256 comma-separated probabilities per frame.
//
// Text p-trace: a "frame_rate=<Hz>" line, then one "p_now,p_fut" per frame.

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "vapeval/aggregation.h"
#include "vapeval/codec.h"

namespace vapeval {

inline constexpr char kTraceMagic[4] = {'V', 'A', 'P', 'T'};
inline constexpr std::uint8_t kTraceVersion = 1;

class FrameDistTrace {
 public:
  // values holds frames x 256 probabilities, frame-major. Throws
  // ValidationError if the frame rate is not positive, the size is not a
  // multiple of 256, or any row is not a valid LabelDistribution (the error
  // names the row).
  FrameDistTrace(float frame_rate, std::vector<float> values);

  float frame_rate() const { return frame_rate_; }
  std::size_t num_frames() const { return values_.size() / kNumLabels; }
  std::span<const float> row(std::size_t frame) const;
  LabelDistribution distribution(std::size_t frame) const;
  const std::vector<float>& values() const { return values_; }

  bool operator==(const FrameDistTrace&) const = default;

 private:
  float frame_rate_;
  std::vector<float> values_;
};

std::string serialize_trace(const FrameDistTrace& trace);
void write_trace(const FrameDistTrace& trace, const std::string& path);

// Accepts the binary format or the text distribution format. Throws
// InputError for format/header problems (with row numbers for short rows)
// and ValidationError for rows that are not distributions.
FrameDistTrace parse_trace(std::string_view bytes);
FrameDistTrace load_trace(const std::string& path);

ProbTrace to_prob_trace(const FrameDistTrace& trace,
                        BinWeighting weighting = BinWeighting::kDuration);

std::string format_ptrace(const ProbTrace& trace);
ProbTrace parse_ptrace(std::string_view text);
ProbTrace load_ptrace(const std::string& path);

// Loads any of the three formats and returns agent probabilities; full
// distributions are aggregated with `weighting`.
ProbTrace load_prob_trace(const std::string& path,
                          BinWeighting weighting = BinWeighting::kDuration);

struct Interval {
  double onset = 0.0;
  double offset = 0.0;
};

// Ground-truth voice activity for a two-party scenario.
struct VaScenario {
  double duration = 0.0;
  std::array<std::vector<Interval>, kNumSpeakers> speech;

  // Throws ValidationError if intervals fall outside [0, duration], are
  // inverted, or overlap within a speaker.
  void validate() const;
};

// Frame k is active when its centre (k + 0.5) / rate lies in an interval.
std::vector<bool> frame_activity(const VaScenario& s, Speaker speaker,
                                 double frame_rate);

// For each frame n, a one-hot distribution on encode_window of the true
// activity in frames [n + 1, n + 1 + horizon). Frames whose window would
// run past the scenario end are dropped. Throws ValidationError when no
// frame remains.
FrameDistTrace oracle_distributions(const VaScenario& s,
                                    const CodecConfig& cfg);

// {"duration": 6.0, "agent": [[0, 1.2], ...], "user": [[3.0, 6.0]]}
VaScenario scenario_from_json(const nlohmann::json& j);
nlohmann::json scenario_to_json(const VaScenario& s);

}  // namespace vapeval

#endif  // VAPEVAL_PREDICTOR_H_
