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

#ifndef VAPEVAL_AGGREGATION_H_
#define VAPEVAL_AGGREGATION_H_

// Reduction of a distribution over the 256 projection labels to the
// probability that the agent is the active speaker in the near (0-0.6 s)
// and far (0.6-2.0 s) future.

#include <array>
#include <span>
#include <string_view>
#include <vector>

#include "vapeval/codec.h"

namespace vapeval {

class LabelDistribution {
 public:
  static constexpr double kSumTolerance = 1e-4;

  // Throws ValidationError on negative or non-finite entries, or when the
  // entries do not sum to 1 within kSumTolerance.
  explicit LabelDistribution(const std::array<double, kNumLabels>& probs);

  static LabelDistribution OneHot(int label);
  static LabelDistribution Uniform();

  double operator[](int label) const { return probs_[label]; }
  const std::array<double, kNumLabels>& probs() const { return probs_; }

 private:
  std::array<double, kNumLabels> probs_;
};

// now = bins 0-1, fut = bins 2-3.
enum class Region { kNow, kFut };

// How bins inside a region are combined. kDuration weights each bin by its
// length so the result is an expected fraction of active time.
enum class BinWeighting { kDuration, kUniform };

std::string_view to_string(BinWeighting w);
// Accepts "duration" and "uniform"; throws ValidationError otherwise.
BinWeighting parse_bin_weighting(std::string_view s);

// Direct per-label sum:
//   sum_y d[y] * (sum_{i in R} w_i * bin_y[speaker][i]) / (sum_{i in R} w_i)
double speaker_region_weight(const LabelDistribution& d, Speaker speaker,
                             Region region,
                             BinWeighting weighting = BinWeighting::kDuration);

// Probability mass on labels whose bin [speaker][i] is active.
using BinMarginals =
    std::array<std::array<double, kBinsPerSpeaker>, kNumSpeakers>;
BinMarginals bin_marginals(const LabelDistribution& d);

// Same quantity as speaker_region_weight, computed from precomputed marginals.
double region_weight(const BinMarginals& marginals, Speaker speaker,
                     Region region,
                     BinWeighting weighting = BinWeighting::kDuration);

struct ProbFrame {
  double p_now = 0.5;
  double p_fut = 0.5;
  bool operator==(const ProbFrame&) const = default;
};

// Normalises agent against user weight; 0/0 yields 0.5.
ProbFrame next_speaker_probs(const LabelDistribution& d,
                             BinWeighting weighting = BinWeighting::kDuration);
double p_now(const LabelDistribution& d,
             BinWeighting weighting = BinWeighting::kDuration);
double p_fut(const LabelDistribution& d,
             BinWeighting weighting = BinWeighting::kDuration);

// Per-frame agent probabilities. Values are in [0, 1] and the trace is
// never empty.
class ProbTrace {
 public:
  // Throws ValidationError on an empty trace, non-positive frame rate, or any
  // value outside [0, 1].
  ProbTrace(double frame_rate, std::vector<ProbFrame> frames);

  double frame_rate() const { return frame_rate_; }
  const std::vector<ProbFrame>& frames() const { return frames_; }
  std::size_t size() const { return frames_.size(); }
  const ProbFrame& operator[](std::size_t i) const { return frames_[i]; }

 private:
  double frame_rate_;
  std::vector<ProbFrame> frames_;
};

// Throws ValidationError on empty input.
ProbTrace trace_from_distributions(
    std::span<const LabelDistribution> frames, double frame_rate,
    BinWeighting weighting = BinWeighting::kDuration);

}  // namespace vapeval

#endif  // VAPEVAL_AGGREGATION_H_
