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

#include "vapeval/aggregation.h"

#include <cmath>
#include <string>

#include "vapeval/errors.h"

namespace vapeval {

namespace {

constexpr std::array<int, 2> kNowBins = {0, 1};
constexpr std::array<int, 2> kFutBins = {2, 3};

const std::array<int, 2>& region_bins(Region r) {
  return r == Region::kNow ? kNowBins : kFutBins;
}

double bin_weight(int bin, BinWeighting w) {
  return w == BinWeighting::kDuration ? CodecConfig::kBinDurations[bin] : 1.0;
}

// Lazily built bin table shared by all calls; BinMatrix for every label.
const std::array<BinMatrix, kNumLabels>& label_table() {
  static const auto table = [] {
    std::array<BinMatrix, kNumLabels> t;
    for (int y = 0; y < kNumLabels; ++y) t[y] = decode_label(VapLabel(y));
    return t;
  }();
  return table;
}

double normalise(double agent, double user) {
  const double total = agent + user;
  if (total <= 0.0) return 0.5;
  return agent / total;
}

}  // namespace

LabelDistribution::LabelDistribution(
    const std::array<double, kNumLabels>& probs)
    : probs_(probs) {
  double sum = 0.0;
  for (int y = 0; y < kNumLabels; ++y) {
    const double p = probs_[y];
    if (!std::isfinite(p) || p < 0.0) {
      throw ValidationError("label " + std::to_string(y) +
                            " has invalid probability " + std::to_string(p));
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > kSumTolerance) {
    throw ValidationError("label distribution sums to " +
                          std::to_string(sum) + ", expected 1");
  }
}

LabelDistribution LabelDistribution::OneHot(int label) {
  VapLabel checked(label);
  std::array<double, kNumLabels> p{};
  p[checked.value()] = 1.0;
  return LabelDistribution(p);
}

LabelDistribution LabelDistribution::Uniform() {
  std::array<double, kNumLabels> p;
  p.fill(1.0 / kNumLabels);
  return LabelDistribution(p);
}

std::string_view to_string(BinWeighting w) {
  return w == BinWeighting::kDuration ? "duration" : "uniform";
}

BinWeighting parse_bin_weighting(std::string_view s) {
  if (s == "duration") return BinWeighting::kDuration;
  if (s == "uniform") return BinWeighting::kUniform;
  throw ValidationError("unknown bin weighting '" + std::string(s) +
                        "' (expected duration or uniform)");
}

double speaker_region_weight(const LabelDistribution& d, Speaker speaker,
                             Region region, BinWeighting weighting) {
  const auto& bins = region_bins(region);
  double norm = 0.0;
  for (int i : bins) norm += bin_weight(i, weighting);

  const auto& table = label_table();
  double total = 0.0;
  for (int y = 0; y < kNumLabels; ++y) {
    if (d[y] == 0.0) continue;
    double active = 0.0;
    for (int i : bins) {
      if (table[y].at(speaker, i)) active += bin_weight(i, weighting);
    }
    total += d[y] * (active / norm);
  }
  return total;
}

BinMarginals bin_marginals(const LabelDistribution& d) {
  BinMarginals m{};
  const auto& table = label_table();
  for (int y = 0; y < kNumLabels; ++y) {
    const double p = d[y];
    if (p == 0.0) continue;
    for (int s = 0; s < kNumSpeakers; ++s) {
      for (int i = 0; i < kBinsPerSpeaker; ++i) {
        if (table[y].bins[s][i]) m[s][i] += p;
      }
    }
  }
  return m;
}

double region_weight(const BinMarginals& marginals, Speaker speaker,
                     Region region, BinWeighting weighting) {
  double num = 0.0;
  double norm = 0.0;
  for (int i : region_bins(region)) {
    const double w = bin_weight(i, weighting);
    num += w * marginals[static_cast<int>(speaker)][i];
    norm += w;
  }
  return num / norm;
}

ProbFrame next_speaker_probs(const LabelDistribution& d,
                             BinWeighting weighting) {
  const auto m = bin_marginals(d);
  ProbFrame f;
  f.p_now = normalise(region_weight(m, Speaker::kAgent, Region::kNow, weighting),
                      region_weight(m, Speaker::kUser, Region::kNow, weighting));
  f.p_fut = normalise(region_weight(m, Speaker::kAgent, Region::kFut, weighting),
                      region_weight(m, Speaker::kUser, Region::kFut, weighting));
  return f;
}

double p_now(const LabelDistribution& d, BinWeighting weighting) {
  return next_speaker_probs(d, weighting).p_now;
}

double p_fut(const LabelDistribution& d, BinWeighting weighting) {
  return next_speaker_probs(d, weighting).p_fut;
}

ProbTrace::ProbTrace(double frame_rate, std::vector<ProbFrame> frames)
    : frame_rate_(frame_rate), frames_(std::move(frames)) {
  if (!(frame_rate_ > 0.0) || !std::isfinite(frame_rate_)) {
    throw ValidationError("trace frame rate must be positive");
  }
  if (frames_.empty()) throw ValidationError("probability trace is empty");
  for (std::size_t i = 0; i < frames_.size(); ++i) {
    for (double p : {frames_[i].p_now, frames_[i].p_fut}) {
      if (!(p >= 0.0 && p <= 1.0)) {
        throw ValidationError("trace frame " + std::to_string(i) +
                              " has probability outside [0, 1]: " +
                              std::to_string(p));
      }
    }
  }
}

ProbTrace trace_from_distributions(std::span<const LabelDistribution> frames,
                                   double frame_rate, BinWeighting weighting) {
  if (frames.empty()) {
    throw ValidationError("cannot build a trace from zero distributions");
  }
  std::vector<ProbFrame> out;
  out.reserve(frames.size());
  for (const auto& d : frames) out.push_back(next_speaker_probs(d, weighting));
  return ProbTrace(frame_rate, std::move(out));
}

}  // namespace vapeval
