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

#include "vapeval/f0.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "vapeval/errors.h"

namespace vapeval {

namespace {

// First-dip threshold on the normalised difference function.
constexpr double kDipThreshold = 0.1;

double diff_at(std::span<const float> x, std::size_t start, std::size_t width,
               std::size_t lag) {
  double acc = 0.0;
  for (std::size_t j = 0; j < width; ++j) {
    const double d = static_cast<double>(x[start + j]) - x[start + j + lag];
    acc += d * d;
  }
  return acc;
}

}  // namespace

std::vector<std::size_t> F0Contour::frames_within(std::size_t begin,
                                                  std::size_t end) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < frames.size(); ++i) {
    const std::size_t c = center(i);
    if (c >= begin + reach && c + reach <= end) out.push_back(i);
  }
  return out;
}

double F0Contour::f0_at(double sample_index) const {
  if (frames.empty()) return 0.0;
  const double pos = (sample_index - static_cast<double>(first_center)) /
                     static_cast<double>(hop_samples);
  const auto n = static_cast<long>(frames.size());
  long lo = std::clamp(static_cast<long>(std::floor(pos)), 0L, n - 1);
  long hi = std::clamp(lo + 1, 0L, n - 1);
  while (lo >= 0 && !frames[lo].voiced()) --lo;
  while (hi < n && !frames[hi].voiced()) ++hi;
  if (lo < 0 && hi >= n) return 0.0;
  if (lo < 0) return frames[hi].f0;
  if (hi >= n || hi == lo) return frames[lo].f0;
  const double t = std::clamp((pos - lo) / static_cast<double>(hi - lo), 0.0, 1.0);
  return frames[lo].f0 + t * (frames[hi].f0 - frames[lo].f0);
}

bool F0Contour::voiced_at(double sample_index) const {
  if (frames.empty()) return false;
  const double pos = (sample_index - static_cast<double>(first_center)) /
                     static_cast<double>(hop_samples);
  const auto n = static_cast<long>(frames.size());
  const long i = std::clamp(static_cast<long>(std::lround(pos)), 0L, n - 1);
  return frames[i].voiced();
}

F0Contour estimate_f0(std::span<const float> x, int sample_rate,
                      const F0Options& opts) {
  if (sample_rate <= 0) throw ValidationError("sample rate must be positive");
  if (!(opts.min_f0 > 0.0) || !(opts.max_f0 > opts.min_f0) ||
      !(opts.window > 0.0) || !(opts.hop > 0.0)) {
    throw ValidationError("inconsistent F0 estimator options");
  }
  const auto width = static_cast<std::size_t>(std::lround(opts.window * sample_rate));
  const auto min_lag = std::max<std::size_t>(
      2, static_cast<std::size_t>(std::floor(sample_rate / opts.max_f0)));
  const auto max_lag =
      static_cast<std::size_t>(std::ceil(sample_rate / opts.min_f0));
  const auto hop =
      std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(opts.hop * sample_rate)));

  F0Contour contour;
  contour.sample_rate = sample_rate;
  contour.hop = static_cast<double>(hop) / sample_rate;
  contour.hop_samples = hop;
  contour.reach = width / 2 + (max_lag + 2) / 2 + 3;
  contour.first_center = contour.reach;

  if (x.size() < 2 * contour.reach + 1) {
    throw ValidationError(
        "audio of " + std::to_string(x.size()) +
        " samples is shorter than one F0 analysis window (" +
        std::to_string(2 * contour.reach + 1) + " samples)");
  }

  std::vector<double> d(max_lag + 2), cmnd(max_lag + 2);
  for (std::size_t c = contour.first_center; c + contour.reach <= x.size();
       c += hop) {
    F0Frame frame;
    const std::size_t half = width / 2;
    if (rms(x.subspan(c - half, width)) < opts.silence_rms) {
      contour.frames.push_back(frame);
      continue;
    }
    // Coarse pass: one start for every lag.
    const std::size_t start = c - contour.reach + 1;
    double running = 0.0;
    cmnd[0] = 1.0;
    for (std::size_t lag = 1; lag <= max_lag + 1; ++lag) {
      d[lag] = diff_at(x, start, width, lag);
      running += d[lag];
      cmnd[lag] = running > 0.0 ? d[lag] * lag / running : 1.0;
    }
    std::size_t best = 0;
    for (std::size_t lag = min_lag; lag <= max_lag; ++lag) {
      if (cmnd[lag] < kDipThreshold) {
        while (lag + 1 <= max_lag && cmnd[lag + 1] < cmnd[lag]) ++lag;
        best = lag;
        break;
      }
    }
    if (best == 0) {
      best = min_lag;
      for (std::size_t lag = min_lag; lag <= max_lag; ++lag) {
        if (cmnd[lag] < cmnd[best]) best = lag;
      }
    }
    const double score = cmnd[best];
    if (score < opts.voicing_threshold) {
      // Refine with the comparison centred on c.
      const std::size_t s = c - half - best / 2;
      const double dm = diff_at(x, s, width, best - 1);
      const double d0 = diff_at(x, s, width, best);
      const double dp = diff_at(x, s, width, best + 1);
      const double denom = dm - 2.0 * d0 + dp;
      double shift = denom > 0.0 ? 0.5 * (dm - dp) / denom : 0.0;
      shift = std::clamp(shift, -1.0, 1.0);
      const double period = static_cast<double>(best) + shift;
      frame.f0 = sample_rate / period;
      frame.confidence = std::clamp(1.0 - score, 0.0, 1.0);
      if (frame.f0 < opts.min_f0 || frame.f0 > opts.max_f0) frame = {};
    }
    contour.frames.push_back(frame);
  }
  return contour;
}

F0Contour estimate_f0(const AudioBuffer& audio, const F0Options& opts) {
  if (audio.channels() != 1) {
    throw ValidationError("F0 estimation expects mono audio");
  }
  return estimate_f0(audio.samples(), audio.sample_rate(), opts);
}

double cents(double f, double ref) { return 1200.0 * std::log2(f / ref); }

}  // namespace vapeval
