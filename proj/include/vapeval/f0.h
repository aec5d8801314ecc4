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

#ifndef VAPEVAL_F0_H_
#define VAPEVAL_F0_H_

// YIN-style fundamental frequency estimation (cumulative mean normalised
// difference, parabolic refinement around a time-centred lag window).

#include <span>
#include <vector>

#include "vapeval/audio.h"

namespace vapeval {

struct F0Options {
  double min_f0 = 60.0;
  double max_f0 = 400.0;
  double window = 0.025;  // seconds
  double hop = 0.010;     // seconds
  // Frames whose normalised difference minimum exceeds this are unvoiced.
  double voicing_threshold = 0.3;
  // Frames quieter than this RMS are unvoiced.
  double silence_rms = 1e-4;
};

struct F0Frame {
  double f0 = 0.0;  // Hz; 0 when unvoiced
  double confidence = 0.0;

  bool voiced() const { return f0 > 0.0; }
};

struct F0Contour {
  int sample_rate = 0;
  double hop = 0.010;
  std::size_t first_center = 0;  // sample index of frame 0's centre
  std::size_t hop_samples = 0;
  std::size_t reach = 0;  // samples either side of a centre the frame reads
  std::vector<F0Frame> frames;

  std::size_t center(std::size_t frame) const {
    return first_center + frame * hop_samples;
  }
  double time(std::size_t frame) const {
    return static_cast<double>(center(frame)) / sample_rate;
  }
  // Frames whose whole analysis support lies in [begin, end).
  std::vector<std::size_t> frames_within(std::size_t begin,
                                         std::size_t end) const;
  // Voiced f0 at sample index, linearly interpolated between neighbouring
  // voiced frames and held constant beyond the first/last voiced frame.
  // 0 if the contour has no voiced frame.
  double f0_at(double sample_index) const;
  // Whether the frame nearest to the sample index is voiced.
  bool voiced_at(double sample_index) const;
};

// Throws ValidationError when the audio is shorter than one analysis window
// (window + longest period) or the options are inconsistent.
F0Contour estimate_f0(std::span<const float> mono, int sample_rate,
                      const F0Options& opts = {});
// Throws ValidationError for stereo input.
F0Contour estimate_f0(const AudioBuffer& audio, const F0Options& opts = {});

// 1200 * log2(f / ref).
double cents(double f, double ref);

}  // namespace vapeval

#endif  // VAPEVAL_F0_H_
