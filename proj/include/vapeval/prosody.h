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

#ifndef VAPEVAL_PROSODY_H_
#define VAPEVAL_PROSODY_H_

// Local prosody edits on mono audio: time stretching (WSOLA), pitch
// flattening (time-varying resampling followed by WSOLA back to the
// original length) and gain. Each edit touches only the requested span.

#include <span>
#include <string>
#include <vector>

#include "vapeval/alignment.h"
#include "vapeval/audio.h"
#include "vapeval/f0.h"

namespace vapeval {

struct EditResult {
  AudioBuffer audio;
  std::size_t clipped_samples = 0;
  std::vector<std::string> warnings;
};

// Waveform-similarity overlap-add time scaling of a standalone signal to
// exactly out_len samples. The first and last samples of the output equal
// those of the input.
std::vector<float> wsola(std::span<const float> in, std::size_t out_len,
                         int sample_rate);

// Span length is multiplied by factor (rounded to whole samples); audio
// after the span is shifted. Throws ValidationError if factor < 1, the
// span lies outside the audio, or the input is not mono.
EditResult stretch(const AudioBuffer& audio, SampleSpan span, double factor);

// Re-renders voiced parts of the span at a constant target pitch; unvoiced
// samples and everything outside the span are untouched. A span with no
// voiced frame is returned unchanged with a warning.
EditResult flatten_pitch(const AudioBuffer& audio, SampleSpan span,
                         double target_hz, const F0Options& f0 = {});

// Mean voiced F0 over frames centred inside the span; 0 if none.
double span_mean_f0(const AudioBuffer& audio, SampleSpan span,
                    const F0Options& f0 = {});

// Scales the span by 10^(gain_db / 20), hard-clamping to [-1, 1] and
// counting clamped samples.
EditResult apply_gain(const AudioBuffer& audio, SampleSpan span,
                      double gain_db);

struct PitchTarget {
  enum class Kind { kSpanMean, kFixed };
  Kind kind = Kind::kSpanMean;
  double hz = 0.0;  // used when kind == kFixed
};

struct ManipulationParams {
  double gain_db = 3.0;
  double stretch_factor = 1.5;
  PitchTarget pitch_target;

  // Throws ValidationError unless stretch_factor >= 1 and gain_db is finite.
  void validate() const;
};

struct ManipulatedTurn {
  EditResult edit;
  Alignment alignment;
  SampleSpan span;  // final span of the edited word in the output
  double target_hz = 0.0;
};

// stretch -> flatten_pitch -> apply_gain on the last statement word, with
// later timestamps shifted by the added duration.
ManipulatedTurn manipulate_final_syllable(const AudioBuffer& audio,
                                          const Alignment& alignment,
                                          const ManipulationParams& params,
                                          const F0Options& f0 = {});

}  // namespace vapeval

#endif  // VAPEVAL_PROSODY_H_
