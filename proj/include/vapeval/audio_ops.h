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

#ifndef VAPEVAL_AUDIO_OPS_H_
#define VAPEVAL_AUDIO_OPS_H_

#include "vapeval/alignment.h"
#include "vapeval/audio.h"

namespace vapeval {

struct SilenceOptions {
  double pause = 0.4;  // seconds between statement and question
  double tail = 0.4;   // seconds after question end
  // Keep the original gap/tail audio (trimmed from the middle, or padded
  // with zeros in the middle) instead of writing digital silence.
  bool preserve_gap_audio = false;
  // Allowed overhang of question_end past the end of the audio.
  double length_tolerance = 0.05;
};

struct NormalizedTurn {
  AudioBuffer audio;
  Alignment alignment;
};

// Rebuilds mono agent audio as
//   [0, statement_end) + pause + [question_start, question_end) + tail
// and shifts question timestamps to match. Samples outside the gap and tail
// are copied unchanged. Applying it twice equals applying it once.
// Throws ValidationError for stereo input or when the alignment runs past
// the audio by more than length_tolerance.
NormalizedTurn normalize_silences(const AudioBuffer& agent,
                                  const Alignment& alignment,
                                  const SilenceOptions& opts = {});

// Channel 0 = agent, channel 1 = digital silence. Throws ValidationError
// for non-mono input.
AudioBuffer assemble_stereo(const AudioBuffer& agent);

}  // namespace vapeval

#endif  // VAPEVAL_AUDIO_OPS_H_
