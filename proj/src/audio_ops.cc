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

#include "vapeval/audio_ops.h"

#include <algorithm>
#include <cmath>

#include "vapeval/errors.h"

namespace vapeval {

namespace {

std::size_t to_index(double seconds, int rate) {
  return static_cast<std::size_t>(std::llround(std::max(0.0, seconds) * rate));
}

using Samples = std::vector<float>;

void append(Samples& out, const Samples& in, std::size_t b, std::size_t e) {
  out.insert(out.end(), in.begin() + static_cast<long>(b),
             in.begin() + static_cast<long>(e));
}

// Resizes a silence region to `target` samples. With keep_audio the ends
// of the original region are kept and the middle is cut or zero-filled.
void append_region(Samples& out, const Samples& in, std::size_t b,
                   std::size_t e, std::size_t target, bool keep_audio,
                   bool anchor_start_only) {
  if (!keep_audio) {
    out.insert(out.end(), target, 0.0f);
    return;
  }
  const std::size_t len = e - b;
  if (anchor_start_only) {  // tail: keep the start, trim or pad at the end
    const std::size_t keep = std::min(len, target);
    append(out, in, b, b + keep);
    out.insert(out.end(), target - keep, 0.0f);
    return;
  }
  if (len >= target) {
    const std::size_t head = (target + 1) / 2;
    append(out, in, b, b + head);
    append(out, in, e - (target - head), e);
  } else {
    const std::size_t head = len / 2;
    append(out, in, b, b + head);
    out.insert(out.end(), target - len, 0.0f);
    append(out, in, b + head, e);
  }
}

}  // namespace

NormalizedTurn normalize_silences(const AudioBuffer& agent,
                                  const Alignment& al,
                                  const SilenceOptions& opts) {
  if (agent.channels() != 1) {
    throw ValidationError("silence normalization expects mono agent audio");
  }
  if (!(opts.pause >= 0.0) || !(opts.tail >= 0.0)) {
    throw ValidationError("pause and tail durations must be non-negative");
  }
  const int sr = agent.sample_rate();
  if (al.question_end() > agent.duration() + opts.length_tolerance) {
    throw ValidationError(
        "alignment ends at " + std::to_string(al.question_end()) +
        " s but audio is only " + std::to_string(agent.duration()) + " s long");
  }
  const auto& in = agent.samples();
  const std::size_t n = in.size();
  const std::size_t se = std::min(to_index(al.statement_end(), sr), n);
  const std::size_t qs = std::clamp(to_index(al.question_start(), sr), se, n);
  const std::size_t qe = std::clamp(to_index(al.question_end(), sr), qs, n);
  const std::size_t pause = to_index(opts.pause, sr);
  const std::size_t tail = to_index(opts.tail, sr);

  Samples out;
  out.reserve(se + pause + (qe - qs) + tail);
  append(out, in, 0, se);
  append_region(out, in, se, qs, pause, opts.preserve_gap_audio, false);
  append(out, in, qs, qe);
  append_region(out, in, qe, n, tail, opts.preserve_gap_audio, true);

  const double new_qs = static_cast<double>(se + pause) / sr;
  const double shift = (static_cast<double>(se + pause) -
                        static_cast<double>(qs)) / sr;
  std::vector<AlignedWord> words = al.words();
  for (std::size_t i = al.last_statement_word() + 1; i < words.size(); ++i) {
    words[i].onset += shift;
    words[i].offset += shift;
  }
  TurnMarkers m;
  m.statement_end = static_cast<double>(se) / sr;
  m.question_start = new_qs;
  m.question_end = static_cast<double>(se + pause + (qe - qs)) / sr;
  return {AudioBuffer(std::move(out), sr, 1), Alignment(std::move(words), m)};
}

AudioBuffer assemble_stereo(const AudioBuffer& agent) {
  if (agent.channels() != 1) {
    throw ValidationError("assemble_stereo expects mono agent audio");
  }
  const auto& in = agent.samples();
  std::vector<float> out(in.size() * 2, 0.0f);
  for (std::size_t i = 0; i < in.size(); ++i) out[2 * i] = in[i];
  return AudioBuffer(std::move(out), agent.sample_rate(), 2);
}

}  // namespace vapeval
