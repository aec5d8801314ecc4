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

#ifndef VAPEVAL_TESTS_SYNTH_H_
#define VAPEVAL_TESTS_SYNTH_H_

// Synthetic test signals.

#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include "vapeval/alignment.h"
#include "vapeval/audio.h"

namespace vapeval::testing {

inline std::vector<float> tone(double hz, double seconds, int sr = 16000,
                               double amp = 0.5) {
  std::vector<float> x(static_cast<std::size_t>(std::lround(seconds * sr)));
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = static_cast<float>(amp * std::sin(2.0 * std::numbers::pi * hz * i / sr));
  }
  return x;
}

// Band-limited harmonic signal whose fundamental follows f0(t).
inline std::vector<float> voice(const std::function<double(double)>& f0,
                                double seconds, int sr = 16000,
                                double amp = 0.4, int harmonics = 6) {
  std::vector<float> x(static_cast<std::size_t>(std::lround(seconds * sr)));
  double phase = 0.0;
  double norm = 0.0;
  for (int h = 1; h <= harmonics; ++h) norm += 1.0 / h;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = f0(static_cast<double>(i) / sr);
    double v = 0.0;
    for (int h = 1; h <= harmonics; ++h) {
      if (h * f < 0.45 * sr) v += std::sin(h * phase) / h;
    }
    x[i] = static_cast<float>(amp * v / norm);
    phase += 2.0 * std::numbers::pi * f / sr;
  }
  return x;
}

inline std::vector<float> sawtooth(double hz, double seconds, int sr = 16000,
                                   double amp = 0.4) {
  std::vector<float> x(static_cast<std::size_t>(std::lround(seconds * sr)));
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double p = std::fmod(hz * i / sr, 1.0);
    x[i] = static_cast<float>(amp * (2.0 * p - 1.0));
  }
  return x;
}

// Mono audio of `total` seconds with a 180 Hz voice inside every word and
// digital silence elsewhere. Words get 5 ms fades.
inline AudioBuffer speak(const Alignment& al, double total, int sr = 16000,
                         double f0 = 180.0) {
  std::vector<float> out(static_cast<std::size_t>(std::lround(total * sr)), 0.0f);
  const auto v = voice([f0](double) { return f0; }, total, sr);
  const auto fade = static_cast<std::size_t>(0.005 * sr);
  for (const auto& w : al.words()) {
    const auto span = to_samples(w.onset, w.offset, sr);
    for (std::size_t i = span.begin; i < span.end && i < out.size(); ++i) {
      const std::size_t edge = std::min(i - span.begin, span.end - 1 - i);
      const double g = edge >= fade ? 1.0 : 0.5 - 0.5 * std::cos(std::numbers::pi * edge / fade);
      out[i] = static_cast<float>(v[i] * g);
    }
  }
  return AudioBuffer(std::move(out), sr, 1);
}

// Five-word statement from 0.1 s, `gap` seconds of silence, nine-word
// question; every word lasts 0.2 s.
inline Alignment two_sentence_turn(double gap) {
  const char* st[] = {"Yes", "that", "time", "will", "work."};
  const char* q[] = {"Would", "you", "like", "me", "to", "book", "it", "for", "you?"};
  std::vector<AlignedWord> words;
  double t = 0.1;
  for (const char* w : st) {
    words.push_back({w, t, t + 0.2});
    t += 0.2;
  }
  const double se = t;
  t += gap;
  const double qs = t;
  for (const char* w : q) {
    words.push_back({w, t, t + 0.2});
    t += 0.2;
  }
  return Alignment(std::move(words), TurnMarkers{se, qs, t});
}

}  // namespace vapeval::testing

#endif  // VAPEVAL_TESTS_SYNTH_H_
