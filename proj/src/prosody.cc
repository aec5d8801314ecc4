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

#include "vapeval/prosody.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "vapeval/errors.h"

namespace vapeval {

namespace {

constexpr double kFrameSeconds = 0.030;
constexpr double kToleranceSeconds = 0.012;
// Voiced runs shorter than this are left as they are.
constexpr double kMinRunSeconds = 0.020;

void check_mono_span(const AudioBuffer& audio, SampleSpan span,
                     const char* what) {
  if (audio.channels() != 1) {
    throw ValidationError(std::string(what) + " expects mono audio");
  }
  if (span.end > audio.frames() || span.begin >= span.end) {
    throw ValidationError(std::string(what) + ": span [" +
                          std::to_string(span.begin) + ", " +
                          std::to_string(span.end) +
                          ") is empty or outside the audio (" +
                          std::to_string(audio.frames()) + " samples)");
  }
}

std::vector<float> linear_resize(std::span<const float> in,
                                 std::size_t out_len) {
  std::vector<float> out(out_len);
  if (out_len == 1 || in.size() == 1) {
    std::fill(out.begin(), out.end(), in.front());
    return out;
  }
  const double step = static_cast<double>(in.size() - 1) / (out_len - 1);
  for (std::size_t i = 0; i < out_len; ++i) {
    const double pos = i * step;
    const auto k = std::min(static_cast<std::size_t>(pos), in.size() - 2);
    const double t = pos - k;
    out[i] = static_cast<float>(in[k] + t * (in[k + 1] - in[k]));
  }
  return out;
}

// Catmull-Rom interpolation with edge clamping.
double cubic_at(std::span<const float> x, double pos) {
  const auto n = static_cast<long>(x.size());
  const long i = static_cast<long>(std::floor(pos));
  const double t = pos - i;
  auto at = [&](long k) { return static_cast<double>(x[std::clamp(k, 0L, n - 1)]); };
  const double p0 = at(i - 1), p1 = at(i), p2 = at(i + 1), p3 = at(i + 2);
  return p1 + 0.5 * t *
                  (p2 - p0 +
                   t * (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3 +
                        t * (3.0 * (p1 - p2) + p3 - p0)));
}

}  // namespace

std::vector<float> wsola(std::span<const float> in, std::size_t out_len,
                         int sample_rate) {
  const std::size_t len = in.size();
  if (out_len == 0 || len == 0) return std::vector<float>(out_len, 0.0f);
  if (out_len == len) return {in.begin(), in.end()};

  std::size_t frame = static_cast<std::size_t>(std::lround(kFrameSeconds * sample_rate));
  frame = std::min({frame, len, out_len}) & ~std::size_t{1};
  if (frame < 16) return linear_resize(in, out_len);
  const std::size_t hop = frame / 2;
  const long tolerance = std::lround(kToleranceSeconds * sample_rate);

  std::vector<double> window(frame);
  for (std::size_t j = 0; j < frame; ++j) {
    window[j] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * (j + 0.5) / frame);
  }

  std::vector<std::size_t> starts;
  for (std::size_t s = 0; s + frame < out_len; s += hop) starts.push_back(s);
  if (starts.empty() || starts.back() != out_len - frame) {
    starts.push_back(out_len - frame);
  }

  const double alpha = out_len == frame
                           ? 0.0
                           : static_cast<double>(len - frame) / (out_len - frame);
  const long max_start = static_cast<long>(len - frame);

  std::vector<double> acc(out_len, 0.0), wsum(out_len, 0.0);
  long prev_a = 0;
  for (std::size_t k = 0; k < starts.size(); ++k) {
    const std::size_t s = starts[k];
    const bool first = k == 0;
    const bool last = k + 1 == starts.size();
    long a = 0;
    if (last) {
      a = max_start;
    } else if (!first) {
      const long nominal = std::lround(s * alpha);
      const long natural = std::min(
          prev_a + static_cast<long>(s - starts[k - 1]), max_start);
      double best = -std::numeric_limits<double>::infinity();
      a = std::clamp(nominal, 0L, max_start);
      for (long c = std::max(0L, nominal - tolerance);
           c <= std::min(max_start, nominal + tolerance); ++c) {
        double xc = 0.0, ee = 0.0;
        for (std::size_t j = 0; j < frame; ++j) {
          xc += static_cast<double>(in[c + j]) * in[natural + j];
          ee += static_cast<double>(in[c + j]) * in[c + j];
        }
        const double score = ee > 0.0 ? xc / std::sqrt(ee) : 0.0;
        if (score > best) {
          best = score;
          a = c;
        }
      }
    }
    for (std::size_t j = 0; j < frame; ++j) {
      double w = window[j];
      if ((first && j < hop) || (last && j >= hop)) w = 1.0;
      acc[s + j] += w * in[a + j];
      wsum[s + j] += w;
    }
    prev_a = a;
  }

  std::vector<float> out(out_len);
  for (std::size_t i = 0; i < out_len; ++i) {
    out[i] = static_cast<float>(wsum[i] > 0.0 ? acc[i] / wsum[i] : 0.0);
  }
  return out;
}

EditResult stretch(const AudioBuffer& audio, SampleSpan span, double factor) {
  check_mono_span(audio, span, "stretch");
  if (!(factor >= 1.0) || !std::isfinite(factor)) {
    throw ValidationError("stretch factor must be >= 1 (compression is not "
                          "supported)");
  }
  if (factor == 1.0) return {audio, 0, {}};
  const auto& x = audio.samples();
  const std::size_t len = span.size();
  const auto out_len = static_cast<std::size_t>(std::llround(len * factor));
  const auto seg = wsola(std::span<const float>(x).subspan(span.begin, len),
                         out_len, audio.sample_rate());
  std::vector<float> out;
  out.reserve(x.size() - len + out_len);
  out.insert(out.end(), x.begin(), x.begin() + static_cast<long>(span.begin));
  out.insert(out.end(), seg.begin(), seg.end());
  out.insert(out.end(), x.begin() + static_cast<long>(span.end), x.end());
  return {AudioBuffer(std::move(out), audio.sample_rate(), 1), 0, {}};
}

double span_mean_f0(const AudioBuffer& audio, SampleSpan span,
                    const F0Options& f0) {
  const auto contour = estimate_f0(audio, f0);
  double sum = 0.0;
  int n = 0;
  for (std::size_t i = 0; i < contour.frames.size(); ++i) {
    const auto c = contour.center(i);
    if (c >= span.begin && c < span.end && contour.frames[i].voiced()) {
      sum += contour.frames[i].f0;
      ++n;
    }
  }
  return n ? sum / n : 0.0;
}

EditResult flatten_pitch(const AudioBuffer& audio, SampleSpan span,
                         double target_hz, const F0Options& f0) {
  check_mono_span(audio, span, "flatten_pitch");
  if (!(target_hz >= f0.min_f0 && target_hz <= f0.max_f0)) {
    throw ValidationError("pitch target " + std::to_string(target_hz) +
                          " Hz outside estimator range");
  }
  const auto contour = estimate_f0(audio, f0);
  const int sr = audio.sample_rate();
  const auto min_run = static_cast<std::size_t>(std::lround(kMinRunSeconds * sr));
  const auto& x = audio.samples();
  std::vector<float> out = x;
  EditResult result{audio, 0, {}};

  bool any_voiced = false;
  std::size_t i = span.begin;
  while (i < span.end) {
    if (!contour.voiced_at(static_cast<double>(i))) {
      ++i;
      continue;
    }
    std::size_t run_end = i;
    while (run_end < span.end && contour.voiced_at(static_cast<double>(run_end))) {
      ++run_end;
    }
    any_voiced = true;
    if (run_end - i >= min_run) {
      std::vector<float> warped;
      const double last = static_cast<double>(run_end - 1);
      for (double pos = static_cast<double>(i); pos <= last;) {
        warped.push_back(static_cast<float>(cubic_at(x, pos)));
        const double hz = contour.f0_at(pos);
        pos += hz > 0.0 ? target_hz / hz : 1.0;
      }
      const auto seg = wsola(warped, run_end - i, sr);
      std::copy(seg.begin(), seg.end(), out.begin() + static_cast<long>(i));
    } else {
      result.warnings.push_back("voiced run of " + std::to_string(run_end - i) +
                                " samples too short to flatten; left as is");
    }
    i = run_end;
  }
  if (!any_voiced) {
    result.warnings.push_back("span is fully unvoiced; pitch left unchanged");
    return result;
  }
  result.audio = AudioBuffer(std::move(out), sr, 1);
  return result;
}

EditResult apply_gain(const AudioBuffer& audio, SampleSpan span,
                      double gain_db) {
  check_mono_span(audio, span, "apply_gain");
  if (!std::isfinite(gain_db)) throw ValidationError("gain must be finite");
  if (gain_db == 0.0) return {audio, 0, {}};
  const double g = std::pow(10.0, gain_db / 20.0);
  std::vector<float> out = audio.samples();
  std::size_t clipped = 0;
  for (std::size_t i = span.begin; i < span.end; ++i) {
    const double v = out[i] * g;
    if (v > 1.0 || v < -1.0) ++clipped;
    out[i] = static_cast<float>(std::clamp(v, -1.0, 1.0));
  }
  EditResult r{AudioBuffer(std::move(out), audio.sample_rate(), 1), clipped, {}};
  if (clipped) {
    r.warnings.push_back(std::to_string(clipped) + " samples clipped");
  }
  return r;
}

void ManipulationParams::validate() const {
  if (!(stretch_factor >= 1.0) || !std::isfinite(stretch_factor)) {
    throw ValidationError("stretch_factor must be >= 1");
  }
  if (!std::isfinite(gain_db)) throw ValidationError("gain_db must be finite");
  if (pitch_target.kind == PitchTarget::Kind::kFixed &&
      !(pitch_target.hz > 0.0)) {
    throw ValidationError("fixed pitch target must be positive");
  }
}

ManipulatedTurn manipulate_final_syllable(const AudioBuffer& audio,
                                          const Alignment& alignment,
                                          const ManipulationParams& params,
                                          const F0Options& f0) {
  params.validate();
  const int sr = audio.sample_rate();
  const std::size_t k = alignment.last_statement_word();
  const auto& word = alignment.words()[k];
  SampleSpan span = to_samples(word.onset, word.offset, sr);
  span.end = std::min(span.end, audio.frames());
  if (span.size() == 0) {
    throw ValidationError("last statement word '" + word.word +
                          "' has an empty span");
  }

  auto stretched = stretch(audio, span, params.stretch_factor);
  const std::size_t new_len = static_cast<std::size_t>(
      std::llround(span.size() * params.stretch_factor));
  const SampleSpan edited{span.begin, span.begin + new_len};

  double target = params.pitch_target.hz;
  if (params.pitch_target.kind == PitchTarget::Kind::kSpanMean) {
    target = span_mean_f0(stretched.audio, edited, f0);
  }
  std::vector<std::string> warnings = std::move(stretched.warnings);
  AudioBuffer current = std::move(stretched.audio);
  if (target > 0.0) {
    auto flat = flatten_pitch(current, edited, target, f0);
    warnings.insert(warnings.end(), flat.warnings.begin(), flat.warnings.end());
    current = std::move(flat.audio);
  } else {
    warnings.push_back("no voiced frames in final word; pitch left unchanged");
  }
  auto gained = apply_gain(current, edited, params.gain_db);
  warnings.insert(warnings.end(), gained.warnings.begin(), gained.warnings.end());

  const double delta =
      (static_cast<double>(new_len) - static_cast<double>(span.size())) / sr;
  std::vector<AlignedWord> words = alignment.words();
  words[k].offset += delta;
  for (std::size_t i = k + 1; i < words.size(); ++i) {
    words[i].onset += delta;
    words[i].offset += delta;
  }
  TurnMarkers m = alignment.markers();
  m.statement_end += delta;
  m.question_start += delta;
  m.question_end += delta;

  ManipulatedTurn out{
      {std::move(gained.audio), gained.clipped_samples, std::move(warnings)},
      Alignment(std::move(words), m),
      edited,
      target};
  return out;
}

}  // namespace vapeval
