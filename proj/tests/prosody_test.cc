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

#include <cstring>

#include "doctest.h"
#include "synth.h"
#include "vapeval/audio_ops.h"
#include "vapeval/errors.h"
#include "vapeval/f0.h"

using namespace vapeval;
using namespace vapeval::testing;

namespace {

constexpr int kSr = 16000;

struct PitchStats {
  int frames = 0;
  double mean_hz = 0.0;
  double rms_cents = 0.0;  // around `ref`
};

// Voiced frames whose analysis window lies inside [begin, end).
PitchStats pitch_in(const AudioBuffer& a, std::size_t begin, std::size_t end,
                    double ref) {
  const auto c = estimate_f0(a);
  PitchStats s;
  double sq = 0.0;
  for (auto i : c.frames_within(begin, end)) {
    if (!c.frames[i].voiced()) continue;
    ++s.frames;
    s.mean_hz += c.frames[i].f0;
    const double d = cents(c.frames[i].f0, ref);
    sq += d * d;
  }
  if (s.frames) {
    s.mean_hz /= s.frames;
    s.rms_cents = std::sqrt(sq / s.frames);
  }
  return s;
}

bool same(const std::vector<float>& a, std::size_t a0, const std::vector<float>& b,
          std::size_t b0, std::size_t n) {
  return a0 + n <= a.size() && b0 + n <= b.size() &&
         std::memcmp(a.data() + a0, b.data() + b0, n * sizeof(float)) == 0;
}

double db(double ratio) { return 20.0 * std::log10(ratio); }

}  // namespace

TEST_CASE("F0 of a pure tone and a sawtooth") {
  const AudioBuffer t(tone(220.0, 0.5), kSr);
  const auto s = pitch_in(t, 0, t.frames(), 220.0);
  CHECK(s.frames > 30);
  CHECK(s.mean_hz == doctest::Approx(220.0).epsilon(1.0 / 220.0));
  CHECK(s.rms_cents < 5.0);

  const AudioBuffer saw(sawtooth(100.0, 0.5), kSr);
  const auto ss = pitch_in(saw, 0, saw.frames(), 100.0);
  CHECK(ss.frames > 30);
  CHECK(ss.mean_hz == doctest::Approx(100.0).epsilon(0.01));
}

TEST_CASE("F0 estimator edge cases") {
  const AudioBuffer silence(std::vector<float>(8000, 0.0f), kSr);
  for (const auto& f : estimate_f0(silence).frames) CHECK_FALSE(f.voiced());
  const AudioBuffer tiny(std::vector<float>(100, 0.1f), kSr);
  CHECK_THROWS_AS(estimate_f0(tiny), ValidationError);
  const AudioBuffer low(tone(40.0, 0.5), kSr);  // below the 60 Hz floor
  for (const auto& f : estimate_f0(low).frames) {
    if (f.voiced()) {
      CHECK(f.f0 >= 60.0);
      CHECK(f.f0 <= 400.0);
    }
  }
}

TEST_CASE("flattening a chirp") {
  // 180 -> 240 Hz linear glide over 0.8 s; flatten [0.15, 0.65) s.
  const AudioBuffer chirp(voice([](double t) { return 180.0 + 75.0 * t; }, 0.8), kSr);
  const SampleSpan span{2400, 10400};
  const double target = span_mean_f0(chirp, span);
  CHECK(target == doctest::Approx(210.0).epsilon(0.02));

  const auto r = flatten_pitch(chirp, span, target);
  REQUIRE(r.audio.frames() == chirp.frames());
  const auto before = pitch_in(chirp, span.begin, span.end, target);
  const auto after = pitch_in(r.audio, span.begin, span.end, target);
  CHECK(before.rms_cents > 50.0);
  CHECK(after.frames > 30);
  CHECK(after.rms_cents < 5.0);
  CHECK(same(r.audio.samples(), 0, chirp.samples(), 0, span.begin));
  CHECK(same(r.audio.samples(), span.end, chirp.samples(), span.end,
             chirp.frames() - span.end));
}

TEST_CASE("flattening a steady tone at its own pitch is harmless") {
  const AudioBuffer v(voice([](double) { return 200.0; }, 0.6), kSr);
  const auto r = flatten_pitch(v, {1600, 8000}, 200.0);
  const auto s = pitch_in(r.audio, 1600, 8000, 200.0);
  CHECK(s.rms_cents < 5.0);
}

TEST_CASE("flattening unvoiced or invalid spans") {
  std::vector<float> x(8000, 0.0f);
  const AudioBuffer silent(x, kSr);
  const auto r = flatten_pitch(silent, {1000, 7000}, 200.0);
  CHECK(r.audio == silent);
  REQUIRE(r.warnings.size() == 1);
  CHECK(r.warnings[0].find("unvoiced") != std::string::npos);
  CHECK_THROWS_AS(flatten_pitch(silent, {1000, 7000}, 20.0), ValidationError);
  CHECK_THROWS_AS(flatten_pitch(silent, {7000, 9000}, 200.0), ValidationError);
}

TEST_CASE("stretching a tone") {
  const AudioBuffer t(tone(220.0, 1.0), kSr);
  const SampleSpan span{6400, 9600};  // 200 ms
  const auto r = stretch(t, span, 1.5);
  const std::size_t new_len = r.audio.frames() - (t.frames() - span.size());
  CHECK(static_cast<double>(new_len) / span.size() == doctest::Approx(1.5).epsilon(0.02));
  CHECK(new_len == 4800);

  const auto s = pitch_in(r.audio, span.begin, span.begin + new_len, 220.0);
  CHECK(s.frames > 5);
  CHECK(s.rms_cents < 20.0);

  CHECK(same(r.audio.samples(), 0, t.samples(), 0, span.begin));
  CHECK(same(r.audio.samples(), span.begin + new_len, t.samples(), span.end,
             t.frames() - span.end));

  CHECK(stretch(t, span, 1.0).audio == t);
  CHECK_THROWS_AS(stretch(t, span, 0.8), ValidationError);
  CHECK_THROWS_AS(stretch(assemble_stereo(t), span, 1.5), ValidationError);
}

TEST_CASE("gain") {
  const AudioBuffer t(tone(300.0, 0.5, kSr, 0.3), kSr);
  const SampleSpan span{2000, 6000};
  const auto r = apply_gain(t, span, 3.0);
  const auto seg = [&](const AudioBuffer& a) {
    return rms(std::span<const float>(a.samples()).subspan(span.begin, span.size()));
  };
  const double ratio = seg(r.audio) / seg(t);
  CHECK(ratio == doctest::Approx(1.412).epsilon(0.01));
  CHECK(std::abs(db(ratio) - 3.0) < 0.5);
  CHECK(r.clipped_samples == 0);
  CHECK(same(r.audio.samples(), 0, t.samples(), 0, span.begin));
  CHECK(same(r.audio.samples(), span.end, t.samples(), span.end, t.frames() - span.end));
  CHECK(apply_gain(t, span, 0.0).audio == t);

  const AudioBuffer loud(tone(300.0, 0.5, kSr, 0.9), kSr);
  const auto c = apply_gain(loud, span, 20.0);
  CHECK(c.clipped_samples > 0);
  CHECK_FALSE(c.warnings.empty());
  for (float v : c.audio.samples()) CHECK(std::abs(v) <= 1.0f);

  // Louder settings never lower the span energy.
  double prev = 0.0;
  for (double g : {-6.0, -3.0, 0.0, 3.0, 6.0, 12.0}) {
    const double e = seg(apply_gain(t, span, g).audio);
    CHECK(e >= prev);
    prev = e;
  }
}

TEST_CASE("final-syllable manipulation") {
  const auto al = two_sentence_turn(0.4);
  const auto audio = speak(al, al.question_end() + 0.4);
  const auto m = manipulate_final_syllable(audio, al, ManipulationParams{});
  const auto& w = al.words()[4];
  const auto orig = to_samples(w.onset, w.offset, kSr);

  CHECK(m.span.begin == orig.begin);
  CHECK(static_cast<double>(m.span.size()) / orig.size() == doctest::Approx(1.5).epsilon(0.02));
  CHECK(m.target_hz == doctest::Approx(180.0).epsilon(0.01));

  const auto s = pitch_in(m.edit.audio, m.span.begin, m.span.end, m.target_hz);
  CHECK(s.frames > 5);
  CHECK(s.rms_cents < 5.0);

  // Compare the steady middle of the word before and after the edit.
  const auto inner = [](const AudioBuffer& a, SampleSpan sp) {
    const std::size_t pad = 160;
    return rms(std::span<const float>(a.samples()).subspan(sp.begin + pad, sp.size() - 2 * pad));
  };
  CHECK(std::abs(db(inner(m.edit.audio, m.span) / inner(audio, orig)) - 3.0) < 0.5);

  const double delta = 0.1;
  CHECK(m.alignment.words()[4].offset == doctest::Approx(w.offset + delta));
  CHECK(m.alignment.question_start() == doctest::Approx(al.question_start() + delta));
  CHECK(m.alignment.question_end() == doctest::Approx(al.question_end() + delta));
  CHECK(same(m.edit.audio.samples(), 0, audio.samples(), 0, orig.begin));
  CHECK(same(m.edit.audio.samples(), m.span.end, audio.samples(), orig.end,
             audio.frames() - orig.end));

  ManipulationParams identity;
  identity.gain_db = 0.0;
  identity.stretch_factor = 1.0;
  const auto id = manipulate_final_syllable(audio, al, identity);
  CHECK(id.edit.audio.frames() == audio.frames());
  const auto sid = pitch_in(id.edit.audio, orig.begin, orig.end, 180.0);
  CHECK(sid.rms_cents < 5.0);

  ManipulationParams bad;
  bad.stretch_factor = 0.5;
  CHECK_THROWS_AS(manipulate_final_syllable(audio, al, bad), ValidationError);
}
