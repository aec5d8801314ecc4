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

#include "vapeval/codec.h"

#include <random>
#include <stdexcept>

#include "doctest.h"
#include "vapeval/errors.h"

using namespace vapeval;

namespace {

// Independent oracle: a bin is active when speech covers more than half of
// its time span. Works on seconds, not on frames.
bool bin_active_by_time(double on, double off, double bin_start,
                        double bin_end) {
  const double overlap =
      std::max(0.0, std::min(off, bin_end) - std::max(on, bin_start));
  return overlap > 0.5 * (bin_end - bin_start);
}

VaWindow window_from_intervals(const CodecConfig& cfg, double agent_on,
                               double agent_off, double user_on,
                               double user_off) {
  VaWindow w = VaWindow::Silent(cfg.horizon_frames());
  for (int f = 0; f < cfg.horizon_frames(); ++f) {
    const double t = (f + 0.5) / cfg.frame_rate();
    w.frames[0][f] = t >= agent_on && t < agent_off;
    w.frames[1][f] = t >= user_on && t < user_off;
  }
  return w;
}

}  // namespace

TEST_CASE("bin frame spans at 50 Hz") {
  const auto s = bin_frame_spans(CodecConfig());
  CHECK(s[0] == FrameSpan{0, 10});
  CHECK(s[1] == FrameSpan{10, 30});
  CHECK(s[2] == FrameSpan{30, 60});
  CHECK(s[3] == FrameSpan{60, 100});
  CHECK(CodecConfig().horizon_frames() == 100);
  CHECK(CodecConfig().horizon() == doctest::Approx(2.0));
}

TEST_CASE("bin frame spans at 100 Hz and 25 Hz") {
  const auto s100 = bin_frame_spans(CodecConfig(100.0));
  CHECK(s100[0] == FrameSpan{0, 20});
  CHECK(s100[1] == FrameSpan{20, 60});
  CHECK(s100[2] == FrameSpan{60, 120});
  CHECK(s100[3] == FrameSpan{120, 200});

  // 0.2 s x 25 Hz = 5 frames: integral, so 25 Hz is a valid rate.
  const auto s25 = bin_frame_spans(CodecConfig(25.0));
  CHECK(s25[0] == FrameSpan{0, 5});
  CHECK(s25[1] == FrameSpan{5, 15});
  CHECK(s25[2] == FrameSpan{15, 30});
  CHECK(s25[3] == FrameSpan{30, 50});
}

TEST_CASE("frame rates that split a bin are rejected") {
  CHECK_THROWS_AS(CodecConfig(33.0), ValidationError);
  CHECK_THROWS_AS(CodecConfig(0.0), ValidationError);
  CHECK_THROWS_AS(CodecConfig(-50.0), ValidationError);
}

TEST_CASE("encode_window examples") {
  const CodecConfig cfg;
  CHECK(encode_window(VaWindow::Silent(100), cfg).value() == 0);

  auto agent_only = VaWindow::Silent(100);
  agent_only.frames[0].assign(100, true);
  CHECK(encode_window(agent_only, cfg).value() == 240);

  // agent in frames [30, 100) = [0.6, 2.0) s, user in [0, 30) = [0, 0.6) s.
  const auto w = window_from_intervals(cfg, 0.6, 2.0, 0.0, 0.6);
  int expected = 0;
  const double edges[] = {0.0, 0.2, 0.6, 1.2, 2.0};
  for (int i = 0; i < 4; ++i) {
    if (bin_active_by_time(0.6, 2.0, edges[i], edges[i + 1]))
      expected |= 1 << (7 - i);
    if (bin_active_by_time(0.0, 0.6, edges[i], edges[i + 1]))
      expected |= 1 << (3 - i);
  }
  CHECK(expected == 60);
  CHECK(encode_window(w, cfg).value() == expected);
}

TEST_CASE("majority tie is inactive") {
  const CodecConfig cfg;
  auto w = VaWindow::Silent(100);
  for (int f = 0; f < 5; ++f) w.frames[0][f] = true;  // 5 of 10 in bin 0
  CHECK(encode_window(w, cfg).value() == 0);
  w.frames[0][5] = true;  // 6 of 10
  CHECK(encode_window(w, cfg).value() == 128);
}

TEST_CASE("wrong window length is a dimension error") {
  CHECK_THROWS_AS(encode_window(VaWindow::Silent(99), CodecConfig()),
                  std::invalid_argument);
  auto w = VaWindow::Silent(100);
  w.frames[1].resize(101);
  CHECK_THROWS_AS(encode_window(w, CodecConfig()), std::invalid_argument);
}

TEST_CASE("decode_label examples") {
  const auto all = decode_label(VapLabel(255));
  for (int s = 0; s < 2; ++s)
    for (int i = 0; i < 4; ++i) CHECK(all.bins[s][i]);

  const auto b240 = decode_label(VapLabel(240));
  CHECK(b240.bins[0] == std::array<bool, 4>{true, true, true, true});
  CHECK(b240.bins[1] == std::array<bool, 4>{false, false, false, false});

  const auto b60 = decode_label(VapLabel(60));
  CHECK(b60.bins[0] == std::array<bool, 4>{false, false, true, true});
  CHECK(b60.bins[1] == std::array<bool, 4>{true, true, false, false});
}

TEST_CASE("labels outside [0, 255] are domain errors") {
  CHECK_THROWS_AS(VapLabel(256), std::out_of_range);
  CHECK_THROWS_AS(VapLabel(-1), std::out_of_range);
}

TEST_CASE("exhaustive round trip through synthesized windows") {
  for (double rate : {25.0, 50.0, 100.0}) {
    const CodecConfig cfg(rate);
    const auto spans = bin_frame_spans(cfg);
    for (int y = 0; y < kNumLabels; ++y) {
      const auto bins = decode_label(VapLabel(y));
      auto w = VaWindow::Silent(cfg.horizon_frames());
      for (int s = 0; s < 2; ++s)
        for (int i = 0; i < 4; ++i)
          for (int f = spans[i].begin; f < spans[i].end; ++f)
            w.frames[s][f] = bins.bins[s][i];
      REQUIRE(encode_window(w, cfg).value() == y);
      CHECK(encode_bins(bins).value() == y);
    }
  }
}

TEST_CASE("adding active frames never clears a bin") {
  const CodecConfig cfg;
  std::mt19937 rng(7);
  std::bernoulli_distribution coin(0.5);
  std::uniform_int_distribution<int> frame(0, 99);
  for (int trial = 0; trial < 500; ++trial) {
    auto w = VaWindow::Silent(100);
    for (int s = 0; s < 2; ++s)
      for (int f = 0; f < 100; ++f) w.frames[s][f] = coin(rng);
    const int before = encode_window(w, cfg).value();
    const int speaker = trial % 2;
    for (int k = 0; k < 10; ++k) w.frames[speaker][frame(rng)] = true;
    const int after = encode_window(w, cfg).value();
    const int mask = speaker == 0 ? 0xf0 : 0x0f;
    CHECK((before & mask & ~after) == 0);
    CHECK((before & ~mask) == (after & ~mask));
  }
}

TEST_CASE("swap_channels exchanges nibbles") {
  CHECK(swap_channels(VapLabel(240)).value() == 15);
  CHECK(swap_channels(VapLabel(60)).value() == 195);
  for (int y = 0; y < kNumLabels; ++y) {
    CHECK(swap_channels(swap_channels(VapLabel(y))).value() == y);
  }
}
