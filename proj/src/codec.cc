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

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "vapeval/errors.h"

namespace vapeval {

namespace {

int bit_index(int speaker, int bin) {
  return 7 - (kBinsPerSpeaker * speaker + bin);
}

}  // namespace

CodecConfig::CodecConfig(double frame_rate) : frame_rate_(frame_rate) {
  if (!(frame_rate > 0.0) || !std::isfinite(frame_rate)) {
    throw ValidationError("codec frame rate must be positive, got " +
                          std::to_string(frame_rate));
  }
  for (int i = 0; i < kBinsPerSpeaker; ++i) {
    const double frames = kBinDurations[i] * frame_rate;
    const double rounded = std::round(frames);
    if (std::abs(frames - rounded) > 1e-6 || rounded < 1.0) {
      throw ValidationError("frame rate " + std::to_string(frame_rate) +
                            " Hz does not divide bin duration " +
                            std::to_string(kBinDurations[i]) +
                            " s into whole frames");
    }
    bin_frames_[i] = static_cast<int>(rounded);
  }
  horizon_frames_ = std::accumulate(bin_frames_.begin(), bin_frames_.end(), 0);
}

double CodecConfig::horizon() const {
  return std::accumulate(kBinDurations.begin(), kBinDurations.end(), 0.0);
}

VapLabel::VapLabel(int value) : value_(0) {
  if (value < 0 || value >= kNumLabels) {
    throw std::out_of_range("VAP label out of range [0, 255]: " +
                            std::to_string(value));
  }
  value_ = static_cast<std::uint8_t>(value);
}

VaWindow VaWindow::Silent(int num_frames) {
  VaWindow w;
  for (auto& channel : w.frames) channel.assign(num_frames, false);
  return w;
}

std::array<FrameSpan, kBinsPerSpeaker> bin_frame_spans(
    const CodecConfig& cfg) {
  std::array<FrameSpan, kBinsPerSpeaker> spans;
  int start = 0;
  for (int i = 0; i < kBinsPerSpeaker; ++i) {
    spans[i] = {start, start + cfg.bin_frames()[i]};
    start = spans[i].end;
  }
  return spans;
}

VapLabel encode_window(const VaWindow& window, const CodecConfig& cfg) {
  const int expected = cfg.horizon_frames();
  for (int s = 0; s < kNumSpeakers; ++s) {
    const auto got = window.frames[s].size();
    if (got != static_cast<std::size_t>(expected)) {
      throw std::invalid_argument(
          "VA window for speaker " + std::to_string(s) + " has " +
          std::to_string(got) + " frames, expected " +
          std::to_string(expected));
    }
  }
  const auto spans = bin_frame_spans(cfg);
  BinMatrix bins;
  for (int s = 0; s < kNumSpeakers; ++s) {
    const auto& channel = window.frames[s];
    for (int i = 0; i < kBinsPerSpeaker; ++i) {
      int active = 0;
      for (int f = spans[i].begin; f < spans[i].end; ++f) active += channel[f];
      // Strict majority; exactly half is inactive.
      bins.bins[s][i] = 2 * active > spans[i].size();
    }
  }
  return encode_bins(bins);
}

VapLabel encode_bins(const BinMatrix& bins) {
  int value = 0;
  for (int s = 0; s < kNumSpeakers; ++s) {
    for (int i = 0; i < kBinsPerSpeaker; ++i) {
      if (bins.bins[s][i]) value |= 1 << bit_index(s, i);
    }
  }
  return VapLabel(value);
}

BinMatrix decode_label(VapLabel label) {
  BinMatrix bins;
  for (int s = 0; s < kNumSpeakers; ++s) {
    for (int i = 0; i < kBinsPerSpeaker; ++i) {
      bins.bins[s][i] = (label.value() >> bit_index(s, i)) & 1;
    }
  }
  return bins;
}

VapLabel swap_channels(VapLabel label) {
  const int v = label.value();
  return VapLabel(((v & 0x0f) << 4) | ((v >> 4) & 0x0f));
}

}  // namespace vapeval
