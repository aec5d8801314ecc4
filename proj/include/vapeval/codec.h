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

#ifndef VAPEVAL_CODEC_H_
#define VAPEVAL_CODEC_H_

// Discrete voice-activity projection states.
//
// The joint activity of two speakers over the next 2 s is summarised by
// eight bins, four per speaker, of 0.2, 0.4, 0.6 and 0.8 s. A bin is active
// when strictly more than half of its frames carry voice activity. The eight
// bits pack into a label in [0, 255]:
//
//   bit 7 6 5 4 | 3 2 1 0
//       agent   | user
//       b0..b3  | b0..b3      (b0 = nearest future bin)
//
// so label 240 reads "agent active across the whole horizon".

#include <array>
#include <cstdint>
#include <vector>

namespace vapeval {

inline constexpr int kBinsPerSpeaker = 4;
inline constexpr int kNumSpeakers = 2;
inline constexpr int kNumLabels = 256;

enum class Speaker { kAgent = 0, kUser = 1 };

// Half-open frame range [begin, end).
struct FrameSpan {
  int begin = 0;
  int end = 0;

  int size() const { return end - begin; }
  bool empty() const { return end <= begin; }
  bool operator==(const FrameSpan&) const = default;
};

class CodecConfig {
 public:
  static constexpr std::array<double, kBinsPerSpeaker> kBinDurations = {
      0.2, 0.4, 0.6, 0.8};

  // Throws ValidationError unless frame_rate > 0 and every bin covers an
  // integral number of frames.
  explicit CodecConfig(double frame_rate = 50.0);

  double frame_rate() const { return frame_rate_; }
  double horizon() const;
  int horizon_frames() const { return horizon_frames_; }
  const std::array<int, kBinsPerSpeaker>& bin_frames() const {
    return bin_frames_;
  }

 private:
  double frame_rate_;
  std::array<int, kBinsPerSpeaker> bin_frames_{};
  int horizon_frames_ = 0;
};

// bins[speaker][bin]; speaker 0 is the agent channel.
struct BinMatrix {
  std::array<std::array<bool, kBinsPerSpeaker>, kNumSpeakers> bins{};

  bool at(Speaker s, int bin) const {
    return bins[static_cast<int>(s)][bin];
  }
  bool operator==(const BinMatrix&) const = default;
};

class VapLabel {
 public:
  // Throws std::out_of_range outside [0, 255].
  explicit VapLabel(int value);

  int value() const { return value_; }
  bool operator==(const VapLabel&) const = default;

 private:
  std::uint8_t value_;
};

// Per-frame voice activity for both speakers over one projection horizon.
struct VaWindow {
  std::array<std::vector<bool>, kNumSpeakers> frames;

  // An all-silent window of the given length.
  static VaWindow Silent(int num_frames);
};

// Contiguous frame ranges of the four bins, covering [0, horizon_frames).
std::array<FrameSpan, kBinsPerSpeaker> bin_frame_spans(const CodecConfig& cfg);

// Throws std::invalid_argument if either channel does not hold exactly
// cfg.horizon_frames() frames.
VapLabel encode_window(const VaWindow& window, const CodecConfig& cfg);

VapLabel encode_bins(const BinMatrix& bins);
BinMatrix decode_label(VapLabel label);

// The label with the agent and user nibbles exchanged.
VapLabel swap_channels(VapLabel label);

}  // namespace vapeval

#endif  // VAPEVAL_CODEC_H_
