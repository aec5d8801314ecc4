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

#ifndef VAPEVAL_AUDIO_H_
#define VAPEVAL_AUDIO_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace vapeval {

inline constexpr int kDefaultSampleRate = 16000;

// Interleaved PCM samples in [-1, 1].
class AudioBuffer {
 public:
  // Throws ValidationError when empty, when channels is not 1 or 2, when the
  // sample count is not a multiple of channels, or on NaN samples. Values
  // outside [-1, 1] are clamped.
  AudioBuffer(std::vector<float> samples, int sample_rate, int channels = 1);

  const std::vector<float>& samples() const { return samples_; }
  int sample_rate() const { return sample_rate_; }
  int channels() const { return channels_; }
  // Samples per channel.
  std::size_t frames() const { return samples_.size() / channels_; }
  double duration() const {
    return static_cast<double>(frames()) / sample_rate_;
  }
  std::vector<float> channel(int c) const;

  bool operator==(const AudioBuffer&) const = default;

 private:
  std::vector<float> samples_;
  int sample_rate_;
  int channels_;
};

// Half-open sample range.
struct SampleSpan {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const { return end > begin ? end - begin : 0; }
  bool operator==(const SampleSpan&) const = default;
};

SampleSpan to_samples(double onset, double offset, int sample_rate);

double rms(std::span<const float> samples);

// Reads a RIFF/WAVE file (PCM 8/16/24/32-bit or 32-bit float, including
// WAVE_FORMAT_EXTENSIBLE) and resamples to target_rate when it differs.
// Pass target_rate <= 0 to keep the file's rate. Throws InputError.
AudioBuffer read_wav(const std::string& path,
                     int target_rate = kDefaultSampleRate);
AudioBuffer decode_wav(std::string_view bytes,
                       int target_rate = kDefaultSampleRate);

// 16-bit PCM.
std::string encode_wav(const AudioBuffer& audio);
void write_wav(const AudioBuffer& audio, const std::string& path);

// Band-limited (Kaiser-windowed sinc) sample-rate conversion.
AudioBuffer resample(const AudioBuffer& audio, int target_rate);

}  // namespace vapeval

#endif  // VAPEVAL_AUDIO_H_
