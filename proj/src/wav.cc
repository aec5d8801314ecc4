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

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <numbers>

#include "vapeval/audio.h"
#include "vapeval/csv.h"
#include "vapeval/errors.h"

namespace vapeval {

namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xfffe;

std::uint32_t le32(std::string_view b, std::size_t at) {
  return static_cast<std::uint32_t>(static_cast<unsigned char>(b[at])) |
         static_cast<std::uint32_t>(static_cast<unsigned char>(b[at + 1])) << 8 |
         static_cast<std::uint32_t>(static_cast<unsigned char>(b[at + 2])) << 16 |
         static_cast<std::uint32_t>(static_cast<unsigned char>(b[at + 3])) << 24;
}

std::uint16_t le16(std::string_view b, std::size_t at) {
  return static_cast<std::uint16_t>(
      static_cast<unsigned char>(b[at]) |
      static_cast<unsigned char>(b[at + 1]) << 8);
}

void put16(std::string& out, std::uint16_t v) {
  out += static_cast<char>(v & 0xff);
  out += static_cast<char>(v >> 8);
}

void put32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out += static_cast<char>((v >> (8 * i)) & 0xff);
}

// Zeroth-order modified Bessel function, for the Kaiser window.
double bessel_i0(double x) {
  double sum = 1.0, term = 1.0;
  const double q = x * x / 4.0;
  for (int k = 1; k < 50; ++k) {
    term *= q / (static_cast<double>(k) * k);
    sum += term;
    if (term < 1e-12 * sum) break;
  }
  return sum;
}

}  // namespace

AudioBuffer::AudioBuffer(std::vector<float> samples, int sample_rate,
                         int channels)
    : samples_(std::move(samples)),
      sample_rate_(sample_rate),
      channels_(channels) {
  if (channels_ != 1 && channels_ != 2) {
    throw ValidationError("audio must have 1 or 2 channels, got " +
                          std::to_string(channels_));
  }
  if (sample_rate_ <= 0) throw ValidationError("sample rate must be positive");
  if (samples_.empty()) throw ValidationError("audio buffer is empty");
  if (samples_.size() % channels_ != 0) {
    throw ValidationError("sample count is not a multiple of channel count");
  }
  for (auto& s : samples_) {
    if (std::isnan(s)) throw ValidationError("audio contains NaN samples");
    s = std::clamp(s, -1.0f, 1.0f);
  }
}

std::vector<float> AudioBuffer::channel(int c) const {
  if (c < 0 || c >= channels_) throw std::out_of_range("no such channel");
  std::vector<float> out(frames());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = samples_[i * channels_ + c];
  }
  return out;
}

SampleSpan to_samples(double onset, double offset, int sample_rate) {
  const auto b = std::llround(std::max(0.0, onset) * sample_rate);
  const auto e = std::llround(std::max(0.0, offset) * sample_rate);
  return {static_cast<std::size_t>(b), static_cast<std::size_t>(e)};
}

double rms(std::span<const float> samples) {
  if (samples.empty()) return 0.0;
  double acc = 0.0;
  for (float s : samples) acc += static_cast<double>(s) * s;
  return std::sqrt(acc / samples.size());
}

AudioBuffer decode_wav(std::string_view b, int target_rate) {
  if (b.size() < 12 || b.substr(0, 4) != "RIFF" || b.substr(8, 4) != "WAVE") {
    throw InputError("not a RIFF/WAVE file");
  }
  std::uint16_t format = 0, channels = 0, bits = 0, block_align = 0;
  std::uint32_t rate = 0;
  bool have_fmt = false;
  std::string_view data;
  bool have_data = false;

  std::size_t pos = 12;
  while (pos + 8 <= b.size()) {
    const auto id = b.substr(pos, 4);
    const std::size_t size = le32(b, pos + 4);
    const std::size_t body = pos + 8;
    const std::size_t avail = std::min(size, b.size() - body);
    if (id == "fmt ") {
      if (avail < 16) throw InputError("WAV fmt chunk too short");
      format = le16(b, body);
      channels = le16(b, body + 2);
      rate = le32(b, body + 4);
      block_align = le16(b, body + 12);
      bits = le16(b, body + 14);
      if (format == kFormatExtensible) {
        if (avail < 26) throw InputError("WAV extensible fmt chunk too short");
        format = le16(b, body + 24);
      }
      have_fmt = true;
    } else if (id == "data") {
      data = b.substr(body, avail);  // tolerate truncated data chunks
      have_data = true;
    }
    pos = body + size + (size & 1);
  }
  if (!have_fmt) throw InputError("WAV has no fmt chunk");
  if (!have_data) throw InputError("WAV has no data chunk");
  if (channels < 1 || channels > 2) {
    throw InputError("WAV has " + std::to_string(channels) +
                     " channels; only mono and stereo are supported");
  }
  if (rate == 0) throw InputError("WAV sample rate is zero");
  const int bytes_per = bits / 8;
  const bool pcm_ok = format == kFormatPcm &&
                      (bits == 8 || bits == 16 || bits == 24 || bits == 32);
  const bool float_ok = format == kFormatFloat && bits == 32;
  if (!pcm_ok && !float_ok) {
    throw InputError("unsupported WAV encoding (format " +
                     std::to_string(format) + ", " + std::to_string(bits) +
                     " bits)");
  }
  if (block_align != bytes_per * channels) {
    throw InputError("WAV block alignment does not match format");
  }
  const std::size_t count = data.size() / bytes_per / channels * channels;
  if (count == 0) throw InputError("WAV data chunk is empty");

  std::vector<float> samples(count);
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t at = i * bytes_per;
    double v = 0.0;
    if (float_ok) {
      v = std::bit_cast<float>(le32(data, at));
    } else if (bits == 8) {
      v = (static_cast<unsigned char>(data[at]) - 128) / 128.0;
    } else if (bits == 16) {
      v = static_cast<std::int16_t>(le16(data, at)) / 32768.0;
    } else if (bits == 24) {
      std::int32_t x = static_cast<unsigned char>(data[at]) |
                       static_cast<unsigned char>(data[at + 1]) << 8 |
                       static_cast<unsigned char>(data[at + 2]) << 16;
      if (x & 0x800000) x -= 0x1000000;
      v = x / 8388608.0;
    } else {
      v = static_cast<std::int32_t>(le32(data, at)) / 2147483648.0;
    }
    samples[i] = static_cast<float>(v);
  }
  AudioBuffer audio(std::move(samples), static_cast<int>(rate), channels);
  if (target_rate > 0 && target_rate != audio.sample_rate()) {
    return resample(audio, target_rate);
  }
  return audio;
}

AudioBuffer read_wav(const std::string& path, int target_rate) {
  const auto bytes = read_file(path);
  try {
    return decode_wav(bytes, target_rate);
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  } catch (const ValidationError& e) {
    throw InputError(path + ": " + e.what());
  }
}

std::string encode_wav(const AudioBuffer& audio) {
  const auto& s = audio.samples();
  const std::uint32_t data_bytes = static_cast<std::uint32_t>(s.size() * 2);
  const auto channels = static_cast<std::uint16_t>(audio.channels());
  const auto rate = static_cast<std::uint32_t>(audio.sample_rate());
  std::string out;
  out.reserve(44 + data_bytes);
  out += "RIFF";
  put32(out, 36 + data_bytes);
  out += "WAVE";
  out += "fmt ";
  put32(out, 16);
  put16(out, kFormatPcm);
  put16(out, channels);
  put32(out, rate);
  put32(out, rate * channels * 2);
  put16(out, static_cast<std::uint16_t>(channels * 2));
  put16(out, 16);
  out += "data";
  put32(out, data_bytes);
  for (float v : s) {
    const auto q = std::clamp<long>(std::lround(v * 32768.0), -32768, 32767);
    put16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(q)));
  }
  return out;
}

void write_wav(const AudioBuffer& audio, const std::string& path) {
  write_file(path, encode_wav(audio));
}

AudioBuffer resample(const AudioBuffer& audio, int target_rate) {
  if (target_rate <= 0) throw ValidationError("target rate must be positive");
  const int in_rate = audio.sample_rate();
  if (target_rate == in_rate) return audio;

  constexpr int kZeroCrossings = 32;
  constexpr double kBeta = 8.6;
  const double ratio = static_cast<double>(target_rate) / in_rate;
  // Low-pass below the lower Nyquist frequency.
  const double cutoff = 0.97 * std::min(1.0, ratio);
  const double half_width = kZeroCrossings / cutoff;  // in input samples
  const double i0_beta = bessel_i0(kBeta);

  const std::size_t in_frames = audio.frames();
  const auto out_frames = static_cast<std::size_t>(
      std::max<long long>(1, std::llround(in_frames * ratio)));
  const int ch = audio.channels();
  const auto& in = audio.samples();
  std::vector<float> out(out_frames * ch);

  for (std::size_t n = 0; n < out_frames; ++n) {
    const double t = n / ratio;
    const auto lo = static_cast<long long>(std::ceil(t - half_width));
    const auto hi = static_cast<long long>(std::floor(t + half_width));
    for (int c = 0; c < ch; ++c) {
      double acc = 0.0, wsum = 0.0;
      for (long long k = std::max<long long>(lo, 0);
           k <= std::min<long long>(hi, in_frames - 1); ++k) {
        const double x = t - k;
        const double r = x / half_width;
        const double win = bessel_i0(kBeta * std::sqrt(std::max(0.0, 1 - r * r))) / i0_beta;
        const double arg = std::numbers::pi * cutoff * x;
        const double sinc = x == 0.0 ? 1.0 : std::sin(arg) / arg;
        const double w = cutoff * sinc * win;
        acc += w * in[k * ch + c];
        wsum += w;
      }
      // Renormalise near the edges where the kernel is truncated.
      out[n * ch + c] = static_cast<float>(wsum > 0.5 ? acc / wsum : acc);
    }
  }
  return AudioBuffer(std::move(out), target_rate, ch);
}

}  // namespace vapeval
