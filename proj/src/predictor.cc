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

#include "vapeval/predictor.h"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cctype>
#include <cstring>
#include <limits>
#include <optional>

#include "vapeval/csv.h"
#include "vapeval/errors.h"

namespace vapeval {

namespace {

static_assert(sizeof(float) == 4 && std::numeric_limits<float>::is_iec559);

constexpr std::size_t kHeaderBytes = 4 + 1 + 4 + 4;

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out += static_cast<char>((v >> (8 * i)) & 0xff);
}

std::uint32_t get_u32(std::string_view in, std::size_t at) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) {
    v |= static_cast<std::uint32_t>(static_cast<unsigned char>(in[at + i]))
         << (8 * i);
  }
  return v;
}

void put_f32(std::string& out, float f) {
  put_u32(out, std::bit_cast<std::uint32_t>(f));
}

float get_f32(std::string_view in, std::size_t at) {
  return std::bit_cast<float>(get_u32(in, at));
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

template <typename T>
std::optional<T> parse_num(std::string_view s) {
  s = trim(s);
  T v{};
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    return std::nullopt;
  }
  return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

// Text traces share a key=value header block followed by CSV rows.
struct TextTrace {
  double frame_rate = 0.0;
  std::optional<std::size_t> declared_frames;
  std::vector<std::pair<std::size_t, std::string_view>> rows;  // (line, text)
};

TextTrace split_text_trace(std::string_view text) {
  TextTrace t;
  std::optional<double> rate;
  std::size_t line_no = 0;
  for (auto line : split(text, '\n')) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq != std::string_view::npos) {
      if (!t.rows.empty()) {
        throw InputError("header line " + std::to_string(line_no) +
                         " appears after data rows");
      }
      const auto key = trim(line.substr(0, eq));
      const auto value = line.substr(eq + 1);
      if (key == "frame_rate") {
        const auto v = parse_num<double>(value);
        if (!v || !(*v > 0.0)) {
          throw InputError("invalid frame_rate on line " +
                           std::to_string(line_no));
        }
        if (rate && *rate != *v) {
          throw InputError("contradictory frame_rate headers");
        }
        rate = v;
      } else if (key == "frames") {
        const auto v = parse_num<std::size_t>(value);
        if (!v) throw InputError("invalid frames header");
        if (t.declared_frames && *t.declared_frames != *v) {
          throw InputError("contradictory frames headers");
        }
        t.declared_frames = v;
      } else {
        throw InputError("unknown header key '" + std::string(key) + "'");
      }
      continue;
    }
    t.rows.emplace_back(line_no, line);
  }
  if (!rate) throw InputError("missing frame_rate header");
  t.frame_rate = *rate;
  if (t.declared_frames && *t.declared_frames != t.rows.size()) {
    throw InputError("header declares " + std::to_string(*t.declared_frames) +
                     " frames but file has " + std::to_string(t.rows.size()));
  }
  return t;
}

bool is_binary_trace(std::string_view bytes) {
  return bytes.size() >= 4 && std::memcmp(bytes.data(), kTraceMagic, 4) == 0;
}

FrameDistTrace parse_binary_trace(std::string_view bytes) {
  if (bytes.size() < kHeaderBytes) throw InputError("trace header truncated");
  const auto version = static_cast<std::uint8_t>(bytes[4]);
  if (version != kTraceVersion) {
    throw InputError("unsupported trace version " + std::to_string(version));
  }
  const float rate = get_f32(bytes, 5);
  const std::uint32_t frames = get_u32(bytes, 9);
  const std::size_t expected =
      kHeaderBytes + static_cast<std::size_t>(frames) * kNumLabels * 4;
  if (bytes.size() != expected) {
    throw InputError("trace header declares " + std::to_string(frames) +
                     " frames (" + std::to_string(expected) +
                     " bytes) but file has " + std::to_string(bytes.size()) +
                     " bytes");
  }
  if (!(rate > 0.0f) || !std::isfinite(rate)) {
    throw InputError("trace header has invalid frame rate");
  }
  std::vector<float> values(static_cast<std::size_t>(frames) * kNumLabels);
  for (std::size_t i = 0; i < values.size(); ++i) {
    values[i] = get_f32(bytes, kHeaderBytes + 4 * i);
  }
  return FrameDistTrace(rate, std::move(values));
}

FrameDistTrace parse_text_trace(std::string_view text) {
  const auto t = split_text_trace(text);
  std::vector<float> values;
  values.reserve(t.rows.size() * kNumLabels);
  std::size_t row_no = 0;
  for (const auto& [line_no, row] : t.rows) {
    const auto cells = split(row, ',');
    if (cells.size() != kNumLabels) {
      throw InputError("row " + std::to_string(row_no) + " (line " +
                       std::to_string(line_no) + ") has " +
                       std::to_string(cells.size()) + " values, expected 256");
    }
    for (const auto& c : cells) {
      const auto v = parse_num<float>(c);
      if (!v) {
        throw InputError("row " + std::to_string(row_no) +
                         ": unparseable value '" + std::string(trim(c)) + "'");
      }
      values.push_back(*v);
    }
    ++row_no;
  }
  return FrameDistTrace(static_cast<float>(t.frame_rate), std::move(values));
}

}  // namespace

FrameDistTrace::FrameDistTrace(float frame_rate, std::vector<float> values)
    : frame_rate_(frame_rate), values_(std::move(values)) {
  if (!(frame_rate_ > 0.0f) || !std::isfinite(frame_rate_)) {
    throw ValidationError("trace frame rate must be positive");
  }
  if (values_.size() % kNumLabels != 0) {
    throw ValidationError("trace size is not a multiple of 256");
  }
  for (std::size_t f = 0; f < num_frames(); ++f) {
    try {
      (void)distribution(f);
    } catch (const ValidationError& e) {
      throw ValidationError("row " + std::to_string(f) + ": " + e.what());
    }
  }
}

std::span<const float> FrameDistTrace::row(std::size_t frame) const {
  return std::span<const float>(values_).subspan(frame * kNumLabels,
                                                 kNumLabels);
}

LabelDistribution FrameDistTrace::distribution(std::size_t frame) const {
  std::array<double, kNumLabels> p;
  const auto r = row(frame);
  std::copy(r.begin(), r.end(), p.begin());
  return LabelDistribution(p);
}

std::string serialize_trace(const FrameDistTrace& trace) {
  std::string out;
  out.reserve(kHeaderBytes + trace.values().size() * 4);
  out.append(kTraceMagic, 4);
  out += static_cast<char>(kTraceVersion);
  put_f32(out, trace.frame_rate());
  put_u32(out, static_cast<std::uint32_t>(trace.num_frames()));
  for (float v : trace.values()) put_f32(out, v);
  return out;
}

void write_trace(const FrameDistTrace& trace, const std::string& path) {
  write_file(path, serialize_trace(trace));
}

FrameDistTrace parse_trace(std::string_view bytes) {
  return is_binary_trace(bytes) ? parse_binary_trace(bytes)
                                : parse_text_trace(bytes);
}

FrameDistTrace load_trace(const std::string& path) {
  const auto bytes = read_file(path);
  try {
    return parse_trace(bytes);
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  } catch (const ValidationError& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

ProbTrace to_prob_trace(const FrameDistTrace& trace, BinWeighting weighting) {
  std::vector<ProbFrame> frames;
  frames.reserve(trace.num_frames());
  for (std::size_t f = 0; f < trace.num_frames(); ++f) {
    frames.push_back(next_speaker_probs(trace.distribution(f), weighting));
  }
  return ProbTrace(trace.frame_rate(), std::move(frames));
}

std::string format_ptrace(const ProbTrace& trace) {
  std::string out = "frame_rate=" + format_number(trace.frame_rate()) + "\n";
  for (const auto& f : trace.frames()) {
    out += format_number(f.p_now);
    out += ',';
    out += format_number(f.p_fut);
    out += '\n';
  }
  return out;
}

ProbTrace parse_ptrace(std::string_view text) {
  const auto t = split_text_trace(text);
  std::vector<ProbFrame> frames;
  std::size_t row_no = 0;
  for (const auto& [line_no, row] : t.rows) {
    const auto cells = split(row, ',');
    std::optional<double> now, fut;
    if (cells.size() == 2) {
      now = parse_num<double>(cells[0]);
      fut = parse_num<double>(cells[1]);
    }
    if (!now || !fut) {
      throw InputError("p-trace row " + std::to_string(row_no) + " (line " +
                       std::to_string(line_no) +
                       ") is not a 'p_now,p_fut' pair");
    }
    frames.push_back({*now, *fut});
    ++row_no;
  }
  return ProbTrace(t.frame_rate, std::move(frames));
}

ProbTrace load_ptrace(const std::string& path) {
  const auto text = read_file(path);
  try {
    return parse_ptrace(text);
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  } catch (const ValidationError& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

ProbTrace load_prob_trace(const std::string& path, BinWeighting weighting) {
  const auto bytes = read_file(path);
  try {
    if (is_binary_trace(bytes)) {
      return to_prob_trace(parse_binary_trace(bytes), weighting);
    }
    // Distinguish the two text formats by the width of the first data row.
    const auto t = split_text_trace(bytes);
    if (!t.rows.empty() && split(t.rows.front().second, ',').size() == 2) {
      return parse_ptrace(bytes);
    }
    return to_prob_trace(parse_text_trace(bytes), weighting);
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  } catch (const ValidationError& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

void VaScenario::validate() const {
  if (!(duration > 0.0) || !std::isfinite(duration)) {
    throw ValidationError("scenario duration must be positive");
  }
  for (int s = 0; s < kNumSpeakers; ++s) {
    auto sorted = speech[s];
    std::sort(sorted.begin(), sorted.end(),
              [](const Interval& a, const Interval& b) {
                return a.onset < b.onset;
              });
    for (std::size_t i = 0; i < sorted.size(); ++i) {
      const auto& iv = sorted[i];
      if (!(iv.onset >= 0.0 && iv.offset <= duration && iv.onset < iv.offset)) {
        throw ValidationError("speaker " + std::to_string(s) +
                              " interval outside [0, duration] or inverted");
      }
      if (i > 0 && iv.onset < sorted[i - 1].offset) {
        throw ValidationError("speaker " + std::to_string(s) +
                              " has overlapping intervals");
      }
    }
  }
}

std::vector<bool> frame_activity(const VaScenario& s, Speaker speaker,
                                 double frame_rate) {
  const auto n = static_cast<std::size_t>(
      std::floor(s.duration * frame_rate + 1e-9));
  std::vector<bool> va(n, false);
  for (const auto& iv : s.speech[static_cast<int>(speaker)]) {
    for (std::size_t k = 0; k < n; ++k) {
      const double centre = (static_cast<double>(k) + 0.5) / frame_rate;
      if (centre >= iv.onset && centre < iv.offset) va[k] = true;
    }
  }
  return va;
}

FrameDistTrace oracle_distributions(const VaScenario& s,
                                    const CodecConfig& cfg) {
  s.validate();
  const double rate = cfg.frame_rate();
  const auto agent = frame_activity(s, Speaker::kAgent, rate);
  const auto user = frame_activity(s, Speaker::kUser, rate);
  const auto total = static_cast<long>(agent.size());
  const long horizon = cfg.horizon_frames();
  const long count = total - horizon;
  if (count <= 0) {
    throw ValidationError("scenario of " + std::to_string(s.duration) +
                          " s leaves no frames for a " +
                          std::to_string(cfg.horizon()) + " s horizon");
  }
  std::vector<float> values(static_cast<std::size_t>(count) * kNumLabels,
                            0.0f);
  VaWindow w = VaWindow::Silent(static_cast<int>(horizon));
  for (long n = 0; n < count; ++n) {
    for (long k = 0; k < horizon; ++k) {
      w.frames[0][k] = agent[n + 1 + k];
      w.frames[1][k] = user[n + 1 + k];
    }
    const auto label = encode_window(w, cfg);
    values[static_cast<std::size_t>(n) * kNumLabels + label.value()] = 1.0f;
  }
  return FrameDistTrace(static_cast<float>(rate), std::move(values));
}

VaScenario scenario_from_json(const nlohmann::json& j) {
  VaScenario s;
  try {
    s.duration = j.at("duration").get<double>();
    const char* keys[] = {"agent", "user"};
    for (int k = 0; k < kNumSpeakers; ++k) {
      if (!j.contains(keys[k])) continue;
      for (const auto& iv : j.at(keys[k])) {
        if (!iv.is_array() || iv.size() != 2) {
          throw InputError(std::string("scenario: ") + keys[k] +
                           " intervals must be [onset, offset] pairs");
        }
        s.speech[k].push_back({iv[0].get<double>(), iv[1].get<double>()});
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("scenario JSON: ") + e.what());
  }
  s.validate();
  return s;
}

nlohmann::json scenario_to_json(const VaScenario& s) {
  nlohmann::json j = {{"duration", s.duration}};
  const char* keys[] = {"agent", "user"};
  for (int k = 0; k < kNumSpeakers; ++k) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& iv : s.speech[k]) arr.push_back({iv.onset, iv.offset});
    j[keys[k]] = std::move(arr);
  }
  return j;
}

}  // namespace vapeval
