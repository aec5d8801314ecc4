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

#include "vapeval/cli/plot.h"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>
#include <numbers>
#include <sstream>

#include "vapeval/csv.h"

namespace vapeval::cli {

namespace {

constexpr int kWidth = 900;
constexpr int kLeft = 60;
constexpr int kRight = 20;
constexpr int kSpecHeight = 180;
constexpr int kProbHeight = 110;
constexpr int kGap = 30;
constexpr int kMaxColumns = 450;
constexpr int kShades = 12;

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
double mel_to_hz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

std::string fmt(double v) {
  std::ostringstream s;
  s.setf(std::ios::fixed);
  s.precision(2);
  s << v;
  return s.str();
}

struct Fft {
  int n;
  double* in;
  fftw_complex* out;
  fftw_plan plan;
  explicit Fft(int size) : n(size) {
    in = fftw_alloc_real(n);
    out = fftw_alloc_complex(n / 2 + 1);
    plan = fftw_plan_dft_r2c_1d(n, in, out, FFTW_ESTIMATE);
  }
  ~Fft() {
    fftw_destroy_plan(plan);
    fftw_free(in);
    fftw_free(out);
  }
  Fft(const Fft&) = delete;
  Fft& operator=(const Fft&) = delete;
};

}  // namespace

std::vector<std::vector<float>> mel_spectrogram(std::span<const float> x,
                                                int sample_rate, int bands) {
  const int win = static_cast<int>(std::lround(0.025 * sample_rate));
  const int hop = static_cast<int>(std::lround(0.010 * sample_rate));
  int nfft = 1;
  while (nfft < win) nfft <<= 1;
  const int bins = nfft / 2 + 1;

  // Triangular filters evenly spaced on the mel scale up to Nyquist.
  const double top = hz_to_mel(sample_rate / 2.0);
  std::vector<double> edges(bands + 2);
  for (int i = 0; i < bands + 2; ++i) {
    edges[i] = mel_to_hz(top * i / (bands + 1)) * nfft / sample_rate;
  }
  std::vector<double> hann(win);
  for (int i = 0; i < win; ++i) {
    hann[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * i / win);
  }

  static std::mutex plan_mutex;  // FFTW planning is not thread-safe
  std::unique_ptr<Fft> fft;
  {
    std::lock_guard lock(plan_mutex);
    fft = std::make_unique<Fft>(nfft);
  }
  std::vector<std::vector<float>> out;
  std::vector<double> power(bins);
  for (std::size_t start = 0; start + win <= x.size(); start += hop) {
    std::fill(fft->in, fft->in + nfft, 0.0);
    for (int i = 0; i < win; ++i) fft->in[i] = x[start + i] * hann[i];
    fftw_execute(fft->plan);
    for (int k = 0; k < bins; ++k) {
      power[k] = fft->out[k][0] * fft->out[k][0] + fft->out[k][1] * fft->out[k][1];
    }
    std::vector<float> row(bands);
    for (int b = 0; b < bands; ++b) {
      double acc = 0.0;
      for (int k = 0; k < bins; ++k) {
        double w = 0.0;
        if (k > edges[b] && k <= edges[b + 1]) {
          w = (k - edges[b]) / (edges[b + 1] - edges[b]);
        } else if (k > edges[b + 1] && k < edges[b + 2]) {
          w = (edges[b + 2] - k) / (edges[b + 2] - edges[b + 1]);
        }
        acc += w * power[k];
      }
      row[b] = static_cast<float>(10.0 * std::log10(acc + 1e-12));
    }
    out.push_back(std::move(row));
  }
  {
    std::lock_guard lock(plan_mutex);
    fft.reset();
  }
  return out;
}

PlotArtifacts render_plot(const AudioBuffer& audio, const ProbTrace& trace,
                          const TurnRegions& regions, const std::string& title,
                          const std::string& config_digest) {
  PlotArtifacts art;
  const double rate = trace.frame_rate();
  const double trace_dur = trace.size() / rate;
  const double audio_dur = audio.duration();
  const bool truncated = trace_dur + 1.0 / rate < audio_dur;
  if (truncated) {
    art.warnings.push_back("trace covers " + fmt(trace_dur) + " s of " +
                           fmt(audio_dur) + " s audio; plot truncated");
  }
  const double dur = std::min(trace_dur, audio_dur);
  const double plot_w = kWidth - kLeft - kRight;
  auto xpos = [&](double t) { return kLeft + plot_w * std::clamp(t / dur, 0.0, 1.0); };

  // Companion CSV: every trace frame.
  {
    std::ostringstream csv;
    csv << "# config_sha256=" << config_digest << "\n";
    write_csv_row(csv, {"time", "p_now", "p_fut"});
    for (std::size_t i = 0; i < trace.size(); ++i) {
      write_csv_row(csv, {format_number(i / rate), format_number(trace[i].p_now),
                          format_number(trace[i].p_fut)});
    }
    art.csv = csv.str();
  }

  const int height = 40 + kSpecHeight + 2 * (kGap + kProbHeight) + 40;
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << height << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  svg << "<!-- config_sha256=" << config_digest << " -->\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << kLeft << "\" y=\"20\" font-size=\"14\">" << title
      << "</text>\n";

  // Spectrogram panel, columns averaged down to at most kMaxColumns and
  // shades merged into horizontal runs to keep the file small.
  const int spec_top = 40;
  const auto mono = audio.channel(0);
  const auto spec = mel_spectrogram(mono, audio.sample_rate());
  const std::size_t usable = std::min<std::size_t>(
      spec.size(), static_cast<std::size_t>(dur / 0.010));
  if (usable > 0) {
    const int bands = static_cast<int>(spec[0].size());
    const int cols = static_cast<int>(std::min<std::size_t>(usable, kMaxColumns));
    std::vector<std::vector<float>> grid(cols, std::vector<float>(bands, 0.0f));
    float hi = -1e30f;
    for (int c = 0; c < cols; ++c) {
      const std::size_t a = usable * c / cols, b = usable * (c + 1) / cols;
      for (int m = 0; m < bands; ++m) {
        double acc = 0.0;
        for (std::size_t f = a; f < b; ++f) acc += spec[f][m];
        grid[c][m] = static_cast<float>(acc / std::max<std::size_t>(1, b - a));
        hi = std::max(hi, grid[c][m]);
      }
    }
    const double cw = plot_w * (usable * 0.010 / dur) / cols;
    const double bh = static_cast<double>(kSpecHeight) / bands;
    for (int m = 0; m < bands; ++m) {
      const double y = spec_top + kSpecHeight - (m + 1) * bh;
      int c = 0;
      while (c < cols) {
        const double db = std::clamp<double>(grid[c][m] - hi, -80.0, 0.0);
        const int shade = static_cast<int>(std::lround((db + 80.0) / 80.0 * (kShades - 1)));
        int e = c + 1;
        while (e < cols) {
          const double db2 = std::clamp<double>(grid[e][m] - hi, -80.0, 0.0);
          if (std::lround((db2 + 80.0) / 80.0 * (kShades - 1)) != shade) break;
          ++e;
        }
        const int level = 255 - shade * 255 / (kShades - 1);
        svg << "<rect x=\"" << fmt(kLeft + c * cw) << "\" y=\"" << fmt(y)
            << "\" width=\"" << fmt((e - c) * cw + 0.05) << "\" height=\""
            << fmt(bh + 0.05) << "\" fill=\"rgb(" << level << "," << level
            << "," << level << ")\"/>\n";
        c = e;
      }
    }
  }
  svg << "<text x=\"5\" y=\"" << spec_top + kSpecHeight / 2 << "\">mel</text>\n";

  struct Marker {
    const char* name;
    FrameSpan span;
    const char* color;
  };
  const Marker markers[] = {{"pause", regions.pause, "#4c72b0"},
                            {"early_yield", regions.early_yield, "#dd8452"},
                            {"late_yield", regions.late_yield, "#55a868"}};

  auto prob_panel = [&](const char* label, int top, double ProbFrame::*field) {
    for (const auto& m : markers) {
      const double x0 = xpos(m.span.begin / rate), x1 = xpos(m.span.end / rate);
      svg << "<rect x=\"" << fmt(x0) << "\" y=\"" << top << "\" width=\""
          << fmt(std::max(0.0, x1 - x0)) << "\" height=\"" << kProbHeight
          << "\" fill=\"" << m.color << "\" fill-opacity=\"0.18\"/>\n";
    }
    svg << "<rect x=\"" << kLeft << "\" y=\"" << top << "\" width=\"" << plot_w
        << "\" height=\"" << kProbHeight << "\" fill=\"none\" stroke=\"black\"/>\n";
    const double mid = top + kProbHeight / 2.0;
    svg << "<line x1=\"" << kLeft << "\" y1=\"" << fmt(mid) << "\" x2=\""
        << kLeft + plot_w << "\" y2=\"" << fmt(mid)
        << "\" stroke=\"gray\" stroke-dasharray=\"4 3\"/>\n";
    svg << "<polyline fill=\"none\" stroke=\"black\" stroke-width=\"1.2\" points=\"";
    for (std::size_t i = 0; i < trace.size() && i / rate <= dur; ++i) {
      const double p = trace[i].*field;
      svg << fmt(xpos(i / rate)) << "," << fmt(top + kProbHeight * (1.0 - p)) << " ";
    }
    svg << "\"/>\n";
    svg << "<text x=\"5\" y=\"" << fmt(mid) << "\">" << label << "</text>\n";
  };
  const int now_top = spec_top + kSpecHeight + kGap;
  const int fut_top = now_top + kProbHeight + kGap;
  prob_panel("P_now", now_top, &ProbFrame::p_now);
  prob_panel("P_fut", fut_top, &ProbFrame::p_fut);
  svg << "<text x=\"" << kLeft << "\" y=\"" << fut_top + kProbHeight + 20
      << "\">0 s</text><text x=\"" << kLeft + plot_w - 40 << "\" y=\""
      << fut_top + kProbHeight + 20 << "\">" << fmt(dur) << " s</text>\n";
  svg << "</svg>\n";
  art.svg = svg.str();

  nlohmann::json marks = nlohmann::json::object();
  for (const auto& m : markers) {
    marks[m.name] = {{"start", m.span.begin / rate}, {"end", m.span.end / rate},
                     {"start_frame", m.span.begin}, {"end_frame", m.span.end}};
  }
  art.sidecar = {
      {"config_sha256", config_digest},
      {"title", title},
      {"panels", {"spectrogram", "p_now", "p_fut"}},
      {"reference_line", 0.5},
      {"markers", marks},
      {"frame_rate", rate},
      {"trace_frames", trace.size()},
      {"audio_duration", audio_dur},
      {"plotted_duration", dur},
      {"truncated", truncated},
      {"warnings", art.warnings},
  };
  return art;
}

}  // namespace vapeval::cli
