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

#ifndef VAPEVAL_CLI_PLOT_H_
#define VAPEVAL_CLI_PLOT_H_

// Static per-sample figure: mel spectrogram, p_now and p_fut panels with
// a 0.5 reference line and shaded pause / early / late regions.

#include <string>
#include <vector>

#include "json.hpp"
#include "vapeval/aggregation.h"
#include "vapeval/audio.h"
#include "vapeval/turn_metrics.h"

namespace vapeval::cli {

// Log-mel magnitudes in dB, [frame][band]; 25 ms window, 10 ms hop.
std::vector<std::vector<float>> mel_spectrogram(std::span<const float> x,
                                                int sample_rate,
                                                int bands = 64);

struct PlotArtifacts {
  std::string svg;
  std::string csv;
  nlohmann::json sidecar;
  std::vector<std::string> warnings;
};

// The trace is drawn for min(trace, audio) duration; a trace shorter than
// the audio truncates the plot and adds a warning.
PlotArtifacts render_plot(const AudioBuffer& audio, const ProbTrace& trace,
                          const TurnRegions& regions,
                          const std::string& title,
                          const std::string& config_digest);

}  // namespace vapeval::cli

#endif  // VAPEVAL_CLI_PLOT_H_
