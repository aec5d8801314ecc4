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

#include "vapeval/turn_metrics.h"

#include <cmath>
#include <ostream>

#include "vapeval/csv.h"
#include "vapeval/errors.h"

namespace vapeval {

namespace {

int to_frame(double seconds, double frame_rate) {
  return static_cast<int>(std::llround(seconds * frame_rate));
}

enum class Side { kAgent, kUser };

// Whether values over the span favour `side` under the rule; also reports
// the span mean.
bool favours(const ProbTrace& trace, FrameSpan span, double ProbFrame::*field,
             Side side, const ClassifyOptions& opts, double* mean_out) {
  double sum = 0.0;
  bool all = true;
  for (int f = span.begin; f < span.end; ++f) {
    const double p = trace[f].*field;
    sum += p;
    const bool beyond =
        side == Side::kAgent ? p > opts.threshold : p < opts.threshold;
    all = all && beyond;
  }
  const double mean = sum / span.size();
  *mean_out = mean;
  if (opts.rule == DecisionRule::kAllFrames) return all;
  return side == Side::kAgent ? mean > opts.threshold : mean < opts.threshold;
}

void check_span(const char* name, FrameSpan span, const ProbTrace& trace) {
  if (span.empty()) {
    throw ValidationError(std::string(name) + " region is empty");
  }
  if (span.begin < 0 || static_cast<std::size_t>(span.end) > trace.size()) {
    throw ValidationError(std::string(name) + " region [" +
                          std::to_string(span.begin) + ", " +
                          std::to_string(span.end) +
                          ") exceeds trace of " + std::to_string(trace.size()) +
                          " frames");
  }
}

}  // namespace

TurnRegions derive_regions(const TurnMarkers& m, double frame_rate,
                           const RegionConfig& cfg) {
  if (!(frame_rate > 0.0)) throw ValidationError("frame rate must be positive");
  if (!(cfg.tail > 0.0)) {
    throw ValidationError("tail must be positive: late-yield region undefined");
  }
  if (!(cfg.early_window > 0.0)) {
    throw ValidationError("early-yield window must be positive");
  }
  if (m.question_end - m.question_start < cfg.early_window - 1e-9) {
    throw ValidationError("turn too short for early-yield window");
  }
  TurnRegions r;
  r.pause = {to_frame(m.statement_end, frame_rate),
             to_frame(m.question_start, frame_rate)};
  r.early_yield = {to_frame(m.question_end - cfg.early_window, frame_rate),
                   to_frame(m.question_end, frame_rate)};
  r.late_yield = {r.early_yield.end,
                  to_frame(m.question_end + cfg.tail, frame_rate)};
  if (r.pause.empty()) throw ValidationError("pause region is empty");
  if (r.late_yield.empty()) throw ValidationError("late-yield region is empty");
  return r;
}

TurnRegions derive_regions(const Alignment& alignment, double frame_rate,
                           const RegionConfig& cfg) {
  return derive_regions(alignment.markers(), frame_rate, cfg);
}

std::string_view to_string(DecisionRule rule) {
  return rule == DecisionRule::kMean ? "mean" : "all-frames";
}

DecisionRule parse_decision_rule(std::string_view s) {
  if (s == "mean") return DecisionRule::kMean;
  if (s == "all-frames") return DecisionRule::kAllFrames;
  throw ValidationError("unknown decision rule '" + std::string(s) +
                        "' (expected mean or all-frames)");
}

Classification classify_detailed(const ProbTrace& trace,
                                 const TurnRegions& regions,
                                 const ClassifyOptions& opts) {
  check_span("pause", regions.pause, trace);
  check_span("early-yield", regions.early_yield, trace);
  check_span("late-yield", regions.late_yield, trace);

  Classification c;
  auto& m = c.metrics;
  auto& means = c.means;
  m.weak_hold = favours(trace, regions.pause, &ProbFrame::p_fut, Side::kAgent,
                        opts, &means.pause_fut);
  const bool now_hold = favours(trace, regions.pause, &ProbFrame::p_now,
                                Side::kAgent, opts, &means.pause_now);
  m.strong_hold = m.weak_hold && now_hold;
  m.early_yield = favours(trace, regions.early_yield, &ProbFrame::p_fut,
                          Side::kUser, opts, &means.early_fut);
  const bool tail_now = favours(trace, regions.late_yield, &ProbFrame::p_now,
                                Side::kUser, opts, &means.tail_now);
  const bool tail_fut = favours(trace, regions.late_yield, &ProbFrame::p_fut,
                                Side::kUser, opts, &means.tail_fut);
  m.late_yield = tail_now && tail_fut;
  return c;
}

TurnMetrics classify(const ProbTrace& trace, const TurnRegions& regions,
                     const ClassifyOptions& opts) {
  return classify_detailed(trace, regions, opts).metrics;
}

MetricPercentages aggregate_corpus(std::span<const TurnMetrics> samples,
                                   std::string system, std::string condition) {
  if (samples.empty()) {
    throw ValidationError("cannot aggregate an empty sample list");
  }
  int weak = 0, strong = 0, early = 0, late = 0;
  for (const auto& s : samples) {
    weak += s.weak_hold;
    strong += s.strong_hold;
    early += s.early_yield;
    late += s.late_yield;
  }
  const double n = static_cast<double>(samples.size());
  MetricPercentages p;
  p.system = std::move(system);
  p.condition = std::move(condition);
  p.n = static_cast<int>(samples.size());
  p.weak_hold = 100.0 * weak / n;
  p.strong_hold = 100.0 * strong / n;
  p.early_yield = 100.0 * early / n;
  p.late_yield = 100.0 * late / n;
  return p;
}

int display_percent(double percent) {
  return static_cast<int>(std::lround(percent));
}

void write_report_csv(const CorpusReport& report, std::ostream& out,
                      std::string_view config_digest) {
  if (!config_digest.empty()) {
    out << "# config_sha256=" << config_digest << "\n";
  }
  out << "# rule=" << to_string(report.rule) << "\n";
  write_csv_row(out, {"system", "condition", "weak_hold", "strong_hold",
                      "early_yield", "late_yield", "n"});
  for (const auto& g : report.groups) {
    write_csv_row(out, {g.system, g.condition, format_number(g.weak_hold),
                        format_number(g.strong_hold),
                        format_number(g.early_yield),
                        format_number(g.late_yield), std::to_string(g.n)});
  }
}

nlohmann::json report_to_json(const CorpusReport& report) {
  nlohmann::json groups = nlohmann::json::array();
  for (const auto& g : report.groups) {
    groups.push_back({
        {"system", g.system},
        {"condition", g.condition},
        {"n", g.n},
        {"weak_hold", g.weak_hold},
        {"strong_hold", g.strong_hold},
        {"early_yield", g.early_yield},
        {"late_yield", g.late_yield},
        {"display",
         {{"weak_hold", display_percent(g.weak_hold)},
          {"strong_hold", display_percent(g.strong_hold)},
          {"early_yield", display_percent(g.early_yield)},
          {"late_yield", display_percent(g.late_yield)}}},
    });
  }
  return {{"rule", std::string(to_string(report.rule))},
          {"groups", std::move(groups)}};
}

CorpusReport report_from_json(const nlohmann::json& j) {
  CorpusReport r;
  try {
    r.rule = parse_decision_rule(j.at("rule").get<std::string>());
    for (const auto& g : j.at("groups")) {
      MetricPercentages p;
      p.system = g.at("system").get<std::string>();
      p.condition = g.at("condition").get<std::string>();
      p.n = g.at("n").get<int>();
      p.weak_hold = g.at("weak_hold").get<double>();
      p.strong_hold = g.at("strong_hold").get<double>();
      p.early_yield = g.at("early_yield").get<double>();
      p.late_yield = g.at("late_yield").get<double>();
      r.groups.push_back(std::move(p));
    }
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("report JSON: ") + e.what());
  }
  return r;
}

}  // namespace vapeval
