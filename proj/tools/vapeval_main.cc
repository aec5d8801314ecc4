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

// vapeval: turn-taking evaluation pipeline.
//
//   vapeval [--config run.ini] <subcommand> [flags]
//
// Every flag can also be set in the INI file, in a section named after the
// subcommand ("[evaluate]\nrule = all-frames"). Flags win over the file.
// Exit codes: 0 success, 1 input error, 2 validation error.

#include <iostream>
#include <map>

#include "CLI11.hpp"
#include "vapeval/cli/commands.h"
#include "vapeval/cli/run_config.h"
#include "vapeval/errors.h"

namespace {

using vapeval::cli::RunConfig;

// Enum-valued settings are read as strings and parsed after CLI parsing so
// that INI values and flags share one validation path.
struct EnumFlags {
  std::vector<std::string> conditions;
  std::string rule = "mean";
  std::string weighting = "duration";
};

void add_codec(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--frame-rate", cfg.frame_rate, "Frame rate in Hz")
      ->capture_default_str();
}

void add_jobs(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("-j,--jobs", cfg.jobs, "Worker threads (0: all cores)")
      ->check(CLI::NonNegativeNumber);
}

void add_output(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("-o,--output-dir", cfg.output_dir, "Output directory")->required();
}

void add_conditions(CLI::App* sub, EnumFlags& flags) {
  sub->add_option("--conditions", flags.conditions,
                  "Conditions to include (original, comma, filler)")
      ->delimiter(',')
      ->check(CLI::IsMember({"original", "comma", "filler"}));
}

void add_regions(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--early-window", cfg.regions.early_window,
                  "Early-yield window before question end, s")
      ->capture_default_str();
  sub->add_option("--tail", cfg.regions.tail, "Late-yield window after question end, s")
      ->capture_default_str();
}

void add_weighting(CLI::App* sub, EnumFlags& flags) {
  sub->add_option("--bin-weighting", flags.weighting, "duration or uniform")
      ->check(CLI::IsMember({"duration", "uniform"}))
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;
  EnumFlags flags;
  CLI::App app{"Turn-taking evaluation of synthesized agent turns"};
  app.set_config("--config", "", "INI file with one section per subcommand");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.require_subcommand(1);

  auto* extract = app.add_subcommand("extract", "Extract statement/question pairs");
  extract->add_option("--corpus", cfg.corpus, "Dialog JSON file or directory")->required();
  extract->add_option("--min-words", cfg.filter.min_words)->capture_default_str();
  extract->add_option("--min-chars", cfg.filter.min_chars)->capture_default_str();
  extract->add_option("--max-chars", cfg.filter.max_chars)->capture_default_str();
  extract->add_option("--forbid-commas", cfg.filter.forbid_commas)->capture_default_str();
  extract->add_option("--forbid-digits", cfg.filter.forbid_digits)->capture_default_str();
  extract->add_option("--monosyllabic-final-word", cfg.filter.monosyllabic_final_word)
      ->capture_default_str();
  add_output(extract, cfg);

  auto* perm = app.add_subcommand("permute", "Write TTS prompts per condition");
  perm->add_option("--manifest", cfg.manifest, "pairs.csv from extract")->required();
  add_conditions(perm, flags);
  add_output(perm, cfg);

  auto* norm = app.add_subcommand("normalize", "Normalize pause and tail silence");
  norm->add_option("--audio-dir", cfg.audio_dir)->required();
  norm->add_option("--alignment-dir", cfg.alignment_dir)->required();
  norm->add_option("--pause", cfg.silence.pause, "Pause length, s")->capture_default_str();
  norm->add_option("--tail", cfg.silence.tail, "Tail silence, s")->capture_default_str();
  norm->add_option("--preserve-gap-audio", cfg.silence.preserve_gap_audio)
      ->capture_default_str();
  norm->add_option("--stereo", cfg.stereo, "Write agent + silent user channels")
      ->capture_default_str();
  add_jobs(norm, cfg);
  add_output(norm, cfg);

  auto* manip = app.add_subcommand("manipulate", "Edit prosody of the statement-final word");
  manip->add_option("--audio-dir", cfg.audio_dir)->required();
  manip->add_option("--alignment-dir", cfg.alignment_dir)->required();
  manip->add_option("--gain-db", cfg.prosody.gain_db)->capture_default_str();
  manip->add_option("--stretch", cfg.prosody.stretch_factor)->capture_default_str();
  double pitch_hz = 0.0;
  manip->add_option("--pitch-hz", pitch_hz, "Fixed flattening target (default: span mean)");
  manip->add_option("--stereo", cfg.stereo)->capture_default_str();
  add_jobs(manip, cfg);
  add_output(manip, cfg);

  auto* oracle = app.add_subcommand("oracle-sim", "Write future-leak oracle traces");
  oracle->add_option("--scenario", cfg.scenario, "Scenario JSON file or directory")
      ->required();
  add_codec(oracle, cfg);
  add_jobs(oracle, cfg);
  add_output(oracle, cfg);

  auto* eval = app.add_subcommand("evaluate", "Classify samples and build reports");
  eval->add_option("--alignment-dir", cfg.alignment_dir)->required();
  eval->add_option("--trace-dir", cfg.trace_dir)->required();
  eval->add_option("--systems", cfg.systems, "Systems to include (default: all)")
      ->delimiter(',');
  eval->add_option("--rule", flags.rule, "mean or all-frames")
      ->check(CLI::IsMember({"mean", "all-frames"}))
      ->capture_default_str();
  eval->add_option("--threshold", cfg.threshold)->capture_default_str();
  eval->add_option("--external-metrics", cfg.external_metrics,
                   "CSV system,condition,metric,value merged into report.md");
  add_conditions(eval, flags);
  add_codec(eval, cfg);
  add_weighting(eval, flags);
  add_regions(eval, cfg);
  add_jobs(eval, cfg);
  add_output(eval, cfg);

  auto* plot = app.add_subcommand("plot", "Render one sample as SVG + CSV");
  plot->add_option("--audio", cfg.audio)->required();
  plot->add_option("--alignment", cfg.alignment)->required();
  plot->add_option("--trace", cfg.trace)->required();
  add_weighting(plot, flags);
  add_regions(plot, cfg);
  add_output(plot, cfg);

  auto* report = app.add_subcommand("report", "Re-render tables from report.json");
  report->add_option("--report-json", cfg.report_json)->required();
  report->add_option("--external-metrics", cfg.external_metrics);
  add_output(report, cfg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }
  if (!flags.conditions.empty()) {
    cfg.conditions.clear();
    for (const auto& c : flags.conditions) cfg.conditions.push_back(vapeval::parse_condition(c));
  }
  cfg.rule = vapeval::parse_decision_rule(flags.rule);
  cfg.weighting = vapeval::parse_bin_weighting(flags.weighting);
  if (pitch_hz > 0.0) cfg.prosody.pitch_target = {vapeval::PitchTarget::Kind::kFixed, pitch_hz};

  try {
    if (*extract) vapeval::cli::cmd_extract(cfg, std::cerr);
    if (*perm) vapeval::cli::cmd_permute(cfg, std::cerr);
    if (*norm) vapeval::cli::cmd_normalize(cfg, std::cerr);
    if (*manip) vapeval::cli::cmd_manipulate(cfg, std::cerr);
    if (*oracle) vapeval::cli::cmd_oracle_sim(cfg, std::cerr);
    if (*eval) vapeval::cli::cmd_evaluate(cfg, std::cerr);
    if (*plot) vapeval::cli::cmd_plot(cfg, std::cerr);
    if (*report) vapeval::cli::cmd_report(cfg, std::cerr);
  } catch (const vapeval::InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const vapeval::ValidationError& e) {
    std::cerr << "invalid: " << e.what() << "\n";
    return 2;
  } catch (const std::logic_error& e) {
    std::cerr << "invalid: " << e.what() << "\n";
    return 2;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
