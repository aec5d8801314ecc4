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

#include "vapeval/cli/commands.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <optional>
#include <tuple>
#include <filesystem>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>

#include "vapeval/audio_ops.h"
#include "vapeval/cli/plot.h"
#include "vapeval/cli/report_tables.h"
#include "vapeval/csv.h"
#include "vapeval/errors.h"
#include "vapeval/predictor.h"
#include "vapeval/prosody.h"

namespace vapeval::cli {

namespace fs = std::filesystem;

namespace {

std::string digest_line(const RunConfig& cfg) {
  return "# config_sha256=" + cfg.digest() + "\n";
}

fs::path out_path(const RunConfig& cfg, const std::string& rel) {
  fs::path p = fs::path(cfg.output_dir) / rel;
  fs::create_directories(p.parent_path());
  return p;
}

void require_output(const RunConfig& cfg) {
  if (cfg.output_dir.empty()) throw InputError("output directory is not set");
  fs::create_directories(cfg.output_dir);
}

std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

// Outcome of one sample in a batch; failures become exceptions.csv rows.
struct Failure {
  std::string id;
  std::string reason;
  bool input_error = false;
};

template <typename Fn>
std::optional<Failure> guarded(const std::string& id, Fn&& fn) {
  try {
    fn();
    return std::nullopt;
  } catch (const InputError& e) {
    return Failure{id, e.what(), true};
  } catch (const ValidationError& e) {
    return Failure{id, e.what(), false};
  } catch (const std::exception& e) {
    return Failure{id, e.what(), false};
  }
}

void write_failures(const RunConfig& cfg, const std::string& name,
                    const std::vector<Failure>& failures) {
  std::ostringstream out;
  out << digest_line(cfg);
  write_csv_row(out, {"id", "reason"});
  for (const auto& f : failures) write_csv_row(out, {f.id, f.reason});
  write_file(out_path(cfg, name).string(), out.str());
}

// A batch with failures exits nonzero with the first failure's category.
void throw_if_failed(const std::vector<Failure>& failures, std::size_t total) {
  if (failures.empty()) return;
  const auto& f = failures.front();
  const std::string msg = std::to_string(failures.size()) + " of " +
                          std::to_string(total) + " samples failed; first: " +
                          f.id + ": " + f.reason;
  if (f.input_error) throw InputError(msg);
  throw ValidationError(msg);
}

nlohmann::json with_digest(nlohmann::json j, const RunConfig& cfg) {
  j["config_sha256"] = cfg.digest();
  return j;
}

}  // namespace

std::string sample_id(const SentencePair& p) {
  return fs::path(p.dialog_id).stem().string() + "_t" +
         std::to_string(p.turn_index) + "_s" + std::to_string(p.sentence_index);
}

void parallel_for(std::size_t n, int workers,
                  const std::function<void(std::size_t)>& fn) {
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto run = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const auto count = std::min<std::size_t>(std::max(1, workers), n);
  {
    std::vector<std::jthread> pool;
    for (std::size_t t = 1; t < count; ++t) pool.emplace_back(run);
    run();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::vector<std::string> list_stems(const std::string& root,
                                    const std::string& extension) {
  std::vector<std::string> out;
  std::error_code ec;
  for (fs::recursive_directory_iterator it(root, ec), end; it != end && !ec;
       it.increment(ec)) {
    if (!it->is_regular_file() || it->path().extension() != extension) continue;
    auto rel = fs::relative(it->path(), root);
    rel.replace_extension();
    out.push_back(rel.generic_string());
  }
  if (ec) throw InputError("cannot list " + root + ": " + ec.message());
  std::sort(out.begin(), out.end());
  return out;
}

void cmd_extract(const RunConfig& cfg, std::ostream& log) {
  require_path(cfg.corpus, "corpus", fs::is_directory(cfg.corpus));
  require_output(cfg);
  cfg.filter.validate();
  const auto dialogs = load_dialogs(cfg.corpus);
  const auto result = extract_pairs(dialogs, cfg.filter, SyllableLexicon::Bundled());

  std::map<std::string, int> by_reason;
  for (const auto& r : result.rejections) ++by_reason[std::string(to_string(r.reason))];
  log << "dialogs: " << dialogs.size() << ", accepted pairs: "
      << result.pairs.size() << ", rejected: " << result.rejections.size() << "\n";
  for (const auto& [reason, n] : by_reason) log << "  " << reason << ": " << n << "\n";
  if (result.pairs.empty()) throw InputError("no qualifying pairs");

  std::ostringstream csv;
  csv << digest_line(cfg);
  write_manifest_csv(result.pairs, csv);
  write_file(out_path(cfg, "pairs.csv").string(), csv.str());

  nlohmann::json j = {{"config_sha256", cfg.digest()},
                      {"config", cfg.to_json()},
                      {"pairs", manifest_to_json(result.pairs)}};
  write_file(out_path(cfg, "pairs.json").string(), dump(j));

  std::ostringstream rej;
  rej << digest_line(cfg);
  write_csv_row(rej, {"dialog_id", "turn_index", "sentence_index", "reason",
                      "statement", "question"});
  for (const auto& r : result.rejections) {
    write_csv_row(rej, {r.pair.dialog_id, std::to_string(r.pair.turn_index),
                        std::to_string(r.pair.sentence_index),
                        std::string(to_string(r.reason)), r.pair.statement,
                        r.pair.question});
  }
  write_file(out_path(cfg, "rejections.csv").string(), rej.str());
}

void cmd_permute(const RunConfig& cfg, std::ostream& log) {
  require_path(cfg.manifest, "manifest");
  require_output(cfg);
  const auto rows = parse_csv(read_file(cfg.manifest));
  if (rows.empty()) throw InputError(cfg.manifest + ": empty manifest");
  const auto& header = rows[0];
  auto col = [&](const char* name) {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) {
      throw InputError(cfg.manifest + ": missing column '" + name + "'");
    }
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t c_id = col("dialog_id"), c_turn = col("turn_index"),
                    c_sent = col("sentence_index"), c_st = col("statement"),
                    c_q = col("question");

  std::ostringstream out;
  out << digest_line(cfg);
  write_csv_row(out, {"id", "condition", "text"});
  std::size_t n = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (r.size() != header.size()) {
      throw InputError(cfg.manifest + ": row " + std::to_string(i) +
                       " has " + std::to_string(r.size()) + " fields");
    }
    SentencePair p;
    p.dialog_id = r[c_id];
    try {
      p.turn_index = std::stoi(r[c_turn]);
      p.sentence_index = std::stoi(r[c_sent]);
    } catch (const std::exception&) {
      throw InputError(cfg.manifest + ": row " + std::to_string(i) +
                       ": bad turn or sentence index");
    }
    p.statement = r[c_st];
    p.question = r[c_q];
    for (auto c : cfg.conditions) {
      write_csv_row(out, {sample_id(p), std::string(to_string(c)), permute(p, c)});
      ++n;
    }
  }
  write_file(out_path(cfg, "prompts.csv").string(), out.str());
  log << "prompts: " << n << "\n";
}

void cmd_normalize(const RunConfig& cfg, std::ostream& log) {
  require_path(cfg.alignment_dir, "alignment dir", true);
  require_path(cfg.audio_dir, "audio dir", true);
  require_output(cfg);
  const auto ids = list_stems(cfg.alignment_dir, ".json");
  if (ids.empty()) throw InputError("no alignments under " + cfg.alignment_dir);

  std::vector<std::optional<Failure>> results(ids.size());
  parallel_for(ids.size(), cfg.worker_count(), [&](std::size_t i) {
    results[i] = guarded(ids[i], [&] {
      const auto al = parse_alignment((fs::path(cfg.alignment_dir) / (ids[i] + ".json")).string());
      const auto audio = read_wav((fs::path(cfg.audio_dir) / (ids[i] + ".wav")).string());
      const auto norm = normalize_silences(audio, al, cfg.silence);
      write_wav(cfg.stereo ? assemble_stereo(norm.audio) : norm.audio,
                out_path(cfg, ids[i] + ".wav").string());
      write_file(out_path(cfg, ids[i] + ".json").string(),
                 dump(with_digest(alignment_to_json(norm.alignment), cfg)));
    });
  });
  std::vector<Failure> failures;
  for (auto& r : results) if (r) failures.push_back(std::move(*r));
  write_failures(cfg, "normalize_exceptions.csv", failures);
  log << "normalized " << ids.size() - failures.size() << " of " << ids.size() << "\n";
  throw_if_failed(failures, ids.size());
}

void cmd_manipulate(const RunConfig& cfg, std::ostream& log) {
  require_path(cfg.alignment_dir, "alignment dir", true);
  require_path(cfg.audio_dir, "audio dir", true);
  require_output(cfg);
  cfg.prosody.validate();
  const auto ids = list_stems(cfg.alignment_dir, ".json");
  if (ids.empty()) throw InputError("no alignments under " + cfg.alignment_dir);

  struct Row {
    double target_hz = 0.0;
    std::size_t clipped = 0;
    double before = 0.0, after = 0.0;
    std::string warnings;
  };
  std::vector<Row> rows(ids.size());
  std::vector<std::optional<Failure>> results(ids.size());
  parallel_for(ids.size(), cfg.worker_count(), [&](std::size_t i) {
    results[i] = guarded(ids[i], [&] {
      const auto al = parse_alignment((fs::path(cfg.alignment_dir) / (ids[i] + ".json")).string());
      auto audio = read_wav((fs::path(cfg.audio_dir) / (ids[i] + ".wav")).string());
      if (audio.channels() == 2) {
        // Normalized stereo input: edit the agent channel only.
        audio = AudioBuffer(audio.channel(0), audio.sample_rate(), 1);
      }
      const auto m = manipulate_final_syllable(audio, al, cfg.prosody);
      const auto& w = al.words()[al.last_statement_word()];
      write_wav(cfg.stereo ? assemble_stereo(m.edit.audio) : m.edit.audio,
                out_path(cfg, ids[i] + ".wav").string());
      write_file(out_path(cfg, ids[i] + ".json").string(),
                 dump(with_digest(alignment_to_json(m.alignment), cfg)));
      std::string warn;
      for (const auto& s : m.edit.warnings) warn += (warn.empty() ? "" : "; ") + s;
      rows[i] = {m.target_hz, m.edit.clipped_samples, w.offset - w.onset,
                 static_cast<double>(m.span.size()) / audio.sample_rate(), warn};
    });
  });

  // The default edit sizes are not published settings; say so in the output.
  const ManipulationParams defaults;
  const auto& pp = cfg.prosody;
  const bool stand_in = pp.gain_db == defaults.gain_db &&
                        pp.stretch_factor == defaults.stretch_factor &&
                        pp.pitch_target.kind == defaults.pitch_target.kind;
  std::ostringstream out;
  out << digest_line(cfg);
  out << "# gain_db=" << format_number(pp.gain_db)
      << " stretch=" << format_number(pp.stretch_factor) << " pitch_target="
      << (pp.pitch_target.kind == PitchTarget::Kind::kFixed
              ? format_number(pp.pitch_target.hz) + "Hz"
              : std::string("span-mean"))
      << (stand_in ? " (stand-in defaults)" : "") << "\n";
  write_csv_row(out, {"id", "target_hz", "clipped_samples", "word_duration",
                      "edited_duration", "warnings"});
  std::vector<Failure> failures;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (results[i]) {
      failures.push_back(std::move(*results[i]));
      continue;
    }
    const auto& r = rows[i];
    write_csv_row(out, {ids[i], format_number(r.target_hz), std::to_string(r.clipped),
                        format_number(r.before), format_number(r.after), r.warnings});
    if (r.clipped) log << ids[i] << ": " << r.clipped << " samples clipped\n";
  }
  write_file(out_path(cfg, "manipulation.csv").string(), out.str());
  write_failures(cfg, "manipulate_exceptions.csv", failures);
  log << "manipulated " << ids.size() - failures.size() << " of " << ids.size() << "\n";
  throw_if_failed(failures, ids.size());
}

void cmd_oracle_sim(const RunConfig& cfg, std::ostream& log) {
  if (cfg.scenario.empty()) throw InputError("scenario is not set");
  require_output(cfg);
  const CodecConfig codec(cfg.frame_rate);
  std::vector<std::string> ids;
  fs::path root;
  if (fs::is_directory(cfg.scenario)) {
    root = cfg.scenario;
    ids = list_stems(cfg.scenario, ".json");
  } else {
    require_path(cfg.scenario, "scenario");
    root = fs::path(cfg.scenario).parent_path();
    ids.push_back(fs::path(cfg.scenario).stem().string());
  }
  if (ids.empty()) throw InputError("no scenarios under " + cfg.scenario);

  std::vector<std::optional<Failure>> results(ids.size());
  parallel_for(ids.size(), cfg.worker_count(), [&](std::size_t i) {
    results[i] = guarded(ids[i], [&] {
      const auto path = (root / (ids[i] + ".json")).string();
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(read_file(path));
      } catch (const nlohmann::json::parse_error& e) {
        throw InputError(path + ": " + e.what());
      }
      const auto trace = oracle_distributions(scenario_from_json(j), codec);
      write_trace(trace, out_path(cfg, ids[i] + ".vapt").string());
      if (j.contains("alignment")) {
        const auto al = alignment_from_json(j["alignment"]);
        write_file(out_path(cfg, ids[i] + ".json").string(),
                   dump(with_digest(alignment_to_json(al), cfg)));
      }
    });
  });
  std::vector<Failure> failures;
  for (auto& r : results) if (r) failures.push_back(std::move(*r));
  log << "oracle traces: " << ids.size() - failures.size() << " of " << ids.size() << "\n";
  throw_if_failed(failures, ids.size());
}

EvaluateSummary cmd_evaluate(const RunConfig& cfg, std::ostream& log) {
  require_path(cfg.alignment_dir, "alignment dir", true);
  require_path(cfg.trace_dir, "trace dir", true);
  require_output(cfg);
  if (!(cfg.threshold > 0.0 && cfg.threshold < 1.0)) {
    throw ValidationError("threshold must lie in (0, 1)");
  }
  (void)CodecConfig(cfg.frame_rate);  // validates the rate

  std::vector<std::string> systems = cfg.systems;
  if (systems.empty()) {
    for (const auto& e : fs::directory_iterator(cfg.alignment_dir)) {
      if (e.is_directory()) systems.push_back(e.path().filename().string());
    }
    std::sort(systems.begin(), systems.end());
  }
  if (systems.empty()) throw InputError("no system directories under " + cfg.alignment_dir);

  struct Sample {
    std::string system, condition, id;
  };
  std::vector<Sample> samples;
  for (const auto& sys : systems) {
    for (auto cond : cfg.conditions) {
      const auto dir = fs::path(cfg.alignment_dir) / sys / std::string(to_string(cond));
      if (!fs::is_directory(dir)) continue;
      for (const auto& e : fs::directory_iterator(dir)) {
        if (e.is_regular_file() && e.path().extension() == ".json") {
          samples.push_back({sys, std::string(to_string(cond)), e.path().stem().string()});
        }
      }
    }
  }
  std::stable_sort(samples.begin(), samples.end(), [](const Sample& a, const Sample& b) {
    return std::tie(a.system, a.id) < std::tie(b.system, b.id);
  });
  // Keep condition order as configured within a system.
  std::map<std::string, int> cond_rank;
  for (std::size_t i = 0; i < cfg.conditions.size(); ++i) {
    cond_rank[std::string(to_string(cfg.conditions[i]))] = static_cast<int>(i);
  }
  std::stable_sort(samples.begin(), samples.end(), [&](const Sample& a, const Sample& b) {
    return std::make_tuple(a.system, cond_rank[a.condition], a.id) <
           std::make_tuple(b.system, cond_rank[b.condition], b.id);
  });
  if (samples.empty()) throw InputError("no alignments found under " + cfg.alignment_dir);

  struct Outcome {
    std::optional<Classification> result;
    std::size_t frames = 0;
    std::string error;
    bool rate_mismatch = false;
  };
  std::vector<Outcome> outcomes(samples.size());
  const ClassifyOptions opts{cfg.rule, cfg.threshold};
  parallel_for(samples.size(), cfg.worker_count(), [&](std::size_t i) {
    const auto& s = samples[i];
    auto& o = outcomes[i];
    const auto base = fs::path(cfg.trace_dir) / s.system / s.condition / s.id;
    std::string trace_path;
    for (const char* ext : {".vapt", ".trace", ".ptrace"}) {
      auto p = base;
      p += ext;
      if (fs::is_regular_file(p)) {
        trace_path = p.string();
        break;
      }
    }
    if (trace_path.empty()) {
      o.error = "missing trace";
      return;
    }
    try {
      const auto al = parse_alignment(
          (fs::path(cfg.alignment_dir) / s.system / s.condition / (s.id + ".json")).string());
      const auto trace = load_prob_trace(trace_path, cfg.weighting);
      if (std::abs(trace.frame_rate() - cfg.frame_rate) > 1e-3) {
        o.rate_mismatch = true;
        o.error = trace_path + ": trace frame rate " + format_number(trace.frame_rate()) +
                  " Hz differs from configured " + format_number(cfg.frame_rate) + " Hz";
        return;
      }
      const auto regions = derive_regions(al, cfg.frame_rate, cfg.regions);
      o.result = classify_detailed(trace, regions, opts);
      o.frames = trace.size();
    } catch (const std::exception& e) {
      o.error = e.what();
    }
  });

  for (const auto& o : outcomes) {
    if (o.rate_mismatch) throw ValidationError(o.error);
  }

  // Reduction, single-threaded and in sample order.
  std::ostringstream samples_csv, exceptions_csv;
  samples_csv << digest_line(cfg);
  write_csv_row(samples_csv, {"system", "condition", "id", "weak_hold", "strong_hold",
                              "early_yield", "late_yield", "pause_now", "pause_fut",
                              "early_fut", "tail_now", "tail_fut", "frames"});
  exceptions_csv << digest_line(cfg);
  write_csv_row(exceptions_csv, {"system", "condition", "id", "reason"});

  CorpusReport report;
  report.rule = cfg.rule;
  std::vector<TurnMetrics> group;
  EvaluateSummary summary;
  auto flush = [&](const Sample& s) {
    if (!group.empty()) report.groups.push_back(aggregate_corpus(group, s.system, s.condition));
    group.clear();
  };
  auto b = [](bool v) { return v ? "1" : "0"; };
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    const auto& o = outcomes[i];
    if (o.result) {
      const auto& m = o.result->metrics;
      const auto& mm = o.result->means;
      write_csv_row(samples_csv,
                    {s.system, s.condition, s.id, b(m.weak_hold), b(m.strong_hold),
                     b(m.early_yield), b(m.late_yield), format_number(mm.pause_now),
                     format_number(mm.pause_fut), format_number(mm.early_fut),
                     format_number(mm.tail_now), format_number(mm.tail_fut),
                     std::to_string(o.frames)});
      group.push_back(m);
      ++summary.evaluated;
    } else {
      write_csv_row(exceptions_csv, {s.system, s.condition, s.id, o.error});
      ++summary.skipped;
    }
    const bool last = i + 1 == samples.size();
    if (last || samples[i + 1].system != s.system || samples[i + 1].condition != s.condition) {
      flush(s);
    }
  }

  write_file(out_path(cfg, "samples.csv").string(), samples_csv.str());
  write_file(out_path(cfg, "exceptions.csv").string(), exceptions_csv.str());
  log << "evaluated " << summary.evaluated << " samples, skipped " << summary.skipped << "\n";
  if (summary.evaluated == 0) throw InputError("no sample could be evaluated; see exceptions.csv");

  std::ostringstream report_csv;
  write_report_csv(report, report_csv, cfg.digest());
  write_file(out_path(cfg, "report.csv").string(), report_csv.str());

  auto j = report_to_json(report);
  j["config_sha256"] = cfg.digest();
  j["config"] = cfg.to_json();
  j["bin_weighting"] = std::string(to_string(cfg.weighting));
  j["threshold"] = cfg.threshold;
  j["evaluated"] = summary.evaluated;
  j["skipped"] = summary.skipped;
  write_file(out_path(cfg, "report.json").string(), dump(j));

  std::vector<ExternalMetric> external;
  if (!cfg.external_metrics.empty()) external = load_external_metrics(cfg.external_metrics);
  write_file(out_path(cfg, "report.md").string(), render_markdown(report, external, cfg.digest()));
  return summary;
}

void cmd_plot(const RunConfig& cfg, std::ostream& log) {
  require_path(cfg.audio, "audio");
  require_path(cfg.alignment, "alignment");
  require_path(cfg.trace, "trace");
  require_output(cfg);
  const auto audio = read_wav(cfg.audio);
  const auto al = parse_alignment(cfg.alignment);
  const auto trace = load_prob_trace(cfg.trace, cfg.weighting);
  const auto regions = derive_regions(al, trace.frame_rate(), cfg.regions);
  const auto stem = fs::path(cfg.trace).stem().string();
  const auto art = render_plot(audio, trace, regions, stem, cfg.digest());
  for (const auto& w : art.warnings) log << "warning: " << w << "\n";
  write_file(out_path(cfg, stem + ".svg").string(), art.svg);
  write_file(out_path(cfg, stem + ".csv").string(), art.csv);
  write_file(out_path(cfg, stem + ".json").string(), dump(art.sidecar));
  log << "wrote " << stem << ".svg\n";
}

void cmd_report(const RunConfig& cfg, std::ostream& log) {
  require_path(cfg.report_json, "report json");
  require_output(cfg);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(cfg.report_json));
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(cfg.report_json + ": " + e.what());
  }
  const auto report = report_from_json(j);
  std::vector<ExternalMetric> external;
  if (!cfg.external_metrics.empty()) external = load_external_metrics(cfg.external_metrics);
  write_file(out_path(cfg, "tables.md").string(),
             render_markdown(report, external, cfg.digest()));
  log << "tables for " << report.groups.size() << " groups\n";
}

}  // namespace vapeval::cli
