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

#include "vapeval/cli/report_tables.h"

#include <algorithm>
#include <charconv>
#include <map>
#include <sstream>

#include "vapeval/csv.h"
#include "vapeval/errors.h"

namespace vapeval::cli {

namespace {

template <typename T>
void push_unique(std::vector<T>& v, const T& x) {
  if (std::find(v.begin(), v.end(), x) == v.end()) v.push_back(x);
}

}  // namespace

std::vector<ExternalMetric> parse_external_metrics(std::string_view csv_text) {
  const auto rows = parse_csv(csv_text);
  if (rows.empty()) throw InputError("external metrics CSV is empty");
  const std::vector<std::string> want = {"system", "condition", "metric",
                                         "value"};
  if (rows[0] != want) {
    throw InputError(
        "external metrics CSV header must be system,condition,metric,value");
  }
  std::vector<ExternalMetric> out;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (r.size() != 4) {
      throw InputError("external metrics row " + std::to_string(i) +
                       ": expected 4 fields");
    }
    ExternalMetric m{r[0], r[1], r[2], 0.0};
    const auto* end = r[3].data() + r[3].size();
    auto [p, ec] = std::from_chars(r[3].data(), end, m.value);
    if (ec != std::errc() || p != end) {
      throw InputError("external metrics row " + std::to_string(i) +
                       ": bad value '" + r[3] + "'");
    }
    out.push_back(std::move(m));
  }
  return out;
}

std::vector<ExternalMetric> load_external_metrics(const std::string& path) {
  return parse_external_metrics(read_file(path));
}

std::string render_markdown(const CorpusReport& report,
                            std::span<const ExternalMetric> external,
                            std::string_view config_digest) {
  std::vector<std::string> conditions, systems;
  for (const auto& g : report.groups) {
    push_unique(conditions, g.condition);
    push_unique(systems, g.system);
  }
  for (const auto& m : external) {
    push_unique(conditions, m.condition);
    push_unique(systems, m.system);
  }

  std::ostringstream out;
  out << "# Turn-taking evaluation\n\n";
  out << "Decision rule: `" << to_string(report.rule) << "`  \n";
  if (!config_digest.empty()) out << "Config SHA-256: `" << config_digest << "`\n";

  static const std::pair<const char*, double MetricPercentages::*> kRows[] = {
      {"Weak Hold", &MetricPercentages::weak_hold},
      {"Strong Hold", &MetricPercentages::strong_hold},
      {"Early Yield", &MetricPercentages::early_yield},
      {"Late Yield", &MetricPercentages::late_yield},
  };

  for (const auto& cond : conditions) {
    std::map<std::string, const MetricPercentages*> by_system;
    for (const auto& g : report.groups) {
      if (g.condition == cond) by_system[g.system] = &g;
    }
    out << "\n## " << cond << "\n\n| Metric |";
    for (const auto& s : systems) out << " " << s << " |";
    out << "\n|---|";
    for (std::size_t i = 0; i < systems.size(); ++i) out << "---:|";
    out << "\n";
    for (const auto& [label, field] : kRows) {
      out << "| " << label << " (%) |";
      for (const auto& s : systems) {
        auto it = by_system.find(s);
        if (it == by_system.end()) {
          out << " - |";
        } else {
          out << " " << display_percent(it->second->*field) << " |";
        }
      }
      out << "\n";
    }
    out << "| n |";
    for (const auto& s : systems) {
      auto it = by_system.find(s);
      out << " " << (it == by_system.end() ? std::string("-")
                                            : std::to_string(it->second->n))
          << " |";
    }
    out << "\n";

    std::vector<std::string> extra;
    for (const auto& m : external) {
      if (m.condition == cond) push_unique(extra, m.metric);
    }
    for (const auto& metric : extra) {
      out << "| " << metric << " |";
      for (const auto& s : systems) {
        const ExternalMetric* hit = nullptr;
        for (const auto& m : external) {
          if (m.condition == cond && m.system == s && m.metric == metric) hit = &m;
        }
        out << " " << (hit ? format_number(hit->value) : std::string("-"))
            << " |";
      }
      out << "\n";
    }
  }
  return out.str();
}

}  // namespace vapeval::cli
