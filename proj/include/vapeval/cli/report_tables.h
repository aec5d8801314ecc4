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

#ifndef VAPEVAL_CLI_REPORT_TABLES_H_
#define VAPEVAL_CLI_REPORT_TABLES_H_

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vapeval/turn_metrics.h"

namespace vapeval::cli {

// A value computed outside this tool (MOS, WER, ...), merged into tables.
struct ExternalMetric {
  std::string system;
  std::string condition;
  std::string metric;
  double value = 0.0;
};

// CSV with header system,condition,metric,value. Throws InputError.
std::vector<ExternalMetric> parse_external_metrics(std::string_view csv_text);
std::vector<ExternalMetric> load_external_metrics(const std::string& path);

// One Markdown table per condition: rows are metrics, columns systems,
// cells integer percentages. External metrics follow as extra rows.
std::string render_markdown(const CorpusReport& report,
                            std::span<const ExternalMetric> external,
                            std::string_view config_digest);

}  // namespace vapeval::cli

#endif  // VAPEVAL_CLI_REPORT_TABLES_H_
